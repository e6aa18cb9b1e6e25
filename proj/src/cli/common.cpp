#include "common.hpp"

#include <algorithm>
#include <set>

#include "segdiff/error.hpp"
#include "segdiff/lexicon.hpp"
#include "segdiff/ngram_lm.hpp"

namespace segdiff::cli {

void Output::add(std::string name, std::string contents) {
  for (const auto& [n, _] : files_)
    if (n == name) throw InvalidArgument("output " + name + " written twice");
  files_.emplace_back(std::move(name), std::move(contents));
}

void Output::commit(const RunConfig& config) const {
  io::write_atomic(dir_ / "config.json", to_json(config).dump(2) + "\n");
  for (const auto& [name, contents] : files_) io::write_atomic(dir_ / name, contents);
}

Corpus input_corpus(const RunConfig& c) {
  if (c.corpus.empty()) throw UsageError("--corpus is required");
  return load_corpus(c.corpus);
}

std::vector<std::string> feature_bundle(const std::vector<std::string>& specs) {
  std::set<std::string> wanted;
  for (const auto& s : specs)
    for (auto& f : parse_feature_bundle(s)) wanted.insert(f);
  std::vector<std::string> out;
  for (auto id : kFeatureIds)
    if (wanted.count(std::string(id))) out.emplace_back(id);
  return out;
}

bool needs_lm(const std::vector<std::string>& bundle) {
  for (const auto& f : bundle)
    if (f == "perplexity" || f == "surprisal" || f == "token_surprisal" || f == "burstiness")
      return true;
  return false;
}

namespace {

// Lexicons loaded from files outlive every FeatureResources that points at them.
struct LoadedLexicons {
  std::vector<std::unique_ptr<WordList>> words;
  std::vector<std::unique_ptr<CategoryLexicon>> categories;
  std::vector<std::unique_ptr<SentimentLexicon>> sentiment;
};
LoadedLexicons& lexicon_store() {
  static LoadedLexicons store;
  return store;
}

}  // namespace

FeatureResources make_resources(const RunConfig& c, const Corpus& corpus,
                                const std::vector<std::string>& bundle) {
  FeatureResources res;
  auto& store = lexicon_store();
  if (!c.stopwords.empty()) {
    store.words.push_back(std::make_unique<WordList>(WordList::load(c.stopwords)));
    res.stopwords = store.words.back().get();
  }
  if (!c.categories.empty()) {
    store.categories.push_back(
        std::make_unique<CategoryLexicon>(CategoryLexicon::load(c.categories)));
    res.categories = store.categories.back().get();
  }
  if (!c.sentiment.empty()) {
    store.sentiment.push_back(
        std::make_unique<SentimentLexicon>(SentimentLexicon::load(c.sentiment)));
    res.sentiment = store.sentiment.back().get();
  }
  if (!c.pos_tagger) res.pos_tagger.reset();
  if (!c.ner_tagger) res.ner_tagger.reset();
  if (!c.lm.empty()) {
    res.lm = std::make_shared<NgramModel>(NgramModel::load(c.lm));
  } else if (needs_lm(bundle)) {
    NgramOptions opts;
    opts.order = c.lm_order;
    opts.discount = c.lm_discount;
    try {
      res.lm = std::make_shared<NgramModel>(NgramModel::train(corpus, opts));
    } catch (const DataError& e) {
      if (e.kind() != "lm_too_small") throw;
    }
  }
  return res;
}

DeltaOptions delta_options(const RunConfig& c) {
  DeltaOptions d;
  d.jsd_sqrt = c.jsd == "distance";
  d.resample_points = c.resample_points;
  return d;
}

ComparisonOptions comparison_options(const RunConfig& c) {
  ComparisonOptions o;
  o.alpha = c.alpha;
  o.min_pairs = c.min_pairs;
  o.wilcoxon.zeros = c.zero_policy == "pratt" ? stats::ZeroPolicy::kPratt : stats::ZeroPolicy::kDiscard;
  o.wilcoxon.exact_max_n = c.exact_max_n;
  o.wilcoxon.continuity = c.continuity;
  o.delta = delta_options(c);
  o.seed = c.seed;
  return o;
}

std::string num(double v) { return io::format_number(v); }

std::string jsonl(const std::vector<nlohmann::json>& lines) {
  std::string out;
  for (const auto& j : lines) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string skipped_csv(const std::vector<SkippedDocument>& skipped) {
  io::CsvWriter w({"id", "reason"});
  for (const auto& s : skipped) w.row({s.id, s.reason});
  return w.str();
}

}  // namespace segdiff::cli
