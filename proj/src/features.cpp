#include "segdiff/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <optional>

#include "segdiff/error.hpp"
#include "segdiff/readability.hpp"

namespace segdiff {

SentimentScores sentiment_subjectivity(const std::vector<std::string>& tokens,
                                       const SentimentLexicon& lexicon) {
  if (tokens.empty()) throw InvalidArgument("sentiment of an empty token list");
  double sum = 0.0;
  std::size_t known = 0, polar = 0;
  for (const auto& t : tokens) {
    const auto v = lexicon.valence(t);
    if (!v) continue;
    ++known;
    sum += *v;
    if (*v != 0.0) ++polar;
  }
  SentimentScores out;
  out.sentiment = {sum / static_cast<double>(tokens.size()), "valence"};
  out.subjectivity = {known == 0 ? 0.0 : static_cast<double>(polar) / static_cast<double>(known),
                      "fraction"};
  return out;
}

Scalar formality_score(const Distribution& pos) {
  auto pct = [&](std::string_view tag) { return 100.0 * pos.mass(tag); };
  const double f = pct("NOUN") + pct("PROPN") + pct("ADJ") + pct("ADP") + pct("DET") -
                   pct("PRON") - pct("VERB") - pct("AUX") - pct("ADV") - pct("INTJ") + 100.0;
  return {f / 2.0, "score"};
}

Maybe<Distribution> token_distribution(const std::vector<std::string>& tokens,
                                       const WordList& list) {
  std::vector<double> counts(list.words().size(), 0.0);
  for (const auto& t : tokens)
    if (auto i = list.index(t)) counts[*i] += 1.0;
  auto d = Distribution::from_counts(list.words(), counts);
  if (!d) return Unavailable{"no tokens from the word list"};
  return d;
}

Maybe<Distribution> token_distribution(const std::vector<std::string>& tokens,
                                       const CategoryLexicon& lexicon) {
  std::vector<double> counts(lexicon.categories().size(), 0.0);
  for (const auto& t : tokens)
    for (std::size_t c : lexicon.lookup(t)) counts[c] += 1.0;
  auto d = Distribution::from_counts(lexicon.categories(), counts);
  if (!d) return Unavailable{"no tokens covered by lexicon '" + lexicon.name() + "'"};
  return d;
}

Maybe<Distribution> tag_distribution(const std::vector<std::string>& tags,
                                     const std::vector<std::string>& categories) {
  std::vector<double> counts(categories.size(), 0.0);
  for (const auto& t : tags) {
    auto it = std::find(categories.begin(), categories.end(), t);
    if (it == categories.end()) throw InvalidArgument("tag '" + t + "' not in the tag set");
    counts[static_cast<std::size_t>(it - categories.begin())] += 1.0;
  }
  auto d = Distribution::from_counts(categories, counts);
  if (!d) return Unavailable{"no tags"};
  return d;
}

PerplexityResult ngram_perplexity(std::vector<double> surprisals) {
  if (surprisals.empty()) throw InvalidArgument("perplexity of an empty token list");
  const double mean = std::accumulate(surprisals.begin(), surprisals.end(), 0.0) /
                      static_cast<double>(surprisals.size());
  return {{std::exp2(mean), "perplexity"}, {std::move(surprisals)}};
}

PerplexityResult ngram_perplexity(const std::vector<std::vector<std::string>>& sentences,
                                  const NgramModel& lm) {
  std::vector<double> all;
  for (const auto& s : sentences) {
    auto v = lm.surprisals(s);
    all.insert(all.end(), v.begin(), v.end());
  }
  return ngram_perplexity(std::move(all));
}

Maybe<Scalar> burstiness(const std::vector<double>& sentence_surprisals) {
  const std::size_t n = sentence_surprisals.size();
  if (n < 2) return Unavailable{"fewer than 2 sentences"};
  const double mean = std::accumulate(sentence_surprisals.begin(), sentence_surprisals.end(), 0.0) /
                      static_cast<double>(n);
  if (mean == 0.0) return Unavailable{"mean surprisal is zero"};
  double ss = 0.0;
  for (double x : sentence_surprisals) ss += (x - mean) * (x - mean);
  return Scalar{std::sqrt(ss / static_cast<double>(n)) / mean, "cv"};
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("cosine of a zero embedding");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace

ContentFlow content_flow(const std::vector<std::vector<double>>& embeddings) {
  if (embeddings.empty()) throw InvalidArgument("content flow needs at least one embedding");
  const std::size_t dim = embeddings.front().size();
  for (const auto& e : embeddings)
    if (e.size() != dim) throw InvalidArgument("ragged sentence embeddings");
  Vector mean{std::vector<double>(dim, 0.0)};
  for (const auto& e : embeddings)
    for (std::size_t i = 0; i < dim; ++i) mean.values[i] += e[i];
  for (double& x : mean.values) x /= static_cast<double>(embeddings.size());
  if (embeddings.size() < 2) return {Unavailable{"fewer than 2 sentences"}, std::move(mean)};
  double sum = 0.0;
  for (std::size_t i = 1; i < embeddings.size(); ++i) sum += cosine(embeddings[i - 1], embeddings[i]);
  return {Scalar{sum / static_cast<double>(embeddings.size() - 1), "cosine"}, std::move(mean)};
}

std::size_t writeprints_dims(const WordList& function_words) {
  return kCharClassDims + kWordLengthDims + function_words.words().size();
}

Vector writeprints(const text::SentenceList& sentences, const WordList& function_words) {
  std::vector<double> chars(kCharClassDims, 0.0), lengths(kWordLengthDims, 0.0),
      fw(function_words.words().size(), 0.0);
  for (const auto& s : sentences.sentences) {
    for (unsigned char c : s.text) {
      std::size_t k;
      if (c >= 0x80) k = 5;
      else if (std::islower(c)) k = 0;
      else if (std::isupper(c)) k = 1;
      else if (std::isdigit(c)) k = 2;
      else if (std::isspace(c)) k = 3;
      else if (std::ispunct(c)) k = 4;
      else k = 5;
      chars[k] += 1.0;
    }
    for (const auto& t : s.tokens) {
      if (!t.is_word) continue;
      lengths[std::min(t.text.size(), kWordLengthDims) - 1] += 1.0;
      if (auto i = function_words.index(text::to_lower(t.text))) fw[*i] += 1.0;
    }
  }
  Vector out;
  for (auto* block : {&chars, &lengths, &fw}) {
    const double total = std::accumulate(block->begin(), block->end(), 0.0);
    for (double x : *block) out.values.push_back(total > 0 ? x / total : 0.0);
  }
  return out;
}

bool is_feature_id(std::string_view id) {
  return std::find(std::begin(kFeatureIds), std::end(kFeatureIds), id) != std::end(kFeatureIds);
}

std::vector<std::string> parse_feature_bundle(std::string_view spec) {
  std::vector<std::string> out;
  if (spec == "all") {
    for (auto id : kFeatureIds) out.emplace_back(id);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    std::string id(spec.substr(pos, comma - pos));
    if (!is_feature_id(id)) throw UsageError("unknown feature id '" + id + "'");
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    pos = comma + 1;
  }
  return out;
}

const Maybe<FeatureValue>& FeatureProfile::at(const std::string& feature_id) const {
  auto it = values.find(feature_id);
  if (it == values.end()) throw InvalidArgument("feature '" + feature_id + "' not in profile");
  return it->second;
}

PreparedDocument::PreparedDocument(const Document& d)
    : doc(&d), sentences(text::split_sentences(d.text)) {
  std::size_t w = 0;
  for (const auto& s : sentences.sentences) {
    word_offset.push_back(w);
    w += s.words;
  }
  word_offset.push_back(w);
}

namespace {

// Lazily computed intermediates shared by the features of one segment.
class SegmentView {
 public:
  SegmentView(const PreparedDocument& doc, SentenceRange range, const FeatureResources& res)
      : doc_(doc), range_(range), res_(res) {}

  const text::SentenceList& sentences() {
    if (!sentences_) sentences_ = text::slice(doc_.sentences, range_.first, range_.last);
    return *sentences_;
  }

  const std::vector<std::string>& words() {
    if (!words_) {
      words_.emplace();
      for (const auto& s : sentences().sentences)
        for (const auto& t : s.tokens)
          if (t.is_word) words_->push_back(text::to_lower(t.text));
    }
    return *words_;
  }

  Maybe<std::vector<std::string>> pos_tags() {
    std::vector<std::string> out;
    const auto& ingested = doc_.doc->annotations.pos_tags;
    if (ingested) {
      for (std::size_t i = range_.first; i < range_.last; ++i)
        for (const auto& t : (*ingested)[i]) out.push_back(normalize_upos(t));
    } else if (res_.pos_tagger) {
      for (const auto& s : sentences().sentences)
        for (auto& t : res_.pos_tagger->tag(s)) out.push_back(std::move(t));
    } else {
      return Unavailable{"no POS tags and built-in tagger disabled"};
    }
    return out;
  }

  Maybe<std::vector<std::string>> ner_tags() {
    std::vector<std::string> out;
    const auto& ingested = doc_.doc->annotations.ner_tags;
    const auto& list = sentences().sentences;
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::vector<std::string> tags;
      if (ingested) tags = (*ingested)[range_.first + i];
      else if (res_.ner_tagger) tags = res_.ner_tagger->tag(list[i]);
      else return Unavailable{"no NER tags and built-in tagger disabled"};
      for (std::size_t k = 0; k < tags.size(); ++k)
        if (list[i].tokens[k].is_word) out.push_back(normalize_ner(tags[k]));
    }
    return out;
  }

  // Per-sentence surprisal series.
  Maybe<std::vector<std::vector<double>>>& surprisals() {
    if (surprisals_) return *surprisals_;
    const auto& ppl = doc_.doc->annotations.token_ppl;
    std::vector<std::vector<double>> out;
    if (ppl) {
      for (std::size_t i = range_.first; i < range_.last; ++i) {
        std::vector<double> s;
        for (std::size_t k = doc_.word_offset[i]; k < doc_.word_offset[i + 1]; ++k)
          s.push_back(std::log2((*ppl)[k]));
        out.push_back(std::move(s));
      }
      surprisals_.emplace(std::move(out));
    } else if (res_.lm) {
      for (const auto& s : sentences().sentences) {
        std::vector<std::string> w;
        for (const auto& t : s.tokens)
          if (t.is_word) w.push_back(text::to_lower(t.text));
        out.push_back(res_.lm->surprisals(w));
      }
      surprisals_.emplace(std::move(out));
    } else {
      surprisals_.emplace(Unavailable{"no language model and no token_ppl annotation"});
    }
    return *surprisals_;
  }

  Maybe<ContentFlow>& flow() {
    if (flow_) return *flow_;
    const auto& emb = doc_.doc->annotations.sentence_embeddings;
    if (!emb) {
      flow_.emplace(Unavailable{"no sentence embeddings"});
    } else {
      std::vector<std::vector<double>> rows(emb->begin() + static_cast<std::ptrdiff_t>(range_.first),
                                            emb->begin() + static_cast<std::ptrdiff_t>(range_.last));
      flow_.emplace(content_flow(rows));
    }
    return *flow_;
  }

 private:
  const PreparedDocument& doc_;
  SentenceRange range_;
  const FeatureResources& res_;
  std::optional<text::SentenceList> sentences_;
  std::optional<std::vector<std::string>> words_;
  std::optional<Maybe<std::vector<std::vector<double>>>> surprisals_;
  std::optional<Maybe<ContentFlow>> flow_;
};

template <class T>
Maybe<FeatureValue> wrap(Maybe<T> m) {
  if (!m) return Unavailable{m.reason()};
  return FeatureValue{std::move(m.value())};
}

Maybe<FeatureValue> compute(const std::string& id, SegmentView& v, const FeatureResources& res) {
  if (id == "brunet") return FeatureValue{brunet_index(v.words())};
  if (id == "flesch") return FeatureValue{flesch_reading_ease(v.sentences())};
  if (id == "sentiment" || id == "subjectivity") {
    auto s = sentiment_subjectivity(v.words(), *res.sentiment);
    return FeatureValue{id == "sentiment" ? s.sentiment : s.subjectivity};
  }
  if (id == "formality" || id == "pos") {
    auto tags = v.pos_tags();
    if (!tags) return Unavailable{tags.reason()};
    auto d = tag_distribution(*tags, upos_categories());
    if (id == "pos") return wrap(std::move(d));
    if (!d) return Unavailable{d.reason()};
    return FeatureValue{formality_score(*d)};
  }
  if (id == "ner") {
    auto tags = v.ner_tags();
    if (!tags) return Unavailable{tags.reason()};
    return wrap(tag_distribution(*tags, ner_categories()));
  }
  if (id == "stopwords") return wrap(token_distribution(v.words(), *res.stopwords));
  if (id == "categories") return wrap(token_distribution(v.words(), *res.categories));
  if (id == "writeprints") return FeatureValue{writeprints(v.sentences(), *res.stopwords)};
  if (id == "perplexity" || id == "surprisal" || id == "token_surprisal" || id == "burstiness") {
    auto& s = v.surprisals();
    if (!s) return Unavailable{s.reason()};
    if (id == "burstiness") {
      std::vector<double> means;
      for (const auto& row : *s)
        if (!row.empty())
          means.push_back(std::accumulate(row.begin(), row.end(), 0.0) /
                          static_cast<double>(row.size()));
      return wrap(burstiness(means));
    }
    std::vector<double> all;
    for (const auto& row : *s) all.insert(all.end(), row.begin(), row.end());
    auto r = ngram_perplexity(std::move(all));
    if (id == "perplexity") return FeatureValue{r.avg_ppl};
    if (id == "token_surprisal") return FeatureValue{std::move(r.surprisal)};
    return FeatureValue{Scalar{std::log2(r.avg_ppl.value), "bits"}};
  }
  if (id == "content_flow" || id == "embedding") {
    auto& f = v.flow();
    if (!f) return Unavailable{f.reason()};
    if (id == "embedding") return FeatureValue{f->segment_embedding};
    if (!f->mean_cosine) return Unavailable{f->mean_cosine.reason()};
    return FeatureValue{*f->mean_cosine};
  }
  throw UsageError("unknown feature id '" + id + "'");
}

}  // namespace

std::map<std::string, Maybe<FeatureValue>> extract_features(const PreparedDocument& doc,
                                                            SentenceRange range,
                                                            const std::vector<std::string>& bundle,
                                                            const FeatureResources& res) {
  if (range.empty() || range.last > doc.sentences.size())
    throw InvalidArgument("invalid sentence range for document '" + doc.doc->id + "'");
  SegmentView view(doc, range, res);
  std::map<std::string, Maybe<FeatureValue>> out;
  for (const auto& id : bundle) out.insert_or_assign(id, compute(id, view, res));
  return out;
}

FeatureProfile extract_segment_features(const PreparedDocument& doc, const Segmentation& seg,
                                        SegmentId segment, const std::vector<std::string>& bundle,
                                        const FeatureResources& res) {
  FeatureProfile p;
  p.doc_id = doc.doc->id;
  p.setting = seg.setting;
  p.segment = segment;
  p.values = extract_features(doc, seg.range(segment), bundle, res);
  return p;
}

std::map<std::string, Maybe<FeatureValue>> extract_text_features(
    std::string_view text, const std::vector<std::string>& bundle, const FeatureResources& res) {
  Document d;
  d.id = "<text>";
  d.text = std::string(text);
  PreparedDocument prepared(d);
  return extract_features(prepared, {0, prepared.sentences.size()}, bundle, res);
}

nlohmann::json feature_value_json(const Maybe<FeatureValue>& v) {
  if (!v) return {{"kind", "unavailable"}, {"value", nullptr}, {"reason", v.reason()}};
  nlohmann::json out;
  out["kind"] = std::string(to_string(kind_of(*v)));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Scalar>) {
          out["value"] = x.value;
          out["unit"] = x.unit;
        } else if constexpr (std::is_same_v<T, Distribution>) {
          out["value"] = {{"categories", x.categories}, {"masses", x.masses}};
        } else {
          out["value"] = x.values;
        }
      },
      *v);
  return out;
}

std::vector<nlohmann::json> profile_json(const FeatureProfile& p) {
  std::vector<nlohmann::json> out;
  for (const auto& [id, v] : p.values) {
    nlohmann::json line = {{"id", p.doc_id},
                           {"setting", to_string(p.setting)},
                           {"segment", std::string(long_name(p.segment))},
                           {"feature_id", id}};
    line.update(feature_value_json(v));
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace segdiff
