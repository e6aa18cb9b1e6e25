// stats, segment, features, compare-source, compare-segment,
// validate-segmentation, train-lm

#include <algorithm>
#include <map>
#include <optional>

#include "common.hpp"
#include "segdiff/error.hpp"
#include "segdiff/ngram_lm.hpp"
#include "segdiff/parallel.hpp"
#include "segdiff/segmenter.hpp"
#include "segdiff/text.hpp"

namespace segdiff::cli {

namespace {

const std::vector<std::string> kStatsHeader = {"dataset", "feature", "setting", "comparison",
                                               "statistic", "p_raw", "p_adj", "verdict", "flags"};

bool skippable(const DataError& e) {
  return e.kind() == "segmentation" || e.kind() == "unalignable" ||
         e.kind() == "missing_annotation";
}

std::string boundaries_str(const Segmentation& s) {
  return std::to_string(s.intro_end) + ";" + std::to_string(s.body_end);
}

void compare(const RunConfig& c, Output& out, bool source) {
  const auto corpus = input_corpus(c);
  const auto bundle = feature_bundle(c.features);
  const auto setting = parse_setting(c.setting);
  const auto res = make_resources(c, corpus, bundle);
  std::vector<SkippedDocument> skipped;
  const auto values = collect_segment_values(corpus, setting, c.seed, bundle, res, c.jobs, &skipped);
  const auto datasets = by_dataset(values);
  const auto options = comparison_options(c);

  struct Task {
    const std::vector<DocSegmentValues>* docs;
    std::string feature;
  };
  std::vector<Task> tasks;
  for (const auto& [name, docs] : datasets)
    for (const auto& f : bundle) tasks.push_back({&docs, f});
  std::vector<ComparisonOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), c.jobs, [&](std::size_t i) {
    outcomes[i] = source ? source_comparison(*tasks[i].docs, tasks[i].feature, options)
                         : segment_comparison(*tasks[i].docs, tasks[i].feature, options);
  });

  io::CsvWriter verdicts(kStatsHeader), tests(kStatsHeader);
  for (const auto& o : outcomes) {
    std::vector<std::string> outcome_flags = o.flags;
    outcome_flags.push_back("n=" + std::to_string(o.n_units));
    if (o.excluded) outcome_flags.push_back("excluded=" + std::to_string(o.excluded));
    for (const auto& r : o.verdicts) {
      auto flags = r.flags;
      flags.insert(flags.end(), outcome_flags.begin(), outcome_flags.end());
      verdicts.row({o.dataset, o.feature, c.setting, r.comparison, num(r.statistic), num(r.p_raw),
                    num(r.p_adj), r.verdict, io::join(flags, ";")});
    }
    for (const auto& r : o.tests)
      tests.row({o.dataset, o.feature, c.setting, r.comparison + " " + r.test, num(r.statistic),
                 num(r.p_raw), num(r.p_adj), r.verdict, io::join(r.flags, ";")});
  }
  const std::string name = source ? "compare_source" : "compare_segment";
  out.add(name + ".csv", verdicts.str());
  out.add(name + "_tests.csv", tests.str());
  out.add("skipped.csv", skipped_csv(skipped));
}

}  // namespace

void cmd_stats(const RunConfig& c, Output& out) {
  const auto corpus = input_corpus(c);
  const auto st = corpus_stats(corpus, parse_setting(c.setting), c.seed, c.jobs);
  io::CsvWriter w({"domain", "source", "n_texts", "avg_words", "avg_sentences", "intro_pct",
                   "body_pct", "conclusion_pct", "ibc"});
  for (const auto& r : st.rows)
    w.row({r.domain, r.source_class, std::to_string(r.n_texts), num(r.avg_words),
           num(r.avg_sentences), num(r.ibc_percent[0]), num(r.ibc_percent[1]),
           num(r.ibc_percent[2]), r.ibc_label()});
  out.add("corpus_stats.csv", w.str());
  out.add("skipped.csv", skipped_csv(st.skipped));
}

void cmd_segment(const RunConfig& c, Output& out) {
  const auto corpus = input_corpus(c);
  const auto setting = parse_setting(c.setting);
  std::vector<std::optional<nlohmann::json>> lines(corpus.size());
  std::vector<std::string> reasons(corpus.size());
  parallel_for(corpus.size(), c.jobs, [&](std::size_t i) {
    const auto& doc = corpus[i];
    const auto sentences = text::split_sentences(doc.text);
    try {
      const auto seg = segment_document(doc, sentences, setting, c.seed);
      nlohmann::json j = nlohmann::json::object();
      j["id"] = doc.id;
      j["setting"] = to_string(setting);
      j["intro_end"] = seg.intro_end;
      j["body_end"] = seg.body_end;
      j["body_window"] = seg.body_window
                             ? nlohmann::json::array({seg.body_window->first, seg.body_window->last})
                             : nlohmann::json(nullptr);
      lines[i] = std::move(j);
    } catch (const DataError& e) {
      if (!skippable(e)) throw;
      reasons[i] = e.what();
    }
  });
  std::vector<nlohmann::json> kept;
  std::vector<SkippedDocument> skipped;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (lines[i]) kept.push_back(std::move(*lines[i]));
    else skipped.push_back({corpus[i].id, reasons[i]});
  }
  out.add("segments.jsonl", jsonl(kept));
  out.add("skipped.csv", skipped_csv(skipped));
}

void cmd_features(const RunConfig& c, Output& out) {
  const auto corpus = input_corpus(c);
  const auto bundle = feature_bundle(c.features);
  const auto setting = parse_setting(c.setting);
  const auto res = make_resources(c, corpus, bundle);
  std::vector<std::string> chunks(corpus.size());
  std::vector<std::string> reasons(corpus.size());
  parallel_for(corpus.size(), c.jobs, [&](std::size_t i) {
    PreparedDocument prepared(corpus[i]);
    Segmentation seg;
    try {
      seg = segment_document(corpus[i], prepared.sentences, setting, c.seed);
    } catch (const DataError& e) {
      if (!skippable(e)) throw;
      reasons[i] = e.what();
      return;
    }
    for (auto s : kSegments)
      chunks[i] += jsonl(profile_json(extract_segment_features(prepared, seg, s, bundle, res)));
  });
  std::string all;
  std::vector<SkippedDocument> skipped;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!reasons[i].empty()) skipped.push_back({corpus[i].id, reasons[i]});
    all += chunks[i];
  }
  out.add("features.jsonl", all);
  out.add("skipped.csv", skipped_csv(skipped));
}

void cmd_compare_source(const RunConfig& c, Output& out) { compare(c, out, true); }
void cmd_compare_segment(const RunConfig& c, Output& out) { compare(c, out, false); }

namespace {

// {id, intro_end, body_end} records as written by `segment`.
std::map<std::string, std::pair<std::size_t, std::size_t>> load_boundaries(const std::string& path) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> out;
  const auto contents = io::read_file(path);
  std::size_t line_no = 0, pos = 0;
  while (pos < contents.size()) {
    const auto nl = std::min(contents.find('\n', pos), contents.size());
    const auto line = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("id").get<std::string>();
      if (!out.emplace(id, std::make_pair(j.at("intro_end").get<std::size_t>(),
                                          j.at("body_end").get<std::size_t>()))
               .second)
        throw DataError("duplicate_id", path + ": line " + std::to_string(line_no) +
                                            ": duplicate id '" + id + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, "record", e.what());
    }
  }
  return out;
}

}  // namespace

void cmd_validate_segmentation(const RunConfig& c, Output& out) {
  const auto corpus = input_corpus(c);
  const auto reference = parse_setting(c.reference);
  const bool from_file = !c.against.empty();
  const auto other_setting = parse_setting(c.setting);
  std::map<std::string, std::pair<std::size_t, std::size_t>> against;
  if (from_file) against = load_boundaries(c.against);
  const std::string other_name = from_file ? "file" : to_string(other_setting);

  struct Row {
    std::size_t n = 0;
    Segmentation a, b;
    double s = 0;
  };
  std::vector<std::optional<Row>> rows(corpus.size());
  std::vector<std::string> reasons(corpus.size());
  parallel_for(corpus.size(), c.jobs, [&](std::size_t i) {
    const auto& doc = corpus[i];
    const auto sentences = text::split_sentences(doc.text);
    try {
      Row r;
      r.n = sentences.size();
      r.a = segment_document(doc, sentences, reference, c.seed);
      if (from_file) {
        auto it = against.find(doc.id);
        if (it == against.end()) {
          reasons[i] = "no segmentation in " + c.against;
          return;
        }
        r.b.setting = reference;
        r.b.intro_end = it->second.first;
        r.b.body_end = it->second.second;
        r.b.n_sentences = r.n;
        r.b.validate();
      } else {
        r.b = segment_document(doc, sentences, other_setting, c.seed);
      }
      r.s = segmentation_similarity(r.a, r.b, r.n, c.near_miss_window);
      rows[i] = r;
    } catch (const DataError& e) {
      if (!skippable(e)) throw;
      reasons[i] = e.what();
    }
  });

  io::CsvWriter per_doc({"id", "dataset", "source", "n_sentences", "reference", "other",
                         "reference_boundaries", "other_boundaries", "similarity"});
  struct Acc {
    std::size_t n = 0;
    double sum = 0, min = 1, max = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  std::vector<SkippedDocument> skipped;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& doc = corpus[i];
    if (!rows[i]) {
      skipped.push_back({doc.id, reasons[i]});
      continue;
    }
    const auto& r = *rows[i];
    per_doc.row({doc.id, doc.domain.str(), doc.source.str(), std::to_string(r.n),
                 to_string(reference), other_name, boundaries_str(r.a), boundaries_str(r.b),
                 num(r.s)});
    auto& a = acc[{doc.domain.str(), doc.source.str()}];
    ++a.n;
    a.sum += r.s;
    a.min = std::min(a.min, r.s);
    a.max = std::max(a.max, r.s);
  }
  io::CsvWriter summary({"dataset", "source", "reference", "other", "n_docs", "mean_similarity",
                         "min_similarity", "max_similarity"});
  for (const auto& [key, a] : acc)
    summary.row({key.first, key.second, to_string(reference), other_name, std::to_string(a.n),
                 num(a.sum / static_cast<double>(a.n)), num(a.min), num(a.max)});
  out.add("segmentation_similarity.csv", per_doc.str());
  out.add("segmentation_similarity_summary.csv", summary.str());
  out.add("skipped.csv", skipped_csv(skipped));
}

void cmd_train_lm(const RunConfig& c, Output& out) {
  const auto corpus = input_corpus(c);
  NgramOptions opts;
  opts.order = c.lm_order;
  opts.discount = c.lm_discount;
  out.add("lm.txt", NgramModel::train(corpus, opts).serialize());
}

}  // namespace segdiff::cli
