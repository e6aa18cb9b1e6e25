// detect and pair-detect

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "common.hpp"
#include "segdiff/detect.hpp"
#include "segdiff/error.hpp"
#include "segdiff/ngram_lm.hpp"
#include "segdiff/parallel.hpp"
#include "segdiff/rng.hpp"
#include "segdiff/segmenter.hpp"
#include "segdiff/text.hpp"

namespace segdiff::cli {

namespace {

// detector -> doc id -> scope -> score
using ScoreTable = std::map<std::string, std::map<std::string, std::map<Scope, double>>>;

void add_scores(ScoreTable& t, const std::vector<DetectorScore>& scores) {
  for (const auto& s : scores) {
    if (!(s.score >= 0.0 && s.score <= 1.0))
      throw DataError("score_range", "score of " + s.detector + "/" + s.doc_id + " outside [0, 1]");
    if (!t[s.detector][s.doc_id].emplace(s.scope, s.score).second)
      throw DataError("duplicate_score", "duplicate score for detector " + s.detector + ", id " +
                                             s.doc_id + ", scope " + std::string(to_string(s.scope)));
  }
}

ScoreTable ingested_scores(const RunConfig& c, const Corpus& corpus) {
  ScoreTable t;
  add_scores(t, scores_from_corpus(corpus));
  if (!c.detector_scores.empty()) add_scores(t, load_detector_scores(c.detector_scores));
  return t;
}

std::string join_sentences(const text::SentenceList& s, SentenceRange r) {
  std::string out;
  for (std::size_t i = r.first; i < r.last; ++i) {
    if (i > r.first) out += ' ';
    out += s[i].text;
  }
  return out;
}

// Deterministic calibration/evaluation split by id.
bool in_calibration(const std::string& id, std::uint64_t seed, double fraction) {
  Rng rng(derive_seed(seed, "calibration:" + id));
  return rng.uniform() < fraction;
}

const std::string kBuiltinName = "builtin-ngram";

// Fits the built-in detector on the calibration split and scores the rest.
std::vector<DetectorScore> builtin_scores(const RunConfig& c, const Corpus& corpus,
                                          std::vector<std::string>* eval_ids) {
  Corpus calibration;
  std::vector<const Document*> evaluation;
  for (const auto& d : corpus) {
    if (in_calibration(d.id, c.seed, c.calibration_fraction)) calibration.push_back(d);
    else evaluation.push_back(&d);
  }
  if (calibration.empty() || evaluation.empty())
    throw DataError("calibration", "calibration split leaves an empty side");
  // Surprisal on text the model was trained on is biased low, so the logistic
  // fit uses documents the model has not seen.
  std::shared_ptr<const NgramModel> lm;
  Corpus fit_docs;
  if (!c.lm.empty()) {
    lm = std::make_shared<NgramModel>(NgramModel::load(c.lm));
    fit_docs = calibration;
  } else {
    Corpus lm_docs;
    for (auto& d : calibration)
      (in_calibration(d.id, c.seed + 1, 0.5) ? lm_docs : fit_docs).push_back(d);
    if (lm_docs.empty() || fit_docs.empty())
      throw DataError("calibration", "calibration split too small to hold out documents");
    NgramOptions opts;
    opts.order = c.lm_order;
    opts.discount = c.lm_discount;
    lm = std::make_shared<NgramModel>(NgramModel::train(lm_docs, opts));
  }
  std::vector<double> x(fit_docs.size());
  std::vector<bool> y(fit_docs.size());
  parallel_for(fit_docs.size(), c.jobs,
               [&](std::size_t i) { x[i] = mean_surprisal(fit_docs[i].text, *lm); });
  for (std::size_t i = 0; i < fit_docs.size(); ++i) y[i] = fit_docs[i].source.is_ai();
  const auto det = BuiltinDetector::fit(x, y);

  const auto setting = parse_setting(c.setting);
  std::vector<std::vector<DetectorScore>> per_doc(evaluation.size());
  parallel_for(evaluation.size(), c.jobs, [&](std::size_t i) {
    const auto& doc = *evaluation[i];
    auto add = [&](Scope s, const std::string& t) {
      if (text::word_count(t) == 0) return;
      per_doc[i].push_back({kBuiltinName, doc.id, s, det.score(mean_surprisal(t, *lm))});
    };
    add(Scope::kTotal, doc.text);
    const auto sentences = text::split_sentences(doc.text);
    try {
      const auto seg = segment_document(doc, sentences, setting, c.seed);
      const auto intro = join_sentences(sentences, seg.range(SegmentId::kIntro));
      const auto concl = join_sentences(sentences, seg.range(SegmentId::kConclusion));
      add(Scope::kIntro, intro);
      add(Scope::kBody, join_sentences(sentences, seg.range(SegmentId::kBody)));
      add(Scope::kConclusion, concl);
      add(Scope::kIntroConclusion, intro + "\n" + concl);
    } catch (const DataError& e) {
      if (e.kind() != "segmentation" && e.kind() != "unalignable" &&
          e.kind() != "missing_annotation")
        throw;
    }
  });
  std::vector<DetectorScore> out;
  for (std::size_t i = 0; i < evaluation.size(); ++i) {
    eval_ids->push_back(evaluation[i]->id);
    out.insert(out.end(), per_doc[i].begin(), per_doc[i].end());
  }
  return out;
}

struct Strategy {
  const char* name;
  std::optional<Scope> scope;  // nullopt: voting over intro/body/conclusion
};
const Strategy kStrategies[] = {{"total", Scope::kTotal},
                                {"voting", std::nullopt},
                                {"body-only", Scope::kBody},
                                {"intro+conclusion", Scope::kIntroConclusion}};

// Predicted labels of `strategy` for the documents of `ids` that have the
// needed scores. Voting requires all three segment scores once any is present.
std::vector<std::pair<std::string, bool>> predictions(
    const std::map<std::string, std::map<Scope, double>>& by_doc,
    const std::vector<std::string>& ids, const Strategy& strategy, const RunConfig& c) {
  std::vector<std::pair<std::string, bool>> out;
  std::vector<std::string> incomplete;
  for (const auto& id : ids) {
    auto it = by_doc.find(id);
    if (it == by_doc.end()) continue;
    const auto& scopes = it->second;
    if (strategy.scope) {
      auto s = scopes.find(*strategy.scope);
      if (s != scopes.end()) out.emplace_back(id, s->second >= c.threshold);
      continue;
    }
    std::vector<double> seg;
    for (auto s : {Scope::kIntro, Scope::kBody, Scope::kConclusion})
      if (auto f = scopes.find(s); f != scopes.end()) seg.push_back(f->second);
    if (seg.empty()) continue;
    if (seg.size() != 3) {
      incomplete.push_back(id);
      continue;
    }
    if (c.voting == "mean") {
      out.emplace_back(id, vote_scores(seg, c.threshold));
    } else {
      std::vector<bool> labels;
      for (double v : seg) labels.push_back(v >= c.threshold);
      out.emplace_back(id, vote(labels));
    }
  }
  if (!incomplete.empty())
    throw DataError("missing_scores", std::to_string(incomplete.size()) +
                                          " documents lack a segment score for voting, first: " +
                                          incomplete.front());
  return out;
}

std::string pct_change(double value, double base) {
  if (base == 0.0) return "";
  return num(100.0 * (value - base) / base);
}

}  // namespace

void cmd_detect(const RunConfig& c, Output& out) {
  const auto corpus = input_corpus(c);
  auto table = ingested_scores(c, corpus);
  std::vector<std::string> builtin_ids;
  if (c.builtin_detector) {
    if (table.count(kBuiltinName))
      throw DataError("duplicate_score", "ingested scores already use the name " + kBuiltinName);
    const auto scores = builtin_scores(c, corpus, &builtin_ids);
    add_scores(table, scores);
    std::vector<nlohmann::json> lines;
    for (const auto& s : scores)
      lines.push_back({{"detector", s.detector},
                       {"id", s.doc_id},
                       {"scope", std::string(to_string(s.scope))},
                       {"score", s.score}});
    out.add("builtin_scores.jsonl", jsonl(lines));
  }
  if (table.empty()) throw DataError("missing_scores", "no detector scores given");

  std::map<std::string, bool> truth;
  std::map<std::string, std::string> dataset_of;
  std::map<std::string, std::size_t> words_of;
  for (const auto& d : corpus) {
    truth[d.id] = d.source.is_ai();
    dataset_of[d.id] = d.domain.str();
    words_of[d.id] = text::word_count(d.text);
  }
  for (const auto& [det, by_doc] : table) {
    std::vector<std::string> unknown;
    for (const auto& [id, _] : by_doc)
      if (!truth.count(id)) unknown.push_back(id);
    if (!unknown.empty()) {
      std::string list;
      for (std::size_t i = 0; i < unknown.size() && i < 20; ++i) list += (i ? ", " : "") + unknown[i];
      throw DataError("missing_truth", det + ": " + std::to_string(unknown.size()) +
                                           " scored documents are not in the corpus: " + list);
    }
  }

  std::map<std::string, std::vector<std::string>> ids_by_dataset;
  for (const auto& d : corpus) ids_by_dataset[d.domain.str()].push_back(d.id);

  io::CsvWriter eval({"dataset", "detector", "strategy", "n", "tp", "fp", "tn", "fn", "precision",
                      "recall", "f1", "fnr", "f1_change_pct"});
  io::CsvWriter scopes({"dataset", "detector", "scope", "n", "tp", "fp", "tn", "fn", "precision",
                        "recall", "f1", "fnr"});
  io::CsvWriter by_length({"dataset", "detector", "strategy", "length_bin", "min_words",
                           "max_words", "n_ai", "fn", "fnr"});
  for (const auto& [dataset, ids] : ids_by_dataset) {
    for (const auto& [det, by_doc] : table) {
      std::optional<double> total_f1;
      for (const auto& strategy : kStrategies) {
        const auto pred = predictions(by_doc, ids, strategy, c);
        if (pred.empty()) continue;
        std::vector<bool> p, t;
        for (const auto& [id, label] : pred) {
          p.push_back(label);
          t.push_back(truth.at(id));
        }
        const auto r = evaluate_labels(p, t);
        if (std::string(strategy.name) == "total") total_f1 = r.f1;
        const auto& k = r.counts;
        eval.row({dataset, det, strategy.name, std::to_string(k.total()), std::to_string(k.tp),
                  std::to_string(k.fp), std::to_string(k.tn), std::to_string(k.fn),
                  num(r.precision), num(r.recall), num(r.f1), num(r.fnr),
                  total_f1 ? pct_change(r.f1, *total_f1) : std::string()});

        // FNR by document length over the AI texts, in equal-count bins.
        std::vector<std::pair<std::size_t, bool>> ai;  // words, missed
        for (const auto& [id, label] : pred)
          if (truth.at(id)) ai.emplace_back(words_of.at(id), !label);
        std::stable_sort(ai.begin(), ai.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        const std::size_t bins = std::min(c.length_bins, ai.size());
        for (std::size_t b = 0; b < bins; ++b) {
          const std::size_t lo = b * ai.size() / bins, hi = (b + 1) * ai.size() / bins;
          std::size_t fn = 0;
          for (std::size_t i = lo; i < hi; ++i) fn += ai[i].second;
          by_length.row({dataset, det, strategy.name, std::to_string(b),
                         std::to_string(ai[lo].first), std::to_string(ai[hi - 1].first),
                         std::to_string(hi - lo), std::to_string(fn),
                         num(static_cast<double>(fn) / static_cast<double>(hi - lo))});
        }
      }
      for (auto scope : kScopes) {
        std::vector<bool> p, t;
        for (const auto& id : ids) {
          auto it = by_doc.find(id);
          if (it == by_doc.end()) continue;
          auto s = it->second.find(scope);
          if (s == it->second.end()) continue;
          p.push_back(s->second >= c.threshold);
          t.push_back(truth.at(id));
        }
        if (p.empty()) continue;
        const auto r = evaluate_labels(p, t);
        const auto& k = r.counts;
        scopes.row({dataset, det, std::string(to_string(scope)), std::to_string(k.total()),
                    std::to_string(k.tp), std::to_string(k.fp), std::to_string(k.tn),
                    std::to_string(k.fn), num(r.precision), num(r.recall), num(r.f1), num(r.fnr)});
      }
    }
  }
  out.add("eval.csv", eval.str());
  out.add("eval_scopes.csv", scopes.str());
  out.add("fnr_by_length.csv", by_length.str());
}

void cmd_pair_detect(const RunConfig& c, Output& out) {
  const auto corpus = input_corpus(c);
  const auto table = ingested_scores(c, corpus);
  if (table.empty()) throw DataError("missing_scores", "no detector scores given");
  const auto bundle = feature_bundle(c.variation_bundle);
  const auto res = make_resources(c, corpus, bundle);
  std::vector<SkippedDocument> skipped;
  // Cross-segment variation is defined on the equal-thirds split.
  const auto values = collect_segment_values(corpus, Setting::kC1, c.seed, bundle, res, c.jobs, &skipped);
  const auto delta = delta_options(c);

  io::CsvWriter var_csv({"id", "dataset", "source", "variation", "dropped"});
  io::CsvWriter pair_csv({"dataset", "detector", "n_pairs", "n_agree", "base_accuracy",
                          "plus_accuracy", "change_pct"});
  for (const auto& [dataset, docs] : by_dataset(values)) {
    const auto variation = cross_segment_variation(docs, bundle, delta);
    std::map<std::string, std::optional<double>> var_of;
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const auto& v = variation[i];
      var_of[docs[i].id] = v.value ? std::optional<double>(*v.value) : std::nullopt;
      var_csv.row({docs[i].id, dataset, docs[i].human ? "human" : "ai",
                   v.value ? num(*v.value) : std::string(), io::join(v.dropped, ";")});
      if (docs[i].pair_id.empty()) continue;
      auto& p = pairs[docs[i].pair_id];
      (docs[i].human ? p.first : p.second).push_back(docs[i].id);
    }
    for (const auto& [det, by_doc] : table) {
      std::size_t n = 0, agree = 0, base_ok = 0, plus_ok = 0;
      std::vector<std::string> missing;
      auto total_score = [&](const std::string& id) -> std::optional<double> {
        auto it = by_doc.find(id);
        if (it == by_doc.end()) return std::nullopt;
        auto s = it->second.find(Scope::kTotal);
        if (s == it->second.end()) return std::nullopt;
        return s->second;
      };
      for (const auto& [pair_id, members] : pairs) {
        for (const auto& h : members.first)
          for (const auto& a : members.second) {
            const auto sh = total_score(h), sa = total_score(a);
            if (!sh || !sa) {
              missing.push_back(sh ? a : h);
              continue;
            }
            if (!var_of[h] || !var_of[a]) continue;
            // Presentation order is a seeded coin so ties carry no bias.
            Rng coin(derive_seed(c.seed, "pair:" + h + "|" + a));
            const bool ai_first = coin.bernoulli(0.5);
            const PairCandidate ph{*sh, *var_of[h]}, pa{*sa, *var_of[a]};
            const auto& first = ai_first ? pa : ph;
            const auto& second = ai_first ? ph : pa;
            const int ai_index = ai_first ? 0 : 1;
            ++n;
            agree += (first.score >= c.threshold) == (second.score >= c.threshold);
            base_ok += pair_tiebreak(first, second, TiebreakMode::kScore, c.threshold) == ai_index;
            plus_ok +=
                pair_tiebreak(first, second, TiebreakMode::kVariation, c.threshold) == ai_index;
          }
      }
      if (!missing.empty())
        throw DataError("missing_scores", det + ": " + std::to_string(missing.size()) +
                                              " paired documents have no total score, first: " +
                                              missing.front());
      if (n == 0) continue;
      const double base = static_cast<double>(base_ok) / static_cast<double>(n);
      const double plus = static_cast<double>(plus_ok) / static_cast<double>(n);
      pair_csv.row({dataset, det, std::to_string(n), std::to_string(agree), num(base), num(plus),
                    pct_change(plus, base)});
    }
  }
  out.add("pair_eval.csv", pair_csv.str());
  out.add("pair_variation.csv", var_csv.str());
  out.add("skipped.csv", skipped_csv(skipped));
}

}  // namespace segdiff::cli
