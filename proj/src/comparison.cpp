#include "segdiff/comparison.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "segdiff/error.hpp"
#include "segdiff/parallel.hpp"
#include "segdiff/segmenter.hpp"

namespace segdiff {

std::string pair_label(std::size_t k) {
  const auto [x, y] = kSegmentPairs.at(k);
  return "D(" + std::string(short_name(x)) + "," + std::string(short_name(y)) + ")";
}

namespace {

const std::vector<Maybe<FeatureValue>>* find_values(const DocSegmentValues& d,
                                                    const std::string& feature) {
  auto it = d.features.find(feature);
  if (it == d.features.end()) return nullptr;
  for (const auto& v : it->second)
    if (!v) return nullptr;
  return &it->second;
}

std::optional<double> delta_value(const FeatureValue& a, const FeatureValue& b,
                                  const DeltaOptions& options) {
  auto d = delta(a, b, options);
  if (!d) return std::nullopt;
  return d->value;
}

// (human, ai) document pairs sharing a pair_id, ordered by pair_id then ids.
std::vector<std::pair<const DocSegmentValues*, const DocSegmentValues*>> units_of(
    const std::vector<DocSegmentValues>& docs) {
  std::map<std::string, std::pair<std::vector<const DocSegmentValues*>,
                                  std::vector<const DocSegmentValues*>>>
      groups;
  for (const auto& d : docs) {
    if (d.pair_id.empty()) continue;
    auto& g = groups[d.pair_id];
    (d.human ? g.first : g.second).push_back(&d);
  }
  std::vector<std::pair<const DocSegmentValues*, const DocSegmentValues*>> out;
  auto by_id = [](auto* a, auto* b) { return a->id < b->id; };
  for (auto& [id, g] : groups) {
    std::sort(g.first.begin(), g.first.end(), by_id);
    std::sort(g.second.begin(), g.second.end(), by_id);
    for (auto* h : g.first)
      for (auto* a : g.second) out.emplace_back(h, a);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string bool_verdict(double p, double alpha) { return p < alpha ? "significant" : "ns"; }

}  // namespace

SourceDeltas source_deltas(const std::vector<DocSegmentValues>& docs, const std::string& feature,
                           const DeltaOptions& options, std::size_t* excluded) {
  SourceDeltas out;
  std::size_t dropped = 0;
  for (const auto& [h, a] : units_of(docs)) {
    const auto* hv = find_values(*h, feature);
    const auto* av = find_values(*a, feature);
    if (!hv || !av) {
      ++dropped;
      continue;
    }
    std::array<double, 3> dh{}, da{};
    bool ok = true;
    for (std::size_t k = 0; k < 3 && ok; ++k) {
      const auto x = static_cast<std::size_t>(kSegmentPairs[k].first);
      const auto y = static_cast<std::size_t>(kSegmentPairs[k].second);
      auto vh = delta_value(*(*hv)[x], *(*hv)[y], options);
      auto va = delta_value(*(*av)[x], *(*av)[y], options);
      if (!vh || !va) ok = false;
      else {
        dh[k] = *vh;
        da[k] = *va;
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    for (std::size_t k = 0; k < 3; ++k) {
      out.human[k].push_back(dh[k]);
      out.ai[k].push_back(da[k]);
    }
  }
  if (excluded) *excluded = dropped;
  return out;
}

SegmentDeltas segment_deltas(const std::vector<DocSegmentValues>& docs, const std::string& feature,
                             const DeltaOptions& options, std::size_t* excluded) {
  SegmentDeltas out;
  std::size_t dropped = 0;
  for (const auto& [h, a] : units_of(docs)) {
    const auto* hv = find_values(*h, feature);
    const auto* av = find_values(*a, feature);
    if (!hv || !av) {
      ++dropped;
      continue;
    }
    std::array<double, 3> d{};
    bool ok = true;
    for (std::size_t s = 0; s < 3 && ok; ++s) {
      auto v = delta_value(*(*hv)[s], *(*av)[s], options);
      if (!v) ok = false;
      else d[s] = *v;
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    for (std::size_t s = 0; s < 3; ++s) out[s].push_back(d[s]);
  }
  if (excluded) *excluded = dropped;
  return out;
}

ComparisonOutcome source_comparison(const SourceDeltas& deltas, const ComparisonOptions& options) {
  ComparisonOutcome out;
  out.kind = "source";
  out.n_units = deltas.human[0].size();
  if (out.n_units < options.min_pairs) out.flags.push_back("underpowered");
  for (std::size_t k = 0; k < 3; ++k)
    out.verdicts.push_back({pair_label(k), "wilcoxon", 0.0, 1.0, 1.0, "~", {}});
  if (out.n_units < 2) {
    out.flags.push_back("too_few_units");
    return out;
  }

  std::vector<std::vector<std::vector<double>>> cells(2);
  for (std::size_t k = 0; k < 3; ++k) {
    cells[0].push_back(deltas.human[k]);
    cells[1].push_back(deltas.ai[k]);
  }
  const auto aov = stats::anova_two_way(cells, options.seed);
  const bool gate = aov.p_interaction < options.alpha;
  TestRow gate_row{"source x pair", "anova2_interaction", aov.f_interaction, aov.p_interaction,
                   aov.p_interaction, bool_verdict(aov.p_interaction, options.alpha), {}};
  if (aov.subsampled) gate_row.flags.push_back("subsampled");
  out.tests.push_back(gate_row);

  std::array<stats::WilcoxonResult, 3> w;
  std::vector<double> p_raw;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double> diff(out.n_units);
    for (std::size_t u = 0; u < out.n_units; ++u) diff[u] = deltas.human[k][u] - deltas.ai[k][u];
    w[k] = stats::wilcoxon_signed_rank(diff, options.wilcoxon);
    p_raw.push_back(w[k].p_two_sided);
  }
  const auto p_adj = stats::holm(p_raw);
  for (std::size_t k = 0; k < 3; ++k) {
    TestRow row{pair_label(k), "wilcoxon", w[k].w_plus, p_raw[k], p_adj[k], "~", {}};
    if (w[k].all_zero) row.flags.push_back("all_zero");
    if (w[k].exact) row.flags.push_back("exact");
    if (p_adj[k] < options.alpha && w[k].direction != 0)
      row.verdict = w[k].direction > 0 ? "H>A" : "A>H";
    out.tests.push_back(row);
    auto& v = out.verdicts[k];
    v.statistic = row.statistic;
    v.p_raw = row.p_raw;
    v.p_adj = row.p_adj;
    v.flags = row.flags;
    if (gate) v.verdict = row.verdict;
    else v.flags.push_back("gate_ns");
  }
  return out;
}

std::pair<std::string, bool> render_ordering(const std::array<double, 3>& means,
                                             const std::array<int, 3>& relation) {
  // rel[x][y] = +1 when x is significantly greater than y.
  int rel[3][3] = {};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto x = static_cast<std::size_t>(kSegmentPairs[k].first);
    const auto y = static_cast<std::size_t>(kSegmentPairs[k].second);
    rel[x][y] = relation[k];
    rel[y][x] = -relation[k];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
  std::vector<std::vector<std::size_t>> groups{{order[0]}};
  for (std::size_t i = 1; i < 3; ++i) {
    if (rel[order[i - 1]][order[i]] == 1) groups.push_back({order[i]});
    else groups.back().push_back(order[i]);
  }
  std::array<std::size_t, 3> group_of{};
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (auto s : groups[g]) group_of[s] = g;
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) {
      if (x == y) continue;
      int implied = 0;
      if (group_of[x] < group_of[y]) implied = 1;
      if (group_of[x] > group_of[y]) implied = -1;
      if (implied != rel[x][y]) return {"~", true};
    }
  if (groups.size() == 1) return {"~", false};
  std::string out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto members = groups[g];
    std::sort(members.begin(), members.end());
    if (g) out += '>';
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) out += '~';
      out += short_name(static_cast<SegmentId>(members[i]));
    }
  }
  return {out, false};
}

ComparisonOutcome segment_comparison(const SegmentDeltas& deltas, const ComparisonOptions& options) {
  ComparisonOutcome out;
  out.kind = "segment";
  out.n_units = deltas[0].size();
  if (out.n_units < options.min_pairs) out.flags.push_back("underpowered");
  TestRow verdict{"ordering", "anova1", 0.0, 1.0, 1.0, "~", {}};
  if (out.n_units < 2) {
    out.flags.push_back("too_few_units");
    out.verdicts.push_back(verdict);
    return out;
  }
  const auto aov = stats::anova_one_way({deltas[0], deltas[1], deltas[2]});
  const bool gate = aov.p < options.alpha;
  out.tests.push_back(
      {"segment", "anova1", aov.f, aov.p, aov.p, bool_verdict(aov.p, options.alpha), {}});
  verdict.statistic = aov.f;
  verdict.p_raw = verdict.p_adj = aov.p;

  std::array<stats::WilcoxonResult, 3> w;
  std::vector<double> p_raw;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto x = static_cast<std::size_t>(kSegmentPairs[k].first);
    const auto y = static_cast<std::size_t>(kSegmentPairs[k].second);
    std::vector<double> diff(out.n_units);
    for (std::size_t u = 0; u < out.n_units; ++u) diff[u] = deltas[x][u] - deltas[y][u];
    w[k] = stats::wilcoxon_signed_rank(diff, options.wilcoxon);
    p_raw.push_back(w[k].p_two_sided);
  }
  const auto p_adj = stats::holm(p_raw);
  std::array<int, 3> relation{};
  for (std::size_t k = 0; k < 3; ++k) {
    if (p_adj[k] < options.alpha) relation[k] = w[k].direction;
    const auto x = kSegmentPairs[k].first, y = kSegmentPairs[k].second;
    std::string v = "~";
    if (relation[k] > 0) v = std::string(short_name(x)) + ">" + std::string(short_name(y));
    if (relation[k] < 0) v = std::string(short_name(y)) + ">" + std::string(short_name(x));
    TestRow row{std::string(short_name(x)) + " vs " + std::string(short_name(y)), "wilcoxon",
                w[k].w_plus, p_raw[k], p_adj[k], v, {}};
    if (w[k].all_zero) row.flags.push_back("all_zero");
    if (w[k].exact) row.flags.push_back("exact");
    out.tests.push_back(row);
  }
  if (!gate) {
    verdict.flags.push_back("gate_ns");
  } else {
    const auto [chain, intransitive] =
        render_ordering({mean(deltas[0]), mean(deltas[1]), mean(deltas[2])}, relation);
    verdict.verdict = chain;
    if (intransitive) verdict.flags.push_back("intransitive");
  }
  out.verdicts.push_back(verdict);
  return out;
}

ComparisonOutcome source_comparison(const std::vector<DocSegmentValues>& docs,
                                    const std::string& feature, const ComparisonOptions& options) {
  std::size_t excluded = 0;
  auto out = source_comparison(source_deltas(docs, feature, options.delta, &excluded), options);
  out.feature = feature;
  out.excluded = excluded;
  if (!docs.empty()) out.dataset = docs.front().dataset;
  return out;
}

ComparisonOutcome segment_comparison(const std::vector<DocSegmentValues>& docs,
                                     const std::string& feature, const ComparisonOptions& options) {
  std::size_t excluded = 0;
  auto out = segment_comparison(segment_deltas(docs, feature, options.delta, &excluded), options);
  out.feature = feature;
  out.excluded = excluded;
  if (!docs.empty()) out.dataset = docs.front().dataset;
  return out;
}

std::vector<DocSegmentValues> collect_segment_values(const Corpus& corpus, Setting setting,
                                                     std::uint64_t seed,
                                                     const std::vector<std::string>& bundle,
                                                     const FeatureResources& res, unsigned jobs,
                                                     std::vector<SkippedDocument>* skipped) {
  std::vector<std::optional<DocSegmentValues>> slots(corpus.size());
  std::vector<std::string> reasons(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto& doc = corpus[i];
    PreparedDocument prepared(doc);
    Segmentation seg;
    try {
      seg = segment_document(doc, prepared.sentences, setting, seed);
    } catch (const DataError& e) {
      if (e.kind() != "segmentation" && e.kind() != "unalignable" &&
          e.kind() != "missing_annotation")
        throw;
      reasons[i] = e.what();
      return;
    }
    DocSegmentValues v;
    v.id = doc.id;
    v.dataset = doc.domain.str();
    v.pair_id = doc.pair_id.value_or("");
    v.human = doc.source.is_human();
    for (auto s : kSegments) {
      auto values = extract_features(prepared, seg.range(s), bundle, res);
      for (auto& [id, value] : values) v.features[id].push_back(std::move(value));
    }
    slots[i] = std::move(v);
  });
  std::vector<DocSegmentValues> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (slots[i]) out.push_back(std::move(*slots[i]));
    else if (skipped) skipped->push_back({corpus[i].id, reasons[i]});
  }
  return out;
}

std::map<std::string, std::vector<DocSegmentValues>> by_dataset(
    const std::vector<DocSegmentValues>& docs) {
  std::map<std::string, std::vector<DocSegmentValues>> out;
  for (const auto& d : docs) out[d.dataset].push_back(d);
  return out;
}

}  // namespace segdiff
