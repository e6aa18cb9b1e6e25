#pragma once

// Source comparison (do human texts vary more across segments than AI texts?)
// and segment comparison (which segment separates human from AI most?).

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "segdiff/corpus.hpp"
#include "segdiff/divergence.hpp"
#include "segdiff/feature_value.hpp"
#include "segdiff/features.hpp"
#include "segdiff/stats.hpp"

namespace segdiff {

// Feature values of one document's three segments.
struct DocSegmentValues {
  std::string id;
  std::string dataset;
  std::string pair_id;
  bool human = true;
  // feature id -> values for intro, body, conclusion
  std::map<std::string, std::vector<Maybe<FeatureValue>>> features;
};

struct ComparisonOptions {
  double alpha = 0.05;
  std::size_t min_pairs = 30;
  stats::WilcoxonOptions wilcoxon;
  DeltaOptions delta;
  std::uint64_t seed = 0;  // used only when a design has to be balanced
};

struct TestRow {
  std::string comparison;
  std::string test;
  double statistic = 0.0;
  double p_raw = 1.0;
  double p_adj = 1.0;
  std::string verdict;
  std::vector<std::string> flags;
};

struct ComparisonOutcome {
  std::string dataset;
  std::string feature;
  std::string kind;  // "source" or "segment"
  std::vector<TestRow> verdicts;  // source: one per segment pair; segment: one ordering
  std::vector<TestRow> tests;     // gate and post-hoc details
  std::vector<std::string> flags;
  std::size_t n_units = 0;
  std::size_t excluded = 0;
};

// Segment pairs in report order: (I,B), (I,C), (B,C).
inline constexpr std::array<std::pair<SegmentId, SegmentId>, 3> kSegmentPairs = {{
    {SegmentId::kIntro, SegmentId::kBody},
    {SegmentId::kIntro, SegmentId::kConclusion},
    {SegmentId::kBody, SegmentId::kConclusion}}};
std::string pair_label(std::size_t pair_index);  // "D(I,B)"

// Per-unit deltas for source comparison: human[k] and ai[k] hold the unit's
// Delta for segment pair k.
struct SourceDeltas {
  std::array<std::vector<double>, 3> human;
  std::array<std::vector<double>, 3> ai;
};
// Per-unit Delta(H_s, A_s) for s = I, B, C.
using SegmentDeltas = std::array<std::vector<double>, 3>;

// Units are (human, AI) combinations sharing a pair_id, in id order. Units
// with an unavailable value or delta are counted in `excluded`.
SourceDeltas source_deltas(const std::vector<DocSegmentValues>& docs, const std::string& feature,
                           const DeltaOptions& delta, std::size_t* excluded = nullptr);
SegmentDeltas segment_deltas(const std::vector<DocSegmentValues>& docs, const std::string& feature,
                             const DeltaOptions& delta, std::size_t* excluded = nullptr);

ComparisonOutcome source_comparison(const SourceDeltas& deltas, const ComparisonOptions& options);
ComparisonOutcome segment_comparison(const SegmentDeltas& deltas, const ComparisonOptions& options);

// Convenience wrappers that build the deltas first.
ComparisonOutcome source_comparison(const std::vector<DocSegmentValues>& docs,
                                    const std::string& feature, const ComparisonOptions& options);
ComparisonOutcome segment_comparison(const std::vector<DocSegmentValues>& docs,
                                     const std::string& feature, const ComparisonOptions& options);

// relation[k] for kSegmentPairs[k]: +1 first significantly greater, -1 second
// significantly greater, 0 indistinguishable. Segments are ordered by mean,
// descending; adjacent segments are joined by '>' when their pair is
// significant and '~' otherwise, and segments inside a '~' group are listed
// in I, B, C order. Returns {"~", true} when the chain contradicts a pairwise
// result, and "~" when nothing is significant.
std::pair<std::string, bool> render_ordering(const std::array<double, 3>& means,
                                             const std::array<int, 3>& relation);

// Splits a corpus by dataset (domain), segments every document under
// `setting` and computes `bundle` per segment. Documents that cannot be
// segmented are reported in `skipped`.
std::vector<DocSegmentValues> collect_segment_values(const Corpus& corpus, Setting setting,
                                                     std::uint64_t seed,
                                                     const std::vector<std::string>& bundle,
                                                     const FeatureResources& res, unsigned jobs,
                                                     std::vector<SkippedDocument>* skipped);

// Dataset names in sorted order and the documents of each.
std::map<std::string, std::vector<DocSegmentValues>> by_dataset(
    const std::vector<DocSegmentValues>& docs);

}  // namespace segdiff
