#pragma once

// Detection harness: detector scores per scope, evaluation, voting and the
// cross-segment-variation pair tiebreak.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segdiff/comparison.hpp"
#include "segdiff/corpus.hpp"
#include "segdiff/ngram_lm.hpp"

namespace segdiff {

enum class Scope { kTotal, kIntro, kBody, kConclusion, kIntroConclusion };
inline constexpr Scope kScopes[] = {Scope::kTotal, Scope::kIntro, Scope::kBody, Scope::kConclusion,
                                    Scope::kIntroConclusion};
std::string_view to_string(Scope s);  // total, intro, body, conclusion, intro+conclusion
Scope parse_scope(std::string_view s);

struct DetectorScore {
  std::string detector;
  std::string doc_id;
  Scope scope = Scope::kTotal;
  double score = 0.0;  // probability that the text is AI-written
};

inline constexpr double kDefaultThreshold = 0.5;

// JSON lines {detector, id, scope, score}.
std::vector<DetectorScore> load_detector_scores(const std::filesystem::path& path);
std::vector<DetectorScore> parse_detector_scores(const std::string& contents);
// Scores carried in the documents' detector_scores annotations.
std::vector<DetectorScore> scores_from_corpus(const Corpus& corpus);

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

// Rates of the AI class. Ratios with a zero denominator are reported as 0.
struct EvalReport {
  std::string detector;
  std::string scope;
  Confusion counts;
  double precision = 0, recall = 0, f1 = 0, fnr = 0;
};

EvalReport evaluate_labels(const std::vector<bool>& predicted_ai, const std::vector<bool>& truth_ai);
// Throws DataError listing the ids without a truth label.
EvalReport evaluate(const std::vector<DetectorScore>& scores,
                    const std::map<std::string, bool>& truth_ai,
                    double threshold = kDefaultThreshold);

// Majority of exactly three labels.
bool vote(const std::vector<bool>& labels);
// Mean of exactly three scores compared to the threshold.
bool vote_scores(const std::vector<double>& scores, double threshold = kDefaultThreshold);

// score = logistic((tau - s) / scale) where s is the text's mean surprisal.
struct BuiltinDetector {
  double tau = 0.0;
  double scale = 1.0;

  double score(double mean_surprisal) const;
  // Logistic regression on labelled mean surprisals (Newton with a small
  // ridge on the slope). Throws DataError unless AI texts come out as the
  // more predictable class.
  static BuiltinDetector fit(const std::vector<double>& mean_surprisal,
                             const std::vector<bool>& is_ai, double ridge = 1e-3);
};

// Mean per-token surprisal of `text` under `lm`; sentences are scored
// independently. Throws on a text without words.
double mean_surprisal(std::string_view text, const NgramModel& lm);

// ---- cross-segment variation ----------------------------------------------

inline const std::vector<std::string> kDefaultVariationBundle = {
    "stopwords", "pos", "brunet", "surprisal", "content_flow"};

struct Variation {
  std::string id;
  Maybe<double> value = Unavailable{"not computed"};
  std::vector<std::string> dropped;  // bundle features unavailable for this document
};

// Mean Delta over the three segment pairs per feature, z-normalised per
// feature over `docs` (population std), then averaged over features.
std::vector<Variation> cross_segment_variation(const std::vector<DocSegmentValues>& docs,
                                               const std::vector<std::string>& bundle,
                                               const DeltaOptions& delta = {});

// Raw (unnormalised) per-feature variation of one document.
std::map<std::string, std::optional<double>> raw_variation(const DocSegmentValues& doc,
                                                           const std::vector<std::string>& bundle,
                                                           const DeltaOptions& delta = {});

struct PairCandidate {
  double score = 0.0;
  double variation = 0.0;
};

enum class TiebreakMode { kScore, kVariation };

// Index (0 or 1) of the document judged to be AI. Differing labels decide;
// otherwise the higher score (kScore) or the lower variation (kVariation).
// Ties go to the first document.
int pair_tiebreak(const PairCandidate& a, const PairCandidate& b, TiebreakMode mode,
                  double threshold = kDefaultThreshold);

}  // namespace segdiff
