#pragma once

// Difference measures between feature values.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segdiff/feature_value.hpp"

namespace segdiff {

enum class Measure { kAbs, kJsd, kCosine, kCorrelation, kJaccard };
std::string_view to_string(Measure m);

struct DeltaOptions {
  bool jsd_sqrt = false;           // report sqrt(JSD) (a metric) instead of JSD
  std::size_t resample_points = 100;
};

struct DeltaResult {
  std::string feature_id;
  Measure measure = Measure::kAbs;
  double value = 0.0;
};

// Scalar -> |a - b|, Distribution -> JSD, Vector -> cosine distance,
// TokenSeries -> correlation distance. Throws on kind or category mismatch;
// unavailable when the correlation is undefined.
Maybe<DeltaResult> delta(const FeatureValue& a, const FeatureValue& b,
                         const DeltaOptions& options = {}, std::string feature_id = {});
Measure measure_for(FeatureKind kind);

// Base-2 Jensen-Shannon divergence, in [0, 1].
double jsd(const std::vector<double>& p, const std::vector<double>& q);
double jsd(const Distribution& p, const Distribution& q);

// 1 - cos(u, v), in [0, 2]. Throws on a zero vector or length mismatch.
double cosine_distance(const std::vector<double>& u, const std::vector<double>& v);

// Linear interpolation of `s` onto `points` equally spaced relative positions.
std::vector<double> resample(const std::vector<double>& s, std::size_t points);

// 1 - Pearson r after resampling both series, in [0, 2]. Unavailable for a
// series shorter than 3 or with zero variance after resampling.
Maybe<double> correlation_distance(const std::vector<double>& s, const std::vector<double>& t,
                                   std::size_t points = 100);

// |A n B| / |A u B|; 1 when both are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

}  // namespace segdiff
