#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "segdiff/maybe.hpp"

namespace segdiff {

struct Scalar {
  double value = 0.0;
  std::string unit;
};

// Non-negative masses over a fixed, ordered category list; sums to 1.
struct Distribution {
  std::vector<std::string> categories;
  std::vector<double> masses;

  // Normalises `counts`; unavailable when every count is zero.
  static Maybe<Distribution> from_counts(std::vector<std::string> categories,
                                         const std::vector<double>& counts);
  double mass(std::string_view category) const;
};

struct Vector {
  std::vector<double> values;
};

// One value per word token of the segment it was computed on.
struct TokenSeries {
  std::vector<double> values;
};

using FeatureValue = std::variant<Scalar, Distribution, Vector, TokenSeries>;

enum class FeatureKind { kScalar, kDistribution, kVector, kTokenSeries };

FeatureKind kind_of(const FeatureValue& v);
std::string_view to_string(FeatureKind k);

// Tolerance used when checking that distributions sum to one.
inline constexpr double kMassTolerance = 1e-9;

}  // namespace segdiff
