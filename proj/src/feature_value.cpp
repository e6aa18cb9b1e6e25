#include "segdiff/feature_value.hpp"

#include <algorithm>
#include <numeric>

#include "segdiff/error.hpp"

namespace segdiff {

Maybe<Distribution> Distribution::from_counts(std::vector<std::string> categories,
                                              const std::vector<double>& counts) {
  if (categories.size() != counts.size())
    throw InvalidArgument("category list and counts differ in length");
  double total = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw InvalidArgument("negative count");
    total += c;
  }
  if (total <= 0.0) return Unavailable{"no tokens fall into any category"};
  Distribution d;
  d.categories = std::move(categories);
  d.masses.reserve(counts.size());
  for (double c : counts) d.masses.push_back(c / total);
  return d;
}

double Distribution::mass(std::string_view category) const {
  auto it = std::find(categories.begin(), categories.end(), category);
  if (it == categories.end()) throw InvalidArgument("unknown category '" + std::string(category) + "'");
  return masses[static_cast<std::size_t>(it - categories.begin())];
}

FeatureKind kind_of(const FeatureValue& v) {
  return static_cast<FeatureKind>(v.index());
}

std::string_view to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::kScalar: return "scalar";
    case FeatureKind::kDistribution: return "distribution";
    case FeatureKind::kVector: return "vector";
    case FeatureKind::kTokenSeries: return "token_series";
  }
  return "?";
}

}  // namespace segdiff
