#include "segdiff/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "segdiff/error.hpp"

namespace segdiff {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::kAbs: return "abs";
    case Measure::kJsd: return "jsd";
    case Measure::kCosine: return "cosine";
    case Measure::kCorrelation: return "correlation";
    case Measure::kJaccard: return "jaccard";
  }
  return "?";
}

Measure measure_for(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kScalar: return Measure::kAbs;
    case FeatureKind::kDistribution: return Measure::kJsd;
    case FeatureKind::kVector: return Measure::kCosine;
    case FeatureKind::kTokenSeries: return Measure::kCorrelation;
  }
  return Measure::kAbs;
}

namespace {

double entropy_term(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw InvalidArgument("jsd: length mismatch");
  double hm = 0.0, hp = 0.0, hq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw InvalidArgument("jsd: negative mass");
    hm += entropy_term(0.5 * (p[i] + q[i]));
    hp += entropy_term(p[i]);
    hq += entropy_term(q[i]);
  }
  return std::clamp(hm - 0.5 * (hp + hq), 0.0, 1.0);
}

double jsd(const Distribution& p, const Distribution& q) {
  if (p.categories != q.categories) throw InvalidArgument("jsd: category lists differ");
  return jsd(p.masses, q.masses);
}

double cosine_distance(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw InvalidArgument("cosine: length mismatch");
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw InvalidArgument("cosine: zero vector");
  return std::clamp(1.0 - dot / (std::sqrt(nu) * std::sqrt(nv)), 0.0, 2.0);
}

std::vector<double> resample(const std::vector<double>& s, std::size_t points) {
  std::vector<double> out(points);
  if (s.empty() || points == 0) return out;
  if (s.size() == 1 || points == 1) {
    std::fill(out.begin(), out.end(), s.front());
    return out;
  }
  const double scale = static_cast<double>(s.size() - 1) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    const double x = static_cast<double>(k) * scale;
    const std::size_t i = std::min(static_cast<std::size_t>(x), s.size() - 2);
    const double f = x - static_cast<double>(i);
    out[k] = s[i] + f * (s[i + 1] - s[i]);
  }
  return out;
}

Maybe<double> correlation_distance(const std::vector<double>& s, const std::vector<double>& t,
                                   std::size_t points) {
  if (s.size() < 3 || t.size() < 3) return Unavailable{"series shorter than 3"};
  const auto a = resample(s, points);
  const auto b = resample(t, points);
  const double n = static_cast<double>(points);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < points; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < points; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  // Relative threshold: a series that is constant up to rounding has no shape.
  auto flat = [&](double ss, double m) { return ss <= 1e-24 * std::max(1.0, m * m) * n; };
  if (flat(saa, ma) || flat(sbb, mb)) return Unavailable{"constant series"};
  const double r = sab / (std::sqrt(saa) * std::sqrt(sbb));
  return std::clamp(1.0 - r, 0.0, 2.0);
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

Maybe<DeltaResult> delta(const FeatureValue& a, const FeatureValue& b, const DeltaOptions& options,
                         std::string feature_id) {
  if (a.index() != b.index())
    throw InvalidArgument("delta: kind mismatch (" + std::string(to_string(kind_of(a))) + " vs " +
                          std::string(to_string(kind_of(b))) + ")");
  DeltaResult r;
  r.feature_id = std::move(feature_id);
  r.measure = measure_for(kind_of(a));
  switch (kind_of(a)) {
    case FeatureKind::kScalar:
      r.value = std::abs(std::get<Scalar>(a).value - std::get<Scalar>(b).value);
      break;
    case FeatureKind::kDistribution:
      r.value = jsd(std::get<Distribution>(a), std::get<Distribution>(b));
      if (options.jsd_sqrt) r.value = std::sqrt(r.value);
      break;
    case FeatureKind::kVector:
      r.value = cosine_distance(std::get<Vector>(a).values, std::get<Vector>(b).values);
      break;
    case FeatureKind::kTokenSeries: {
      auto c = correlation_distance(std::get<TokenSeries>(a).values,
                                    std::get<TokenSeries>(b).values, options.resample_points);
      if (!c) return Unavailable{c.reason()};
      r.value = *c;
      break;
    }
  }
  return r;
}

}  // namespace segdiff
