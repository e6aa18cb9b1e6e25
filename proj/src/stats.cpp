#include "segdiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "segdiff/error.hpp"
#include "segdiff/rng.hpp"

namespace segdiff::stats {

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0 && b > 0)) throw InvalidArgument("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_sf(double f, double d1, double d2) {
  if (std::isnan(f)) return 1.0;
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& diffs,
                                    const WilcoxonOptions& options) {
  WilcoxonResult r;
  std::vector<double> kept;
  for (double d : diffs) {
    if (!std::isfinite(d)) throw InvalidArgument("wilcoxon: non-finite difference");
    if (d != 0.0 || options.zeros == ZeroPolicy::kPratt) kept.push_back(d);
  }
  std::vector<double> abs_vals(kept.size());
  std::transform(kept.begin(), kept.end(), abs_vals.begin(), [](double d) { return std::abs(d); });
  const auto ranks = average_ranks(abs_vals);

  // Signed ranks of the nonzero differences (Pratt ranks zeros, then drops them).
  std::vector<double> nz_ranks;
  std::vector<double> nz;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] == 0.0) continue;
    nz.push_back(kept[i]);
    nz_ranks.push_back(ranks[i]);
    (kept[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
  }
  r.n = nz.size();
  if (r.n == 0) {
    r.all_zero = true;
    return r;
  }

  std::vector<double> sorted = nz;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                          : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                                   sorted[sorted.size() / 2]);
  const double total = std::accumulate(nz_ranks.begin(), nz_ranks.end(), 0.0);
  if (median != 0.0) r.direction = median > 0 ? 1 : -1;
  else if (r.w_plus != r.w_minus) r.direction = r.w_plus > r.w_minus ? 1 : -1;

  if (r.n <= options.exact_max_n) {
    // Doubled ranks are integers even with ties (average ranks are k/2).
    std::vector<std::size_t> doubled(r.n);
    std::size_t max_sum = 0;
    for (std::size_t i = 0; i < r.n; ++i) {
      doubled[i] = static_cast<std::size_t>(std::llround(2.0 * nz_ranks[i]));
      max_sum += doubled[i];
    }
    std::vector<double> ways(max_sum + 1, 0.0);
    ways[0] = 1.0;
    std::size_t reach = 0;
    for (std::size_t v : doubled) {
      for (std::size_t s = reach + 1; s-- > 0;)
        if (ways[s] != 0.0) ways[s + v] += ways[s];
      reach += v;
    }
    const auto obs = static_cast<std::size_t>(std::llround(2.0 * r.w_plus));
    double ge = 0.0, le = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
      if (s >= obs) ge += ways[s];
      if (s <= obs) le += ways[s];
    }
    const double all = std::ldexp(1.0, static_cast<int>(r.n));
    r.p_greater = ge / all;
    r.p_less = le / all;
    r.exact = true;
  } else {
    double sum_sq = 0.0;
    for (double x : nz_ranks) sum_sq += x * x;
    const double mean = total / 2.0;
    const double sd = std::sqrt(sum_sq / 4.0);
    const double cc = options.continuity ? 0.5 : 0.0;
    r.z = (r.w_plus - mean) / sd;
    r.p_greater = normal_sf((r.w_plus - mean - cc) / sd);
    r.p_less = normal_cdf((r.w_plus - mean + cc) / sd);
  }
  r.p_greater = std::min(1.0, r.p_greater);
  r.p_less = std::min(1.0, r.p_less);
  r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_greater, r.p_less));
  return r;
}

AnovaResult anova_one_way(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw InvalidArgument("anova: need at least two groups");
  double grand = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw InvalidArgument("anova: every group needs at least two values");
    for (double x : g) grand += x;
    n += g.size();
  }
  grand /= static_cast<double>(n);
  AnovaResult r;
  for (const auto& g : groups) {
    const double m = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    r.ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) r.ss_within += (x - m) * (x - m);
  }
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(n - groups.size());
  if (r.ss_within == 0.0) {
    r.f = r.ss_between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    r.f = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
  }
  r.p = r.f == 0.0 ? 1.0 : f_sf(r.f, r.df_between, r.df_within);
  return r;
}

TwoWayResult anova_two_way(const std::vector<std::vector<std::vector<double>>>& cells_in,
                           std::uint64_t seed) {
  const std::size_t a = cells_in.size();
  if (a < 2) throw InvalidArgument("two-way anova: factor A needs at least two levels");
  const std::size_t b = cells_in[0].size();
  if (b < 2) throw InvalidArgument("two-way anova: factor B needs at least two levels");
  std::size_t r = std::numeric_limits<std::size_t>::max();
  bool balanced = true;
  for (const auto& row : cells_in) {
    if (row.size() != b) throw InvalidArgument("two-way anova: ragged design");
    for (const auto& cell : row) {
      if (cell.empty()) throw InvalidArgument("two-way anova: empty cell");
      if (r != std::numeric_limits<std::size_t>::max() && cell.size() != r) balanced = false;
      r = std::min(r, cell.size());
    }
  }
  for (const auto& row : cells_in)
    for (const auto& cell : row)
      if (cell.size() != r) balanced = false;
  if (r < 2) throw InvalidArgument("two-way anova: every cell needs at least two values");

  auto cells = cells_in;
  TwoWayResult res;
  if (!balanced) {
    Rng rng(seed);
    for (auto& row : cells)
      for (auto& cell : row) {
        // Partial Fisher-Yates, then keep the chosen values in original order.
        std::vector<std::size_t> idx(cell.size());
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < r; ++i)
          std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        idx.resize(r);
        std::sort(idx.begin(), idx.end());
        std::vector<double> kept;
        for (auto i : idx) kept.push_back(cell[i]);
        cell = std::move(kept);
      }
    res.subsampled = true;
  }
  res.replicates = r;

  const double rr = static_cast<double>(r), aa = static_cast<double>(a), bb = static_cast<double>(b);
  std::vector<std::vector<double>> cell_mean(a, std::vector<double>(b));
  std::vector<double> row_mean(a, 0.0), col_mean(b, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      const auto& c = cells[i][j];
      cell_mean[i][j] = std::accumulate(c.begin(), c.end(), 0.0) / rr;
      row_mean[i] += cell_mean[i][j] / bb;
      col_mean[j] += cell_mean[i][j] / aa;
      grand += cell_mean[i][j] / (aa * bb);
    }
  for (std::size_t i = 0; i < a; ++i) res.ss_a += bb * rr * std::pow(row_mean[i] - grand, 2);
  for (std::size_t j = 0; j < b; ++j) res.ss_b += aa * rr * std::pow(col_mean[j] - grand, 2);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      res.ss_ab += rr * std::pow(cell_mean[i][j] - row_mean[i] - col_mean[j] + grand, 2);
      for (double x : cells[i][j]) res.ss_error += std::pow(x - cell_mean[i][j], 2);
    }
  // Rounding leaves tiny positive sums for exactly additive or constant data.
  const double scale = res.ss_a + res.ss_b + res.ss_ab + res.ss_error;
  auto snap = [&](double& ss) {
    if (ss <= 1e-12 * scale) ss = 0.0;
  };
  snap(res.ss_a);
  snap(res.ss_b);
  snap(res.ss_ab);
  snap(res.ss_error);

  res.df_a = aa - 1;
  res.df_b = bb - 1;
  res.df_ab = (aa - 1) * (bb - 1);
  res.df_error = aa * bb * (rr - 1);
  const double mse = res.ss_error / res.df_error;
  auto ratio = [&](double ss, double df) {
    if (ss == 0.0) return 0.0;
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return (ss / df) / mse;
  };
  res.f_a = ratio(res.ss_a, res.df_a);
  res.f_b = ratio(res.ss_b, res.df_b);
  res.f_interaction = ratio(res.ss_ab, res.df_ab);
  res.p_a = f_sf(res.f_a, res.df_a, res.df_error);
  res.p_b = f_sf(res.f_b, res.df_b, res.df_error);
  res.p_interaction = f_sf(res.f_interaction, res.df_ab, res.df_error);
  return res;
}

std::vector<double> holm(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return p[x] < p[y]; });
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double v = std::min(1.0, static_cast<double>(m - k) * p[order[k]]);
    running = std::max(running, v);
    adj[order[k]] = running;
  }
  return adj;
}

}  // namespace segdiff::stats
