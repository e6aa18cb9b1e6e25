#include "enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace oracle {

SignedRankTail signed_rank_enumeration(const std::vector<double>& diffs) {
  std::vector<double> d;
  for (double x : diffs)
    if (x != 0.0) d.push_back(x);
  const std::size_t n = d.size();
  SignedRankTail out;
  if (n == 0) return out;

  // mean ranks of |d|, quadratic on purpose
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double below = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::fabs(d[j]) < std::fabs(d[i])) below += 1;
      if (std::fabs(d[j]) == std::fabs(d[i])) equal += 1;
    }
    rank[i] = below + (equal + 1) / 2;
  }
  double observed = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) observed += rank[i];

  std::uint64_t ge = 0, le = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += rank[i];
    if (w >= observed - 1e-9) ++ge;
    if (w <= observed + 1e-9) ++le;
  }
  out.greater = static_cast<double>(ge) / static_cast<double>(total);
  out.less = static_cast<double>(le) / static_cast<double>(total);
  out.two_sided = std::min(1.0, 2 * std::min(out.greater, out.less));
  return out;
}

namespace {

double search(const std::vector<std::size_t>& a, std::size_t i, const std::vector<std::size_t>& b,
              std::vector<bool>& used, std::size_t window) {
  if (i == a.size()) {
    double c = 0;
    for (bool u : used)
      if (!u) c += 1;
    return c;
  }
  double best = 1 + search(a, i + 1, b, used, window);
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    const std::size_t off = a[i] > b[j] ? a[i] - b[j] : b[j] - a[i];
    if (off > window) continue;
    used[j] = true;
    best = std::min(best, (off ? 0.5 : 0.0) + search(a, i + 1, b, used, window));
    used[j] = false;
  }
  return best;
}

}  // namespace

double min_edit_cost(const std::set<std::size_t>& a, const std::set<std::size_t>& b,
                     std::size_t window) {
  std::vector<std::size_t> av(a.begin(), a.end()), bv(b.begin(), b.end());
  std::vector<bool> used(bv.size(), false);
  return search(av, 0, bv, used, window);
}

}  // namespace oracle
