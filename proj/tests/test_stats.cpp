#include <doctest.h>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "enumeration.hpp"
#include "segdiff/error.hpp"
#include "segdiff/rng.hpp"
#include "segdiff/stats.hpp"

using namespace segdiff;
using namespace segdiff::stats;

namespace {

std::vector<double> random_diffs(Rng& rng, std::size_t n) {
  std::vector<double> d(n);
  for (double& x : d) {
    // small integer grid so ties and zeros occur
    x = rng.bernoulli(0.5) ? static_cast<double>(static_cast<int>(rng.below(9)) - 3)
                           : rng.normal(0.3, 1.0);
  }
  return d;
}

double boost_f_sf(double f, double d1, double d2) {
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f(d1, d2), f));
}

}  // namespace

TEST_CASE("incomplete beta against Boost") {
  Rng rng(1);
  for (int rep = 0; rep < 2000; ++rep) {
    const double a = rng.uniform(0.05, 60), b = rng.uniform(0.05, 60), x = rng.uniform();
    CHECK(incomplete_beta(a, b, x) == doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-10).scale(1));
  }
  CHECK(incomplete_beta(2, 3, 0) == 0.0);
  CHECK(incomplete_beta(2, 3, 1) == 1.0);
  CHECK_THROWS_AS(incomplete_beta(0, 1, 0.5), InvalidArgument);
}

TEST_CASE("F upper tail") {
  CHECK(f_sf(3.0, 2, 6) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(std::fabs(f_sf(3.0, 2, 6) - boost_f_sf(3.0, 2, 6)) < 1e-12);
  Rng rng(2);
  for (int rep = 0; rep < 1000; ++rep) {
    const double d1 = 1 + static_cast<double>(rng.below(10)), d2 = 1 + static_cast<double>(rng.below(200));
    const double f = rng.uniform(0, 12);
    CHECK(f_sf(f, d1, d2) == doctest::Approx(boost_f_sf(f, d1, d2)).epsilon(1e-9).scale(1));
  }
  CHECK(f_sf(0, 2, 6) == 1.0);
  CHECK(f_sf(INFINITY, 2, 6) == 0.0);
}

TEST_CASE("normal tails") {
  boost::math::normal n;
  for (double z : {-4.0, -1.3, 0.0, 0.7, 2.5})
    CHECK(normal_cdf(z) == doctest::Approx(boost::math::cdf(n, z)).epsilon(1e-12));
  CHECK(normal_sf(1.0) == doctest::Approx(1 - normal_cdf(1.0)));
}

TEST_CASE("average ranks") {
  CHECK(average_ranks({10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
}

TEST_CASE("wilcoxon fixtures") {
  auto r = wilcoxon_signed_rank({1, 2, 3, 4, 5});
  CHECK(r.w_minus == 0.0);
  CHECK(r.w_plus == 15.0);
  CHECK(r.exact);
  CHECK(r.p_greater == 0.03125);
  CHECK(r.p_two_sided == 0.0625);
  CHECK(r.direction == 1);

  auto sym = wilcoxon_signed_rank({-2, -1, 1, 2});
  CHECK(sym.p_two_sided == 1.0);

  auto zero = wilcoxon_signed_rank({0, 0, 0});
  CHECK(zero.all_zero);
  CHECK(zero.p_two_sided == 1.0);
  CHECK(zero.n == 0);
  CHECK_THROWS_AS(wilcoxon_signed_rank({1, NAN}), InvalidArgument);
}

TEST_CASE("exact wilcoxon equals sign enumeration for n <= 10") {
  Rng rng(42);
  for (int rep = 0; rep < 1000; ++rep) {
    auto d = random_diffs(rng, 1 + rng.below(10));
    auto got = wilcoxon_signed_rank(d);
    auto want = oracle::signed_rank_enumeration(d);
    if (got.all_zero) continue;
    CHECK(got.exact);
    CHECK(std::fabs(got.p_greater - want.greater) <= 1e-12);
    CHECK(std::fabs(got.p_less - want.less) <= 1e-12);
    CHECK(std::fabs(got.p_two_sided - want.two_sided) <= 1e-12);
  }
}

TEST_CASE("normal approximation tracks enumeration at n = 20") {
  Rng rng(7);
  WilcoxonOptions approx;
  approx.exact_max_n = 0;
  for (int rep = 0; rep < 8; ++rep) {
    std::vector<double> d(20);
    for (double& x : d) x = rng.normal(0.4, 1.0);
    auto got = wilcoxon_signed_rank(d, approx);
    CHECK_FALSE(got.exact);
    auto want = oracle::signed_rank_enumeration(d);
    CHECK(std::fabs(got.p_two_sided - want.two_sided) < 0.01);
    CHECK(std::fabs(got.p_greater - want.greater) < 0.01);
  }
}

TEST_CASE("n = 30 uses the normal approximation and stays near enumeration of a 20-subsample") {
  Rng rng(8);
  std::vector<double> d(30);
  for (double& x : d) x = rng.normal(0.0, 1.0);
  auto big = wilcoxon_signed_rank(d);
  CHECK_FALSE(big.exact);
  CHECK(big.z != 0.0);
  // same data-generating process, smaller sample
  std::vector<double> sub(d.begin(), d.begin() + 20);
  WilcoxonOptions approx;
  approx.exact_max_n = 0;
  CHECK(std::fabs(wilcoxon_signed_rank(sub, approx).p_two_sided -
                  oracle::signed_rank_enumeration(sub).two_sided) < 0.01);
}

TEST_CASE("zero handling") {
  auto discard = wilcoxon_signed_rank({0, 1, 2, 3});
  CHECK(discard.n == 3);
  CHECK(discard.w_plus == 6);
  WilcoxonOptions pratt;
  pratt.zeros = ZeroPolicy::kPratt;
  auto p = wilcoxon_signed_rank({0, 1, 2, 3}, pratt);
  CHECK(p.n == 3);
  CHECK(p.w_plus == 2 + 3 + 4);
}

TEST_CASE("one-way anova fixtures") {
  auto r = anova_one_way({{1, 2, 3}, {2, 3, 4}, {3, 4, 5}});
  CHECK(std::fabs(r.f - 3.0) < 1e-8);
  CHECK(r.ss_between == doctest::Approx(6.0));
  CHECK(r.ss_within == doctest::Approx(6.0));
  CHECK(r.df_between == 2);
  CHECK(r.df_within == 6);
  CHECK(std::fabs(r.p - 0.125) < 1e-3);
  CHECK(std::fabs(r.p - boost_f_sf(3.0, 2, 6)) < 1e-12);

  auto same = anova_one_way({{1, 2, 3}, {1, 2, 3}});
  CHECK(same.f == 0.0);
  CHECK(same.p == 1.0);
  CHECK_THROWS_AS(anova_one_way({{1, 2}}), InvalidArgument);
  CHECK_THROWS_AS(anova_one_way({{1, 2}, {3}}), InvalidArgument);
}

TEST_CASE("one-way F is invariant to shift and scale") {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::vector<double>> g(2 + rng.below(3));
    for (auto& grp : g) {
      grp.resize(2 + rng.below(6));
      for (double& x : grp) x = rng.normal();
    }
    const double f = anova_one_way(g).f;
    const double c = rng.bernoulli(0.5) ? rng.uniform(0.2, 9) : -rng.uniform(0.2, 9);
    const double s = rng.uniform(-50, 50);
    auto h = g;
    for (auto& grp : h)
      for (double& x : grp) x = c * x + s;
    CHECK(anova_one_way(h).f == doctest::Approx(f).epsilon(1e-9));
  }
}

TEST_CASE("two-way anova against a reference table") {
  // factor A: source (H, A); factor B: segment pair (IB, IC, BC)
  const std::vector<std::vector<std::vector<double>>> cells = {
      {{3.1, 2.4, 4.0, 3.3}, {1.2, 2.2, 1.9, 1.5}, {2.8, 3.6, 2.9, 3.9}},
      {{1.1, 1.6, 0.9, 1.4}, {1.3, 0.8, 1.7, 1.0}, {1.2, 1.9, 1.5, 0.7}}};
  auto r = anova_two_way(cells);
  CHECK(r.ss_a == doctest::Approx(13.05375).epsilon(1e-10));
  CHECK(r.ss_b == doctest::Approx(3.60583333333333).epsilon(1e-10));
  CHECK(r.ss_ab == doctest::Approx(2.8525).epsilon(1e-10));
  CHECK(r.ss_error == doctest::Approx(4.2575).epsilon(1e-10));
  CHECK(r.df_error == 18);
  CHECK(std::fabs(r.f_a - 55.189078097475) < 1e-8);
  CHECK(std::fabs(r.f_b - 7.62243100411039) < 1e-8);
  CHECK(std::fabs(r.f_interaction - 6.02994715208455) < 1e-8);
  CHECK(r.p_a == doctest::Approx(6.9209715181511e-07).epsilon(1e-7));
  CHECK(r.p_b == doctest::Approx(0.00399881888277943).epsilon(1e-7));
  CHECK(r.p_interaction == doctest::Approx(0.00989841146948585).epsilon(1e-7));
  CHECK_FALSE(r.subsampled);

  // swapping the source labels leaves the interaction alone
  auto swapped = anova_two_way({cells[1], cells[0]});
  CHECK(swapped.f_interaction == doctest::Approx(r.f_interaction).epsilon(1e-12));
}

TEST_CASE("additive cells have no interaction") {
  const double row[2] = {1.0, 4.0};
  const double col[3] = {0.5, 2.0, -1.0};
  const double noise[4] = {-0.3, 0.1, 0.4, -0.2};
  std::vector<std::vector<std::vector<double>>> exact(2, std::vector<std::vector<double>>(3)), noisy = exact;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 4; ++k) {
        exact[i][j].push_back(row[i] + col[j]);
        noisy[i][j].push_back(row[i] + col[j] + noise[k]);  // same noise pattern in every cell
      }
  auto r = anova_two_way(exact);
  CHECK(r.f_interaction == 0.0);
  CHECK(r.p_interaction == 1.0);
  auto n = anova_two_way(noisy);
  CHECK(n.f_interaction == 0.0);
  CHECK(n.f_a > 0.0);
}

TEST_CASE("unbalanced cells are subsampled reproducibly") {
  std::vector<std::vector<std::vector<double>>> cells = {
      {{1, 2, 3, 4}, {2, 3, 4}, {5, 6, 7}}, {{1, 1, 2}, {3, 2, 1, 0, 9}, {4, 4, 5}}};
  auto a = anova_two_way(cells, 5);
  auto b = anova_two_way(cells, 5);
  CHECK(a.subsampled);
  CHECK(a.replicates == 3);
  CHECK(a.f_interaction == b.f_interaction);
  CHECK_THROWS_AS(anova_two_way({{{1, 2}, {}}, {{1, 2}, {3, 4}}}), InvalidArgument);
  CHECK_THROWS_AS(anova_two_way({{{1}, {2}}, {{1}, {3}}}), InvalidArgument);
}

TEST_CASE("holm") {
  auto adj = holm({0.01, 0.04, 0.03});
  CHECK(adj[0] == doctest::Approx(0.03));
  CHECK(adj[2] == doctest::Approx(0.06));
  CHECK(adj[1] == doctest::Approx(0.06));
  auto capped = holm({0.5, 0.9});
  CHECK(capped[1] == 1.0);
  Rng rng(6);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> p(1 + rng.below(6));
    for (double& x : p) x = rng.uniform();
    auto h = holm(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(h[i] >= p[i]);
      CHECK(h[i] <= 1.0);
      for (std::size_t j = 0; j < p.size(); ++j)
        if (p[i] <= p[j]) CHECK(h[i] <= h[j]);
    }
  }
}
