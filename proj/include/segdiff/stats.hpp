#pragma once

// Significance tests: Wilcoxon signed-rank, one- and two-way ANOVA, Holm.

#include <cstdint>
#include <string>
#include <vector>

namespace segdiff::stats {

// Regularised incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
// Upper tail of the F distribution, P(F(d1, d2) >= f).
double f_sf(double f, double d1, double d2);
double normal_cdf(double z);
double normal_sf(double z);

enum class ZeroPolicy { kDiscard, kPratt };

struct WilcoxonOptions {
  ZeroPolicy zeros = ZeroPolicy::kDiscard;
  std::size_t exact_max_n = 25;  // exact distribution up to this many nonzero diffs
  bool continuity = true;        // normal approximation only
};

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double z = 0.0;           // normal approximation only
  double p_greater = 1.0;   // P(W+ >= observed)
  double p_less = 1.0;      // P(W+ <= observed)
  double p_two_sided = 1.0;
  std::size_t n = 0;        // nonzero differences used
  int direction = 0;        // sign of the median difference
  bool exact = false;
  bool all_zero = false;
};

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& diffs,
                                    const WilcoxonOptions& options = {});

// Average ranks (1-based) of `x`, ties sharing the mean rank.
std::vector<double> average_ranks(const std::vector<double>& x);

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
};

// Throws InvalidArgument with fewer than two groups, a group with fewer than
// two values, or no error degrees of freedom.
AnovaResult anova_one_way(const std::vector<std::vector<double>>& groups);

struct TwoWayResult {
  double ss_a = 0, ss_b = 0, ss_ab = 0, ss_error = 0;
  double df_a = 0, df_b = 0, df_ab = 0, df_error = 0;
  double f_a = 0, f_b = 0, f_interaction = 0;
  double p_a = 1, p_b = 1, p_interaction = 1;
  std::size_t replicates = 0;
  bool subsampled = false;  // unbalanced cells were trimmed to the smallest size
};

// cells[i][j] holds the observations of level i of factor A and level j of
// factor B. Unequal cells are subsampled to the smallest size with `seed`.
TwoWayResult anova_two_way(const std::vector<std::vector<std::vector<double>>>& cells,
                           std::uint64_t seed = 0);

// Holm step-down adjusted p-values, in input order.
std::vector<double> holm(const std::vector<double>& p);

}  // namespace segdiff::stats
