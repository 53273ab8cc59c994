#pragma once

#include <vector>

#include "cofo/types.hpp"

namespace cofo {

struct PairwiseComparison {
  int group_a = 0;
  int group_b = 0;
  double z = 0.0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
};

struct StatTestResult {
  double h_statistic = 0.0;
  double p_value = 1.0;
  std::vector<PairwiseComparison> pairwise;
};

/// Rank-based H test with tie correction; p from the chi-square tail with
/// (groups - 1) degrees of freedom. All-identical data yields H = 0, p = 1.
StatTestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// Post-hoc pairwise z tests on pooled ranks with tie correction, two-sided
/// p-values adjusted by Benjamini-Hochberg across all pairs.
StatTestResult dunn_fdr(const std::vector<std::vector<double>>& groups);

/// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi_square_sf(double x, double dof);

/// Two-sided normal tail probability for a z statistic.
double normal_two_sided_p(double z);

/// Benjamini-Hochberg step-up adjustment; output is ordered like the input.
std::vector<double> benjamini_hochberg(const std::vector<double>& raw_p);

}  // namespace cofo
