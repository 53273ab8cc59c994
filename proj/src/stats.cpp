#include "cofo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cofo {

namespace {

// Regularized lower incomplete gamma by power series (x < a + 1).
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by continued fraction (x >= a + 1),
// modified Lentz evaluation.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

struct RankInfo {
  std::vector<std::vector<double>> ranks;  // per group, aligned with input
  double tie_sum = 0.0;                    // sum of (t^3 - t) over tie groups
  long n_total = 0;
};

RankInfo pooled_ranks(const std::vector<std::vector<double>>& groups) {
  RankInfo info;
  std::vector<std::pair<double, std::pair<int, int>>> pooled;  // value -> (group, index)
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t i = 0; i < groups[g].size(); ++i)
      pooled.push_back({groups[g][i], {static_cast<int>(g), static_cast<int>(i)}});
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  info.n_total = static_cast<long>(pooled.size());
  info.ranks.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) info.ranks[g].resize(groups[g].size());

  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // average of i+1..j
    if (t > 1.0) info.tie_sum += t * t * t - t;
    for (std::size_t k = i; k < j; ++k)
      info.ranks[pooled[k].second.first][pooled[k].second.second] = avg_rank;
    i = j;
  }
  return info;
}

void check_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ValueError("need at least two groups");
  for (const auto& g : groups)
    if (g.empty()) throw ValueError("groups must be nonempty");
}

}  // namespace

double chi_square_sf(double x, double dof) {
  if (dof <= 0.0) throw ValueError("degrees of freedom must be positive");
  return gamma_q(0.5 * dof, 0.5 * x);
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

std::vector<double> benjamini_hochberg(const std::vector<double>& raw_p) {
  const std::size_t m = raw_p.size();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return raw_p[a] < raw_p[b]; });
  std::vector<double> adjusted(m, 0.0);
  double running = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const double scaled = raw_p[idx[k]] * static_cast<double>(m) / static_cast<double>(k + 1);
    running = std::min(running, scaled);
    adjusted[idx[k]] = std::min(1.0, running);
  }
  return adjusted;
}

StatTestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  const RankInfo info = pooled_ranks(groups);
  const double n = static_cast<double>(info.n_total);
  const double tie_factor = 1.0 - info.tie_sum / (n * n * n - n);

  StatTestResult res;
  if (tie_factor <= 0.0) {  // every observation identical
    res.h_statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }
  double h = 0.0;
  for (const auto& r : info.ranks) {
    const double sum = std::accumulate(r.begin(), r.end(), 0.0);
    h += sum * sum / static_cast<double>(r.size());
  }
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
  h /= tie_factor;
  res.h_statistic = h;
  res.p_value = chi_square_sf(h, static_cast<double>(groups.size()) - 1.0);
  return res;
}

StatTestResult dunn_fdr(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  const RankInfo info = pooled_ranks(groups);
  const double n = static_cast<double>(info.n_total);
  const double variance_base =
      n * (n + 1.0) / 12.0 - info.tie_sum / (12.0 * (n - 1.0));

  StatTestResult res = kruskal_wallis(groups);
  std::vector<double> mean_rank(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g)
    mean_rank[g] = std::accumulate(info.ranks[g].begin(), info.ranks[g].end(), 0.0) /
                   static_cast<double>(info.ranks[g].size());

  std::vector<double> raw;
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      PairwiseComparison cmp;
      cmp.group_a = static_cast<int>(a);
      cmp.group_b = static_cast<int>(b);
      const double denom = variance_base * (1.0 / static_cast<double>(groups[a].size()) +
                                            1.0 / static_cast<double>(groups[b].size()));
      cmp.z = denom > 0.0 ? (mean_rank[a] - mean_rank[b]) / std::sqrt(denom) : 0.0;
      cmp.raw_p = denom > 0.0 ? normal_two_sided_p(cmp.z) : 1.0;
      raw.push_back(cmp.raw_p);
      res.pairwise.push_back(cmp);
    }
  const auto adjusted = benjamini_hochberg(raw);
  for (std::size_t i = 0; i < adjusted.size(); ++i) res.pairwise[i].adjusted_p = adjusted[i];
  return res;
}

}  // namespace cofo
