#pragma once

#include <vector>

#include "cofo/baselines.hpp"
#include "cofo/clustering.hpp"
#include "cofo/metrics.hpp"
#include "cofo/scenarios.hpp"
#include "cofo/stats.hpp"

namespace cofo {

struct BenchmarkOptions {
  std::vector<Method> methods{Method::ours, Method::nh, Method::nc, Method::na, Method::ra};
  SolverConfig solver;
  ClusteringConfig clustering;
  int threads = 1;  // parallelism across (team, method) runs
  std::uint64_t seed = 0;
  double ra_idle_fraction = 0.0;
};

struct MethodSummary {
  Method method = Method::ours;
  double median_e_min = 0.0;
  double median_e_exact = 0.0;
  double mean_utilization = 0.0;
  double success_pct = 0.0;
  double median_wall_time = 0.0;
};

struct BenchmarkReport {
  std::vector<EvaluationRecord> rows;  // deterministic (team, method, task) order
  std::vector<MethodSummary> summaries;
  StatTestResult stats_e_min;
  StatTestResult stats_e_exact;
  std::vector<std::string> group_names;
  StrategyLibrary inferred;
};

/// Runs every requested method over every test team, scoring trait mismatch
/// against the inferred strategies and success against the ground truth.
BenchmarkReport run_benchmark(const GroundTruthScenario& scenario,
                              const BenchmarkOptions& options);

/// Per-team across-task averages of one metric, grouped by method in row order.
std::vector<std::vector<double>> metric_groups(const std::vector<EvaluationRecord>& rows,
                                               const std::vector<std::string>& methods,
                                               bool exact_metric);

double median(std::vector<double> values);

}  // namespace cofo
