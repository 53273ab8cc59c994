#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cofo/types.hpp"

namespace cofo {

enum class SolveStatus {
  optimal,               // search tree exhausted, minimum-requirement constraints hold
  time_limit_incumbent,  // best solution found within the limits, constraints hold
  relaxed_optimal,       // minimum requirements dropped, relaxed optimum certified
  relaxed_incumbent,     // minimum requirements dropped, limit hit
  infeasible
};

const char* to_string(SolveStatus s);

/// One-hot strategy choice per task.
struct StrategySelector {
  std::vector<std::vector<int>> per_task;

  static StrategySelector from_indices(const std::vector<int>& chosen,
                                       const std::vector<long>& sizes);
  int chosen(long m) const;
  long tasks() const { return static_cast<long>(per_task.size()); }
};

struct NodeTraceRow {
  long long node = 0;
  int depth = 0;
  double bound = 0.0;
  double incumbent = 0.0;
  double seconds = 0.0;
};

struct SolverConfig {
  double time_limit = 1800.0;
  std::optional<long long> node_limit;
  double feasibility_tolerance = 1e-6;
  bool parallel_strategy_combos = false;
  int threads = 0;  // 0 = runtime default when parallel
  std::uint64_t seed = 0;
  std::vector<NodeTraceRow>* trace = nullptr;  // forces the serial path when set
};

struct AllocationResult {
  Assignment assignment;
  StrategySelector selectors;
  std::vector<double> per_task_error;
  double objective = 0.0;
  SolveStatus status = SolveStatus::infeasible;
  double wall_time = 0.0;
  long long nodes_explored = 0;
};

/// Squared trait mismatch between a requirement vector and a coalition's aggregation.
double trait_mismatch(const TraitVector& strategy, const SpeciesTraitMatrix& team,
                      const Eigen::VectorXi& task_row);

/// Net per-task error of the selected strategies: E_m = z_m . e_m.
std::vector<double> net_error(const StrategySelector& selectors,
                              const std::vector<std::vector<double>>& mismatches);

/// Joint strategy selection and integer assignment. Tries the full problem with
/// minimum-requirement constraints first; if no strategy combination admits a
/// dominating assignment, re-solves without them (relaxed statuses).
AllocationResult solve(const StrategyLibrary& library, const TeamSpec& team,
                       const SolverConfig& config);

/// Single-requirement-per-task variant shared by the baselines.
AllocationResult solve_fixed_strategy(const std::vector<TraitVector>& requirements,
                                      const TeamSpec& team, const SolverConfig& config,
                                      bool enforce_min);

}  // namespace cofo
