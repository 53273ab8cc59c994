#include "cofo/baselines.hpp"

#include <chrono>

#include "cofo/clustering.hpp"
#include "cofo/rng.hpp"

namespace cofo {

const char* to_string(Method m) {
  switch (m) {
    case Method::ours: return "ours";
    case Method::nh: return "nh";
    case Method::nc: return "nc";
    case Method::na: return "na";
    case Method::ra: return "ra";
  }
  return "ours";
}

Method method_from_string(const std::string& name) {
  if (name == "ours") return Method::ours;
  if (name == "nh") return Method::nh;
  if (name == "nc") return Method::nc;
  if (name == "na") return Method::na;
  if (name == "ra") return Method::ra;
  throw ValueError("unknown method: " + name);
}

std::vector<TraitVector> nh_requirements(const DemonstrationSet& demos) {
  if (demos.demos.empty()) throw ValueError("demonstration set is empty");
  std::vector<TraitVector> out;
  out.reserve(demos.tasks);
  for (int m = 0; m < demos.tasks; ++m) {
    const auto aggs = demo_aggregations(demos, m);
    TraitVector mean = TraitVector::Zero(aggs.front().size());
    for (const auto& a : aggs) mean += a;
    out.push_back(mean / static_cast<double>(aggs.size()));
  }
  return out;
}

AllocationResult nh_allocate(const DemonstrationSet& demos, const TeamSpec& team,
                             const SolverConfig& config) {
  return solve_fixed_strategy(nh_requirements(demos), team, config, true);
}

AllocationResult nc_allocate(const StrategyLibrary& library, const TeamSpec& team,
                             const SolverConfig& config, std::uint64_t seed) {
  validate(library);
  Rng rng(seed);
  std::vector<TraitVector> picks;
  std::vector<int> chosen;
  std::vector<long> sizes;
  picks.reserve(library.tasks());
  for (long m = 0; m < library.tasks(); ++m) {
    const long r = rng.uniform_int(0, library.strategy_count(m) - 1);
    picks.push_back(library.per_task[m][r]);
    chosen.push_back(static_cast<int>(r));
    sizes.push_back(library.strategy_count(m));
  }
  AllocationResult res = solve_fixed_strategy(picks, team, config, true);
  res.selectors = StrategySelector::from_indices(chosen, sizes);
  return res;
}

AllocationResult na_allocate(const DemonstrationSet& demos, const TeamSpec& team,
                             const SolverConfig& config) {
  if (demos.demos.empty()) throw ValueError("demonstration set is empty");
  StrategyLibrary lib;
  lib.per_task.resize(demos.tasks);
  lib.cluster_sizes.resize(demos.tasks);
  for (int m = 0; m < demos.tasks; ++m) {
    auto aggs = demo_aggregations(demos, m);
    lib.per_task[m] = std::move(aggs);
    lib.cluster_sizes[m].assign(lib.per_task[m].size(), 1);
  }
  return solve(lib, team, config);
}

AllocationResult ra_allocate(const TeamSpec& team, int tasks, std::uint64_t seed,
                             const StrategyLibrary* library, double idle_fraction) {
  validate(team);
  if (tasks < 1) throw ValueError("need at least one task");
  if (library && library->tasks() != tasks)
    throw DimensionError("library task count", tasks, library->tasks());
  if (idle_fraction < 0.0 || idle_fraction > 1.0)
    throw ValueError("idle fraction must lie in [0, 1]");

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  const long s_count = team.species_count();
  Eigen::MatrixXi x = Eigen::MatrixXi::Zero(tasks, s_count);
  for (long s = 0; s < s_count; ++s)
    for (int robot = 0; robot < team.counts[s]; ++robot) {
      if (idle_fraction > 0.0 && rng.bernoulli(idle_fraction)) continue;
      x(rng.uniform_int(0, tasks - 1), s) += 1;
    }

  AllocationResult res;
  res.assignment.rows = x;
  res.per_task_error.assign(tasks, 0.0);
  std::vector<int> chosen(tasks, 0);
  std::vector<long> sizes(tasks, 1);
  for (int m = 0; m < tasks; ++m) {
    if (library) {
      sizes[m] = library->strategy_count(m);
      double best = std::numeric_limits<double>::infinity();
      for (long r = 0; r < library->strategy_count(m); ++r) {
        const double e =
            trait_mismatch(library->per_task[m][r], team.traits, x.row(m).transpose());
        if (e < best) {
          best = e;
          chosen[m] = static_cast<int>(r);
        }
      }
      res.per_task_error[m] = best;
    }
    res.objective += res.per_task_error[m];
  }
  res.selectors = StrategySelector::from_indices(chosen, sizes);
  res.status = SolveStatus::optimal;  // nothing optimized; the draw is the answer
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.nodes_explored = 0;
  return res;
}

}  // namespace cofo
