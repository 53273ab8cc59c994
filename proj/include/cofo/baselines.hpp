#pragma once

#include <cstdint>
#include <string>

#include "cofo/solver.hpp"
#include "cofo/types.hpp"

namespace cofo {

enum class Method { ours, nh, nc, na, ra };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

/// Single averaged requirement per task across all demonstrations.
std::vector<TraitVector> nh_requirements(const DemonstrationSet& demos);

/// No-heterogeneity: allocate against the per-task demonstration averages.
AllocationResult nh_allocate(const DemonstrationSet& demos, const TeamSpec& team,
                             const SolverConfig& config);

/// No-context: one uniformly drawn strategy per task, no retry on infeasible
/// picks (they fall through to the relaxed solve).
AllocationResult nc_allocate(const StrategyLibrary& library, const TeamSpec& team,
                             const SolverConfig& config, std::uint64_t seed);

/// No-abstraction: every demonstration aggregation is a candidate strategy.
AllocationResult na_allocate(const DemonstrationSet& demos, const TeamSpec& team,
                             const SolverConfig& config);

/// Random allocation: partitions all available robots across tasks (each robot
/// drawn a task uniformly). idle_fraction > 0 lets robots sit out instead.
/// When a library is given, selectors report the error-minimizing strategy.
AllocationResult ra_allocate(const TeamSpec& team, int tasks, std::uint64_t seed,
                             const StrategyLibrary* library = nullptr,
                             double idle_fraction = 0.0);

}  // namespace cofo
