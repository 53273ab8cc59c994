#pragma once

#include <cstdint>
#include <vector>

#include "cofo/types.hpp"

namespace cofo {

/// Ground-truth requirements used to judge task success: a coalition succeeds
/// when its aggregation dominates any one of the task's true strategies.
struct SuccessOracle {
  StrategyLibrary true_strategies;
};

bool judge_success(const SuccessOracle& oracle, const TeamSpec& team,
                   const Assignment& assignment, long task);

enum class ResourceClass { under_resourced, sufficiently_resourced, over_resourced };
const char* to_string(ResourceClass c);

struct ScenarioParams {
  int species = 4;
  int traits = 3;
  int tasks = 3;
  int strategies_per_task = 3;
  int demo_count = 240;
  int test_team_count = 60;
  int count_min = 6;
  int count_max = 33;
  double noise_std = 0.0;  // target per-trait aggregation noise; 0 disables
  bool gmm_requirements = false;
  std::uint64_t seed = 0;
};

struct GroundTruthScenario {
  std::string name;
  StrategyLibrary true_strategies;
  SpeciesTraitMatrix species_pool;
  DemonstrationSet demos;
  std::vector<TeamSpec> test_teams;
  std::vector<ResourceClass> test_team_class;
  TraitVector noise_std;          // implied per-trait aggregation noise
  double flip_probability = 0.0;  // per-count perturbation probability
  std::uint64_t seed = 0;

  SuccessOracle oracle() const { return {true_strategies}; }
};

/// Synthetic benchmark: achievable ground-truth strategies, expert assignments
/// built by the exact solver, optional count-perturbation noise, and test
/// teams classified against the truth.
GroundTruthScenario generate_benchmark(const ScenarioParams& params);

GroundTruthScenario numerical_default_scenario(std::uint64_t seed);
std::vector<GroundTruthScenario> sweep_scenarios(std::uint64_t seed);

struct StarcraftFixture {
  SpeciesTraitMatrix species;         // 5 species, the last one unseen in demos
  StrategyLibrary battle_strategies;  // one battle task, three strategies
  DemonstrationSet demos;             // 9 demonstrations, three per strategy
};
StarcraftFixture starcraft_fixture();
GroundTruthScenario starcraft_scenario(std::uint64_t seed);

struct RobotariumFixture {
  TeamSpec team;
  StrategyLibrary strategies;  // 3 tasks x 2 strategies
  SuccessOracle oracle;
};
RobotariumFixture robotarium_fixture();
GroundTruthScenario robotarium_scenario();

}  // namespace cofo
