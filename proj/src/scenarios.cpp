#include "cofo/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "cofo/rng.hpp"
#include "cofo/solver.hpp"

namespace cofo {

namespace {

constexpr double kDominanceTol = 1e-9;

SolverConfig generation_config() {
  SolverConfig cfg;
  cfg.time_limit = 60.0;
  return cfg;
}

SpeciesTraitMatrix sample_pool(Rng& rng, int species, int traits) {
  SpeciesTraitMatrix pool;
  pool.q.resize(species, traits);
  for (int s = 0; s < species; ++s) {
    pool.species_names.push_back("species_" + std::to_string(s));
    for (int u = 0; u < traits; ++u) pool.q(s, u) = rng.uniform_real(0.5, 5.0);
  }
  return pool;
}

Eigen::VectorXi sample_coalition(Rng& rng, int species, int max_per_species) {
  Eigen::VectorXi c(species);
  do {
    for (int s = 0; s < species; ++s)
      c[s] = static_cast<int>(rng.uniform_int(0, max_per_species));
  } while (c.sum() < 2);
  return c;
}

// Per-trait aggregation noise implied by flipping each count with probability p.
TraitVector implied_noise_std(const SpeciesTraitMatrix& pool, double p) {
  return (pool.q.cwiseAbs2().colwise().sum() * p).cwiseSqrt().transpose();
}

double flip_probability_for(const SpeciesTraitMatrix& pool, double noise_std) {
  if (noise_std <= 0.0) return 0.0;
  const double mean_var = pool.q.cwiseAbs2().colwise().sum().mean();
  if (mean_var <= 0.0) return 0.0;
  return std::min(0.5, noise_std * noise_std / mean_var);
}

void perturb_counts(Rng& rng, Eigen::MatrixXi& x, const Eigen::VectorXi& caps, double p) {
  if (p <= 0.0) return;
  for (long m = 0; m < x.rows(); ++m)
    for (long s = 0; s < x.cols(); ++s)
      if (rng.bernoulli(p)) {
        const int delta = rng.bernoulli(0.5) ? 1 : -1;
        x(m, s) = std::max(0, x(m, s) + delta);
      }
  for (long s = 0; s < x.cols(); ++s) {
    while (x.col(s).sum() > caps[s]) {
      long pick = 0;
      for (long m = 1; m < x.rows(); ++m)
        if (x(m, s) > x(pick, s)) pick = m;
      x(pick, s) -= 1;
    }
  }
}

bool phase1_feasible(const StrategyLibrary& truth, const TeamSpec& team) {
  AllocationResult r = solve(truth, team, generation_config());
  return r.status == SolveStatus::optimal || r.status == SolveStatus::time_limit_incumbent;
}

ResourceClass classify_team(const StrategyLibrary& truth, const TeamSpec& team) {
  if (!phase1_feasible(truth, team)) return ResourceClass::under_resourced;
  TeamSpec reduced = team;
  reduced.counts = (reduced.counts.array() - 1).max(0);
  if (phase1_feasible(truth, reduced)) return ResourceClass::over_resourced;
  return ResourceClass::sufficiently_resourced;
}

}  // namespace

const char* to_string(ResourceClass c) {
  switch (c) {
    case ResourceClass::under_resourced: return "under";
    case ResourceClass::sufficiently_resourced: return "sufficient";
    case ResourceClass::over_resourced: return "over";
  }
  return "sufficient";
}

bool judge_success(const SuccessOracle& oracle, const TeamSpec& team,
                   const Assignment& assignment, long task) {
  if (task < 0 || task >= oracle.true_strategies.tasks())
    throw DimensionError("task index", oracle.true_strategies.tasks(), task);
  const TraitVector agg = aggregate_traits(team.traits, assignment.rows.row(task).transpose());
  for (const auto& truth : oracle.true_strategies.per_task[task])
    if ((truth - agg).maxCoeff() <= kDominanceTol) return true;
  return false;
}

GroundTruthScenario generate_benchmark(const ScenarioParams& params) {
  if (params.species < 1 || params.traits < 1 || params.tasks < 1 ||
      params.strategies_per_task < 1)
    throw ValueError("scenario dimensions must be positive");
  if (params.count_min < 0 || params.count_max < params.count_min)
    throw ValueError("invalid robot count range");

  Rng rng(params.seed);
  GroundTruthScenario sc;
  sc.seed = params.seed;
  sc.species_pool = sample_pool(rng, params.species, params.traits);
  sc.flip_probability = flip_probability_for(sc.species_pool, params.noise_std);
  sc.noise_std = implied_noise_std(sc.species_pool, sc.flip_probability);

  const double noise_scale =
      sc.flip_probability > 0.0
          ? std::sqrt(sc.flip_probability * sc.species_pool.q.cwiseAbs2().sum())
          : 0.0;

  // ground-truth strategies as aggregations of small integer coalitions, kept
  // pairwise separated relative to both the noise scale and their magnitude
  const int coalition_cap = 5;
  std::vector<std::vector<Eigen::VectorXi>> coalitions(params.tasks);
  sc.true_strategies.per_task.resize(params.tasks);
  sc.true_strategies.cluster_sizes.resize(params.tasks);
  for (int m = 0; m < params.tasks; ++m) {
    std::vector<Eigen::VectorXi> cs;
    std::vector<TraitVector> ys;
    for (int attempt = 0; attempt < 400; ++attempt) {
      cs.clear();
      ys.clear();
      std::vector<TraitVector> anchors;
      if (params.gmm_requirements) {
        // requirements sampled around three achievable mixture components
        for (int r = 0; r < 3; ++r)
          anchors.push_back(aggregate_traits(
              sc.species_pool, sample_coalition(rng, params.species, coalition_cap)));
      }
      for (int r = 0; r < params.strategies_per_task; ++r) {
        if (params.gmm_requirements) {
          const TraitVector& mu = anchors[r % 3];
          TraitVector y(mu.size());
          for (long u = 0; u < mu.size(); ++u)
            y[u] = std::max(0.0, rng.normal(mu[u], 0.05 * mu.norm()));
          cs.push_back(Eigen::VectorXi::Zero(params.species));
          ys.push_back(y);
        } else {
          Eigen::VectorXi c = sample_coalition(rng, params.species, coalition_cap);
          cs.push_back(c);
          ys.push_back(aggregate_traits(sc.species_pool, c));
        }
      }
      double min_dist = std::numeric_limits<double>::infinity();
      double max_norm = 0.0;
      for (std::size_t a = 0; a < ys.size(); ++a) {
        max_norm = std::max(max_norm, ys[a].norm());
        for (std::size_t b = a + 1; b < ys.size(); ++b)
          min_dist = std::min(min_dist, (ys[a] - ys[b]).norm());
      }
      const double need = std::max(8.0 * noise_scale, 0.3 * max_norm);
      if (ys.size() < 2 || min_dist >= need) break;
    }
    coalitions[m] = cs;
    sc.true_strategies.per_task[m] = ys;
    sc.true_strategies.cluster_sizes[m].assign(ys.size(), 1);
  }

  // demonstrations: pick one strategy per task, let the solver produce the
  // expert assignment, then perturb counts
  sc.demos.tasks = params.tasks;
  for (int u = 0; u < params.traits; ++u)
    sc.demos.trait_names.push_back("trait_" + std::to_string(u));
  const SolverConfig gen_cfg = generation_config();
  for (int i = 0; i < params.demo_count; ++i) {
    std::vector<int> picks(params.tasks);
    for (int m = 0; m < params.tasks; ++m)
      picks[m] = static_cast<int>(rng.uniform_int(0, params.strategies_per_task - 1));

    TeamSpec team;
    bool ok = false;
    for (int retry = 0; retry < 100 && !ok; ++retry) {
      team.traits = sc.species_pool;
      team.counts.resize(params.species);
      for (int s = 0; s < params.species; ++s)
        team.counts[s] = static_cast<int>(rng.uniform_int(params.count_min, params.count_max));
      if (!params.gmm_requirements) {
        Eigen::VectorXi demand = Eigen::VectorXi::Zero(params.species);
        for (int m = 0; m < params.tasks; ++m) demand += coalitions[m][picks[m]];
        ok = (demand.array() <= team.counts.array()).all();
      } else {
        std::vector<TraitVector> reqs;
        for (int m = 0; m < params.tasks; ++m)
          reqs.push_back(sc.true_strategies.per_task[m][picks[m]]);
        const auto r = solve_fixed_strategy(reqs, team, gen_cfg, true);
        ok = r.status == SolveStatus::optimal;
      }
    }
    if (!ok) throw ValueError("could not sample a team able to meet the chosen strategies");

    std::vector<TraitVector> reqs;
    for (int m = 0; m < params.tasks; ++m)
      reqs.push_back(sc.true_strategies.per_task[m][picks[m]]);
    AllocationResult res = solve_fixed_strategy(reqs, team, gen_cfg, true);
    Eigen::MatrixXi x = res.assignment.rows;
    perturb_counts(rng, x, team.counts, sc.flip_probability);
    sc.demos.demos.push_back({Assignment{x}, team});
  }

  for (int j = 0; j < params.test_team_count; ++j) {
    TeamSpec team;
    team.traits = sc.species_pool;
    team.counts.resize(params.species);
    for (int s = 0; s < params.species; ++s)
      team.counts[s] = static_cast<int>(rng.uniform_int(params.count_min, params.count_max));
    sc.test_teams.push_back(team);
    sc.test_team_class.push_back(classify_team(sc.true_strategies, team));
  }
  return sc;
}

GroundTruthScenario numerical_default_scenario(std::uint64_t seed) {
  ScenarioParams p;
  p.noise_std = 1.9;
  p.seed = seed;
  GroundTruthScenario sc = generate_benchmark(p);
  sc.name = "numerical-default";
  return sc;
}

std::vector<GroundTruthScenario> sweep_scenarios(std::uint64_t seed) {
  std::vector<GroundTruthScenario> out;
  int k = 0;
  for (int species : {2, 4, 6, 8, 10})
    for (int tasks : {2, 3, 4, 5}) {
      ScenarioParams p;
      p.species = species;
      p.tasks = tasks;
      p.demo_count = 120;
      p.test_team_count = 30;
      p.noise_std = 1.9;
      p.gmm_requirements = true;
      p.seed = Rng::derive(seed, static_cast<std::uint64_t>(k++));
      GroundTruthScenario sc = generate_benchmark(p);
      sc.name = "sweep-S" + std::to_string(species) + "xM" + std::to_string(tasks);
      out.push_back(std::move(sc));
    }
  return out;
}

StarcraftFixture starcraft_fixture() {
  StarcraftFixture fx;
  const std::vector<std::string> trait_names = {
      "armor", "health", "shield", "att_g",     "att_a", "dps_g",
      "dps_a", "cooldown_inv", "speed_bin", "range", "sight"};
  // raw per-unit stats; cooldown is inverted to make it cumulative and speed
  // is binarized at threshold 4
  struct Raw {
    const char* name;
    double armor, health, shield, att_g, att_a, dps_g, dps_a, cooldown, speed, range, sight;
  };
  const std::vector<Raw> raw = {
      {"zealot", 1, 100, 50, 8, 0, 18.6, 0, 0.86, 3.15, 0, 9},
      {"stalker", 1, 80, 80, 13, 13, 9.7, 9.7, 1.34, 4.13, 6, 10},
      {"marine", 0, 45, 0, 6, 6, 9.8, 9.8, 0.61, 3.15, 5, 9},
      {"marauder", 1, 125, 0, 5, 0, 9.3, 0, 1.07, 3.15, 6, 10},
      {"roach", 1, 145, 16, 16, 0, 11.2, 0, 1.43, 3.15, 4, 9},
  };
  fx.species.q.resize(static_cast<long>(raw.size()), 11);
  for (std::size_t s = 0; s < raw.size(); ++s) {
    const Raw& r = raw[s];
    fx.species.species_names.push_back(r.name);
    fx.species.q.row(static_cast<long>(s)) << r.armor, r.health, r.shield, r.att_g, r.att_a,
        r.dps_g, r.dps_a, 1.0 / r.cooldown, (r.speed > 4.0 ? 1.0 : 0.0), r.range, r.sight;
  }

  // demonstrated species only (the last one is held out for testing)
  SpeciesTraitMatrix demo_pool;
  demo_pool.q = fx.species.q.topRows(4);
  demo_pool.species_names.assign(fx.species.species_names.begin(),
                                 fx.species.species_names.begin() + 4);

  const std::vector<std::vector<Eigen::RowVector4i>> groups = {
      {{13, 15, 0, 0}, {14, 15, 0, 0}, {14, 15, 0, 0}},
      {{0, 0, 44, 0}, {0, 0, 45, 0}, {0, 0, 45, 0}},
      {{21, 0, 0, 9}, {21, 0, 0, 9}, {21, 0, 0, 9}},
  };

  fx.demos.tasks = 1;
  fx.demos.trait_names = trait_names;
  fx.battle_strategies.per_task.resize(1);
  fx.battle_strategies.cluster_sizes.resize(1);
  for (const auto& group : groups) {
    TraitVector centroid = TraitVector::Zero(11);
    for (const auto& row : group) {
      TeamSpec team;
      team.traits = demo_pool;
      team.counts = row.transpose();
      Assignment a;
      a.rows = row;
      centroid += aggregate_traits(demo_pool, row.transpose());
      fx.demos.demos.push_back({a, team});
    }
    fx.battle_strategies.per_task[0].push_back(centroid / static_cast<double>(group.size()));
    fx.battle_strategies.cluster_sizes[0].push_back(static_cast<int>(group.size()));
  }
  return fx;
}

GroundTruthScenario starcraft_scenario(std::uint64_t seed) {
  const StarcraftFixture fx = starcraft_fixture();
  GroundTruthScenario sc;
  sc.name = "starcraft-2s3z";
  sc.seed = seed;
  sc.true_strategies = fx.battle_strategies;
  sc.species_pool = fx.species;
  sc.demos = fx.demos;
  sc.noise_std = TraitVector::Zero(11);
  sc.flip_probability = 0.0;
  Rng rng(seed);
  for (int j = 0; j < 10; ++j) {  // target teams over subsets of all five species
    TeamSpec team;
    team.traits = fx.species;
    team.counts.resize(5);
    for (int s = 0; s < 5; ++s)
      team.counts[s] = rng.bernoulli(0.3) ? 0 : static_cast<int>(rng.uniform_int(5, 50));
    if (team.counts.sum() == 0) team.counts[4] = 25;
    sc.test_teams.push_back(team);
    sc.test_team_class.push_back(classify_team(sc.true_strategies, team));
  }
  return sc;
}

RobotariumFixture robotarium_fixture() {
  RobotariumFixture fx;
  // traits: coverage m^2, ground robots, payload lb, miniature, aerial robots
  fx.team.traits.species_names = {"ground", "aerial", "mini_ground", "mini_aerial"};
  fx.team.traits.q.resize(4, 5);
  fx.team.traits.q << 2, 1, 10, 0, 0,
                      2, 0, 10, 0, 1,
                      2, 1, 0, 1, 0,
                      1, 0, 0, 1, 1;
  fx.team.counts.resize(4);
  fx.team.counts << 5, 4, 3, 1;

  const std::vector<std::vector<std::vector<double>>> table = {
      {{0, 0, 50, 0, 5}, {0, 5, 50, 0, 0}},
      {{8, 4, 0, 0, 0}, {8, 0, 0, 0, 4}},
      {{6, 3, 0, 3, 0}, {6, 0, 0, 6, 6}},
  };
  fx.strategies.per_task.resize(3);
  fx.strategies.cluster_sizes.resize(3);
  for (int m = 0; m < 3; ++m)
    for (const auto& row : table[m]) {
      fx.strategies.per_task[m].push_back(
          Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<long>(row.size())));
      fx.strategies.cluster_sizes[m].push_back(1);
    }
  fx.oracle.true_strategies = fx.strategies;
  return fx;
}

GroundTruthScenario robotarium_scenario() {
  const RobotariumFixture fx = robotarium_fixture();
  GroundTruthScenario sc;
  sc.name = "robotarium";
  sc.true_strategies = fx.strategies;
  sc.species_pool = fx.team.traits;
  sc.noise_std = TraitVector::Zero(5);

  // demonstrations realizing the strategy rows exactly: five virtual unit-trait
  // species let each row double as its own coalition
  sc.demos.tasks = 3;
  sc.demos.trait_names = {"coverage_m2", "ground_robots", "payload_lb", "miniature",
                          "aerial_robots"};
  SpeciesTraitMatrix unit;
  unit.q = Eigen::MatrixXd::Identity(5, 5);
  unit.species_names = {"unit_coverage", "unit_ground", "unit_payload", "unit_mini",
                        "unit_aerial"};
  for (int variant = 0; variant < 2; ++variant)
    for (int copy = 0; copy < 3; ++copy) {
      Assignment a;
      a.rows.resize(3, 5);
      for (int m = 0; m < 3; ++m)
        for (int u = 0; u < 5; ++u)
          a.rows(m, u) = static_cast<int>(fx.strategies.per_task[m][variant][u]);
      TeamSpec team;
      team.traits = unit;
      team.counts = a.rows.colwise().sum().transpose();
      sc.demos.demos.push_back({a, team});
    }

  sc.test_teams.push_back(fx.team);
  sc.test_team_class.push_back(classify_team(sc.true_strategies, fx.team));
  return sc;
}

}  // namespace cofo
