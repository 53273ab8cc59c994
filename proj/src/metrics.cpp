#include "cofo/metrics.hpp"

#include <cmath>

namespace cofo {

namespace {

constexpr double kDominanceTol = 1e-9;

void check_strategies(const std::vector<TraitVector>& strategies, long traits) {
  if (strategies.empty()) throw ValueError("metric needs at least one strategy");
  for (const auto& s : strategies) {
    if (s.size() != traits) throw DimensionError("strategy trait dimension", traits, s.size());
    if (s.norm() == 0.0) throw ValueError("zero-norm strategy cannot be normalized against");
  }
}

}  // namespace

double e_min(const std::vector<TraitVector>& strategies, const SpeciesTraitMatrix& team,
             const Eigen::VectorXi& task_row) {
  check_strategies(strategies, team.trait_count());
  const TraitVector agg = aggregate_traits(team, task_row);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : strategies) {
    if ((s - agg).maxCoeff() <= kDominanceTol) return 0.0;
    const double shortfall = (s - agg).cwiseMax(0.0).norm();
    best = std::min(best, shortfall / s.norm());
  }
  return best;
}

double e_exact(const std::vector<TraitVector>& strategies, const SpeciesTraitMatrix& team,
               const Eigen::VectorXi& task_row) {
  check_strategies(strategies, team.trait_count());
  const TraitVector agg = aggregate_traits(team, task_row);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : strategies) best = std::min(best, (s - agg).norm() / s.norm());
  return best;
}

double utilization(const Assignment& assignment, const TeamSpec& team, long task) {
  if (task < 0 || task >= assignment.tasks())
    throw DimensionError("task index", assignment.tasks(), task);
  if (assignment.species_count() != team.species_count())
    throw DimensionError("assignment species columns", team.species_count(),
                         assignment.species_count());
  const long total = team.total_robots();
  if (total == 0) throw ValueError("utilization undefined for a zero-robot team");
  return static_cast<double>(assignment.rows.row(task).sum()) / static_cast<double>(total);
}

double success_rate(const std::vector<bool>& outcomes) {
  if (outcomes.empty()) throw ValueError("success rate needs at least one outcome");
  long wins = 0;
  for (bool b : outcomes) wins += b ? 1 : 0;
  return 100.0 * static_cast<double>(wins) / static_cast<double>(outcomes.size());
}

}  // namespace cofo
