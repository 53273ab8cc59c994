#include "cofo/types.hpp"

namespace cofo {

void validate(const SpeciesTraitMatrix& m) {
  if (m.q.rows() < 1 || m.q.cols() < 1)
    throw ValueError("species-trait matrix must have at least one species and one trait");
  if (static_cast<long>(m.species_names.size()) != m.q.rows())
    throw DimensionError("species name count", m.q.rows(), static_cast<long>(m.species_names.size()));
  if ((m.q.array() < 0.0).any())
    throw ValueError("species-trait matrix entries must be nonnegative");
}

void validate(const TeamSpec& t) {
  validate(t.traits);
  if (t.counts.size() != t.traits.species_count())
    throw DimensionError("robot count vector length", t.traits.species_count(), t.counts.size());
  if ((t.counts.array() < 0).any())
    throw ValueError("robot counts must be nonnegative");
}

void validate(const Assignment& a) {
  if ((a.rows.array() < 0).any())
    throw ValueError("assignment entries must be nonnegative");
}

void validate(const Demonstration& d) {
  validate(d.team);
  validate(d.assignment);
  if (d.assignment.species_count() != d.team.species_count())
    throw DimensionError("assignment species columns", d.team.species_count(),
                         d.assignment.species_count());
  Eigen::VectorXi used = d.assignment.rows.colwise().sum();
  for (long s = 0; s < used.size(); ++s)
    if (used[s] > d.team.counts[s])
      throw ValueError("assignment recruits more robots than available in species " +
                       d.team.traits.species_names[s]);
}

void validate(const DemonstrationSet& ds) {
  if (ds.tasks < 1) throw ValueError("demonstration set must declare at least one task");
  for (const auto& d : ds.demos) {
    validate(d);
    if (d.assignment.tasks() != ds.tasks)
      throw DimensionError("demonstration task rows", ds.tasks, d.assignment.tasks());
    if (d.team.trait_count() != ds.trait_count())
      throw DimensionError("demonstration trait columns", ds.trait_count(), d.team.trait_count());
  }
}

void validate(const StrategyLibrary& lib) {
  if (lib.per_task.empty()) throw ValueError("strategy library has no tasks");
  if (lib.cluster_sizes.size() != lib.per_task.size())
    throw DimensionError("cluster size list length", lib.tasks(),
                         static_cast<long>(lib.cluster_sizes.size()));
  long u = lib.trait_count();
  for (long m = 0; m < lib.tasks(); ++m) {
    if (lib.per_task[m].empty())
      throw ValueError("task " + std::to_string(m) + " has no strategies");
    if (lib.cluster_sizes[m].size() != lib.per_task[m].size())
      throw DimensionError("cluster sizes for task " + std::to_string(m),
                           lib.strategy_count(m), static_cast<long>(lib.cluster_sizes[m].size()));
    for (const auto& y : lib.per_task[m]) {
      if (y.size() != u) throw DimensionError("strategy trait dimension", u, y.size());
      if ((y.array() < 0.0).any()) throw ValueError("strategy vectors must be nonnegative");
    }
  }
}

TraitVector aggregate_traits(const SpeciesTraitMatrix& team, const Eigen::VectorXi& task_row) {
  if (task_row.size() != team.species_count())
    throw DimensionError("task row length", team.species_count(), task_row.size());
  return team.q.transpose() * task_row.cast<double>();
}

std::vector<TraitVector> aggregate_all(const Assignment& assignment, const SpeciesTraitMatrix& team) {
  if (assignment.species_count() != team.species_count())
    throw DimensionError("assignment species columns", team.species_count(),
                         assignment.species_count());
  std::vector<TraitVector> out;
  out.reserve(assignment.tasks());
  for (long m = 0; m < assignment.tasks(); ++m)
    out.push_back(team.q.transpose() * assignment.rows.row(m).transpose().cast<double>());
  return out;
}

}  // namespace cofo
