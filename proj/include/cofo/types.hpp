#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cofo {

// Trait quantities are cumulative nonnegative reals; robot counts are integers.
using TraitVector = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
  DimensionError(const std::string& what, long expected, long actual)
      : std::invalid_argument(what + ": expected " + std::to_string(expected) +
                              ", got " + std::to_string(actual)),
        expected(expected),
        actual(actual) {}
  long expected;
  long actual;
};

struct ValueError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Per-species capabilities: row s is the trait vector of species s (S x U).
struct SpeciesTraitMatrix {
  Eigen::MatrixXd q;
  std::vector<std::string> species_names;

  long species_count() const { return q.rows(); }
  long trait_count() const { return q.cols(); }
};

/// A concrete team: capabilities plus the number of robots available per species.
struct TeamSpec {
  SpeciesTraitMatrix traits;
  Eigen::VectorXi counts;

  long species_count() const { return counts.size(); }
  long trait_count() const { return traits.trait_count(); }
  long total_robots() const { return counts.sum(); }
};

/// Robots-per-species-per-task matrix; row m is the coalition of task m (M x S).
struct Assignment {
  Eigen::MatrixXi rows;

  long tasks() const { return rows.rows(); }
  long species_count() const { return rows.cols(); }
};

struct Demonstration {
  Assignment assignment;
  TeamSpec team;
};

/// Expert demonstrations sharing a trait schema and task count. Species sets
/// may differ between demonstrations; each demo carries its own capabilities.
struct DemonstrationSet {
  std::vector<Demonstration> demos;
  std::vector<std::string> trait_names;
  int tasks = 0;

  long size() const { return static_cast<long>(demos.size()); }
  long trait_count() const { return static_cast<long>(trait_names.size()); }
};

/// Inferred trait requirements: per_task[m][r] is the r-th strategy of task m,
/// cluster_sizes[m][r] the number of demonstrations behind it.
struct StrategyLibrary {
  std::vector<std::vector<TraitVector>> per_task;
  std::vector<std::vector<int>> cluster_sizes;

  long tasks() const { return static_cast<long>(per_task.size()); }
  long strategy_count(long m) const { return static_cast<long>(per_task[m].size()); }
  long trait_count() const {
    for (const auto& t : per_task)
      if (!t.empty()) return t.front().size();
    return 0;
  }
};

void validate(const SpeciesTraitMatrix& m);
void validate(const TeamSpec& t);
void validate(const Assignment& a);
void validate(const Demonstration& d);
void validate(const DemonstrationSet& ds);
void validate(const StrategyLibrary& lib);

/// Aggregated traits contributed by a coalition: Q^T x.
TraitVector aggregate_traits(const SpeciesTraitMatrix& team, const Eigen::VectorXi& task_row);

/// Per-task aggregation of a full assignment (the task-trait matrix, row-wise).
std::vector<TraitVector> aggregate_all(const Assignment& assignment, const SpeciesTraitMatrix& team);

}  // namespace cofo
