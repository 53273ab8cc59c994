#pragma once

#include <string>
#include <vector>

#include "cofo/types.hpp"

namespace cofo {

/// Normalized shortfall against the closest requirement; over-provisioning is
/// not penalized (zero when any requirement is element-wise dominated).
double e_min(const std::vector<TraitVector>& strategies, const SpeciesTraitMatrix& team,
             const Eigen::VectorXi& task_row);

/// Normalized full deviation against the closest requirement; over-provisioning counts.
double e_exact(const std::vector<TraitVector>& strategies, const SpeciesTraitMatrix& team,
               const Eigen::VectorXi& task_row);

/// Fraction of the team recruited by one task's coalition.
double utilization(const Assignment& assignment, const TeamSpec& team, long task);

/// Percentage of successful outcomes.
double success_rate(const std::vector<bool>& outcomes);

struct EvaluationRecord {
  std::string method;
  int team_id = 0;
  int task = 0;
  double e_min = 0.0;
  double e_exact = 0.0;
  double utilization = 0.0;
  bool success = false;
  double wall_time = 0.0;
  std::string status;
};

}  // namespace cofo
