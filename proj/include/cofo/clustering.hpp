#pragma once

#include <optional>
#include <vector>

#include "cofo/types.hpp"

namespace cofo {

enum class Linkage { average, complete, single };
enum class Normalization { none, z_score, min_max };

/// Cut selection: a distance threshold, a fixed cluster count, or (default)
/// the largest relative gap between consecutive merge distances.
struct ClusteringConfig {
  Linkage linkage = Linkage::average;
  std::optional<double> distance_threshold;
  std::optional<int> fixed_cluster_count;
  Normalization normalization = Normalization::z_score;
  int max_auto_clusters = 10;
};

void validate(const ClusteringConfig& cfg);

struct MergeStep {
  int a = 0;  // cluster ids; originals are 0..n-1, merges create n, n+1, ...
  int b = 0;
  double distance = 0.0;
  int new_size = 0;
};

/// Trait aggregations of one task across all demonstrations, in dataset order.
std::vector<TraitVector> demo_aggregations(const DemonstrationSet& demos, long task);

/// Full agglomerative merge history (normalization applies to distances only).
std::vector<MergeStep> dendrogram(const std::vector<TraitVector>& aggregations,
                                  const ClusteringConfig& config);

/// Partition of input indices; clusters ordered by smallest member, members ascending.
std::vector<std::vector<int>> cluster_task(const std::vector<TraitVector>& aggregations,
                                           const ClusteringConfig& config);

/// Clusters each task's aggregations and takes per-cluster means in the
/// original trait scale.
StrategyLibrary infer_strategies(const DemonstrationSet& demos, const ClusteringConfig& config);

}  // namespace cofo
