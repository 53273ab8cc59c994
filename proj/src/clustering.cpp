#include "cofo/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cofo {

namespace {

// Distances are computed in normalized coordinates; constant dimensions drop out.
std::vector<TraitVector> normalize_points(const std::vector<TraitVector>& pts,
                                          Normalization mode) {
  if (mode == Normalization::none || pts.empty()) return pts;
  const long u = pts.front().size();
  const long n = static_cast<long>(pts.size());
  std::vector<TraitVector> out(pts.size(), TraitVector::Zero(u));
  if (mode == Normalization::z_score) {
    TraitVector mean = TraitVector::Zero(u);
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(n);
    TraitVector var = TraitVector::Zero(u);
    for (const auto& p : pts) var += (p - mean).cwiseAbs2();
    var /= static_cast<double>(n);
    TraitVector sd = var.cwiseSqrt();
    for (long i = 0; i < n; ++i)
      for (long d = 0; d < u; ++d)
        out[i][d] = sd[d] > 0.0 ? (pts[i][d] - mean[d]) / sd[d] : 0.0;
  } else {  // min_max
    TraitVector lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    for (long i = 0; i < n; ++i)
      for (long d = 0; d < u; ++d) {
        const double range = hi[d] - lo[d];
        out[i][d] = range > 0.0 ? (pts[i][d] - lo[d]) / range : 0.0;
      }
  }
  return out;
}

struct MergeHistory {
  std::vector<MergeStep> steps;
  // membership after the first k merges is recoverable from the steps
};

// Lance-Williams agglomeration on the pairwise distance matrix. Cluster ids
// follow the scipy convention: originals 0..n-1, the k-th merge creates id n+k.
MergeHistory agglomerate(const std::vector<TraitVector>& pts, Linkage linkage) {
  const long n = static_cast<long>(pts.size());
  MergeHistory hist;
  if (n < 2) return hist;

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      dist[i][j] = dist[j][i] = (pts[i] - pts[j]).norm();

  std::vector<int> active;  // positions into dist
  std::vector<int> id(n);
  std::vector<int> size(n, 1);
  for (long i = 0; i < n; ++i) {
    active.push_back(static_cast<int>(i));
    id[i] = static_cast<int>(i);
  }

  int next_id = static_cast<int>(n);
  while (active.size() > 1) {
    long pi = 0, pj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = dist[active[a]][active[b]];
        // ties broken by lowest cluster id pair
        if (d < best) {
          best = d;
          pi = static_cast<long>(a);
          pj = static_cast<long>(b);
        }
      }
    const int ci = active[pi], cj = active[pj];
    const int ni = size[ci], nj = size[cj];
    hist.steps.push_back({std::min(id[ci], id[cj]), std::max(id[ci], id[cj]), best, ni + nj});

    for (int ck : active) {
      if (ck == ci || ck == cj) continue;
      double d = 0.0;
      switch (linkage) {
        case Linkage::average:
          d = (ni * dist[ck][ci] + nj * dist[ck][cj]) / static_cast<double>(ni + nj);
          break;
        case Linkage::complete:
          d = std::max(dist[ck][ci], dist[ck][cj]);
          break;
        case Linkage::single:
          d = std::min(dist[ck][ci], dist[ck][cj]);
          break;
      }
      dist[ck][ci] = dist[ci][ck] = d;
    }
    size[ci] = ni + nj;
    id[ci] = next_id++;
    active.erase(active.begin() + pj);
  }
  return hist;
}

// Smallest-id-pair tie break needs clusters ordered by id when distances tie.
// agglomerate() scans positions in creation order, which coincides with
// ascending id order among active clusters, so the first minimum wins.

int auto_cut_merges(const std::vector<MergeStep>& steps, int max_clusters) {
  const int n_merges = static_cast<int>(steps.size());
  const int n = n_merges + 1;
  if (n_merges <= 1) return n_merges;  // 0 or 1 merge: collapse to one cluster
  int best_k = n_merges;               // default: single cluster
  double best_score = 0.0;
  const int k_min = std::max(0, n - max_clusters);
  for (int k = std::max(1, k_min); k < n_merges; ++k) {
    // cutting after merge k leaves n - k clusters
    const double d0 = steps[k - 1].distance;
    const double d1 = steps[k].distance;
    const double gap = d1 - d0;
    if (gap <= 0.0) continue;
    const double score = gap / std::max(d0, 1e-12);
    if (score > best_score) {
      best_score = score;
      best_k = k;
    }
  }
  return best_score > 0.0 ? best_k : n_merges;
}

std::vector<std::vector<int>> clusters_after(const std::vector<MergeStep>& steps, long n,
                                             int merges) {
  // union-find replay of the first `merges` steps
  std::vector<int> parent(n + merges);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int k = 0; k < merges; ++k) {
    const int nid = static_cast<int>(n) + k;
    parent[find(steps[k].a)] = nid;
    parent[find(steps[k].b)] = nid;
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> root_slot(n + merges, -1);
  for (long i = 0; i < n; ++i) {
    const int r = find(static_cast<int>(i));
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[root_slot[r]].push_back(static_cast<int>(i));
  }
  // groups are already ordered by smallest member (first occurrence) and
  // members ascend because i ascends
  return groups;
}

}  // namespace

void validate(const ClusteringConfig& cfg) {
  if (cfg.distance_threshold && cfg.fixed_cluster_count)
    throw ValueError("distance_threshold and fixed_cluster_count are mutually exclusive");
  if (cfg.distance_threshold && *cfg.distance_threshold < 0.0)
    throw ValueError("distance threshold must be nonnegative");
  if (cfg.fixed_cluster_count && *cfg.fixed_cluster_count < 1)
    throw ValueError("fixed cluster count must be at least 1");
  if (cfg.max_auto_clusters < 1) throw ValueError("max_auto_clusters must be at least 1");
}

std::vector<TraitVector> demo_aggregations(const DemonstrationSet& demos, long task) {
  if (demos.demos.empty()) throw ValueError("demonstration set is empty");
  if (task < 0 || task >= demos.tasks)
    throw DimensionError("task index", demos.tasks, task);
  std::vector<TraitVector> out;
  out.reserve(demos.demos.size());
  for (const auto& d : demos.demos)
    out.push_back(aggregate_traits(d.team.traits, d.assignment.rows.row(task).transpose()));
  return out;
}

std::vector<MergeStep> dendrogram(const std::vector<TraitVector>& aggregations,
                                  const ClusteringConfig& config) {
  validate(config);
  if (aggregations.size() < 2)
    throw ValueError("dendrogram requires at least two points");
  return agglomerate(normalize_points(aggregations, config.normalization), config.linkage).steps;
}

std::vector<std::vector<int>> cluster_task(const std::vector<TraitVector>& aggregations,
                                           const ClusteringConfig& config) {
  validate(config);
  const long n = static_cast<long>(aggregations.size());
  if (n == 0) throw ValueError("cannot cluster an empty aggregation list");
  if (n == 1) return {{0}};

  const auto steps =
      agglomerate(normalize_points(aggregations, config.normalization), config.linkage).steps;
  int merges;
  if (config.fixed_cluster_count) {
    merges = static_cast<int>(std::max(0L, n - std::min<long>(n, *config.fixed_cluster_count)));
  } else if (config.distance_threshold) {
    merges = 0;
    while (merges < static_cast<int>(steps.size()) &&
           steps[merges].distance <= *config.distance_threshold)
      ++merges;
  } else {
    merges = auto_cut_merges(steps, config.max_auto_clusters);
  }
  return clusters_after(steps, n, merges);
}

StrategyLibrary infer_strategies(const DemonstrationSet& demos, const ClusteringConfig& config) {
  validate(demos);
  if (demos.demos.empty()) throw ValueError("demonstration set is empty");
  StrategyLibrary lib;
  lib.per_task.resize(demos.tasks);
  lib.cluster_sizes.resize(demos.tasks);
  for (int m = 0; m < demos.tasks; ++m) {
    const auto aggs = demo_aggregations(demos, m);
    const auto groups = cluster_task(aggs, config);
    for (const auto& g : groups) {
      TraitVector centroid = TraitVector::Zero(aggs.front().size());
      for (int i : g) centroid += aggs[i];
      centroid /= static_cast<double>(g.size());
      lib.per_task[m].push_back(centroid.cwiseMax(0.0));
      lib.cluster_sizes[m].push_back(static_cast<int>(g.size()));
    }
  }
  return lib;
}

}  // namespace cofo
