#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "occstream/common.hpp"

namespace occstream {

// Additive sufficient statistics of a micro-cluster: (count, linear sum,
// per-dimension squared sum, last update time). Decay scales all three
// together, so centers and variances are decay-invariant.
struct MicroCluster {
  double count = 0.0;
  Eigen::VectorXd linear_sum;
  Eigen::VectorXd squared_sum;
  std::int64_t last_update = 0;

  Eigen::VectorXd center() const { return linear_sum / count; }

  // sqrt of the summed per-dimension variances; per-dimension variances are
  // clamped at 0 against catastrophic cancellation.
  double rms_deviation() const;

  double decayed_count(std::int64_t now, double lambda) const;
};

// Flat capped pool of micro-clusters with exponential decay and least-weight
// eviction; fills the online-summarization role ahead of macro clustering.
class MicroClusterPool {
 public:
  explicit MicroClusterPool(int dim, std::size_t capacity = 200, double lambda = 0.01,
                            double radius_factor = 3.0);

  // Absorbs x into the nearest micro-cluster when it falls inside that
  // cluster's boundary (radius_factor x RMS deviation; for singletons the
  // distance to the nearest other cluster), otherwise opens a new cluster,
  // evicting the lightest one beyond capacity.
  void insert(const Eigen::VectorXd& x, std::int64_t timestamp);

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  std::size_t size() const { return clusters_.size(); }
  const std::vector<MicroCluster>& clusters() const { return clusters_; }

 private:
  int dim_;
  std::size_t capacity_;
  double lambda_;
  double radius_factor_;
  std::vector<MicroCluster> clusters_;
};

// Hypersphere summary of a macro cluster. `mass` is the (decayed) number of
// points behind it; `weight` its fraction of the clustering total.
struct MacroCluster {
  int id = 0;
  Eigen::VectorXd center;
  double radius = 0.0;
  double mass = 0.0;
  double weight = 0.0;
};

struct Clustering {
  std::vector<MacroCluster> clusters;
  double total_mass = 0.0;
  bool degenerate = false;  // silhouette was undefined; k fell back to k_min

  bool empty() const { return clusters.empty(); }
  std::size_t size() const { return clusters.size(); }
  const MacroCluster* find(int id) const;
};

// Weighted k-means over the micro-cluster centers for every k in
// [k_min, min(k_max, #micro)], keeping the k with the highest mean silhouette.
// Radius of a macro cluster = max over members of (distance from the macro
// center to the member center + the member's RMS deviation), floored at a
// tiny positive value so every cluster is a genuine ball.
// Throws StateError when fewer than k_min micro-clusters exist.
Clustering macro_cluster(const MicroClusterPool& pool, int k_min, int k_max,
                         std::uint64_t seed, std::int64_t now);

// Fraction of clustered points owned by the cluster.
double cluster_weight(const MacroCluster& cluster, const Clustering& clustering);

// Survival threshold 1 / k^2 for the clustering's current cluster count.
double weight_threshold(const Clustering& clustering);

// Clusters whose weight exceeds weight_threshold(clustering); the threshold is
// computed once from the incoming cluster count. Ids are preserved.
Clustering prune_by_weight(const Clustering& clustering);

// Id of the cluster minimizing d(x, c) = max(0, ||x - center|| - radius),
// ties toward the lowest id; also returns that distance (0 inside the ball).
std::pair<int, double> nearest_cluster(const Clustering& clustering, const Eigen::VectorXd& x);

// One row per cluster: id, weight, radius, center components separated by ';'.
void write_clustering_csv(std::ostream& os, const Clustering& clustering);

}  // namespace occstream
