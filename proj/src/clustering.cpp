#include "occstream/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace occstream {

double MicroCluster::rms_deviation() const {
  const Eigen::VectorXd mean = center();
  double total = 0.0;
  for (Eigen::Index q = 0; q < linear_sum.size(); ++q) {
    const double var = squared_sum[q] / count - mean[q] * mean[q];
    total += std::max(0.0, var);
  }
  return std::sqrt(total);
}

double MicroCluster::decayed_count(std::int64_t now, double lambda) const {
  const double dt = static_cast<double>(now - last_update);
  return count * std::exp(-lambda * dt / 1000.0);
}

MicroClusterPool::MicroClusterPool(int dim, std::size_t capacity, double lambda,
                                   double radius_factor)
    : dim_(dim), capacity_(capacity), lambda_(lambda), radius_factor_(radius_factor) {
  if (dim < 1) throw ContractError("micro-cluster pool needs dimension >= 1");
  if (capacity < 1) throw ContractError("micro-cluster pool capacity must be >= 1");
  if (!(lambda >= 0.0)) throw ContractError("decay lambda must be >= 0");
  if (!(radius_factor > 0.0)) throw ContractError("radius factor must be > 0");
}

void MicroClusterPool::insert(const Eigen::VectorXd& x, std::int64_t timestamp) {
  if (x.size() != dim_) throw ContractError("micro-cluster insert dimension mismatch");
  if (!x.allFinite()) throw ContractError("micro-cluster insert must be finite");

  if (!clusters_.empty()) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
      const double d = (clusters_[i].center() - x).norm();
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    MicroCluster& mc = clusters_[nearest];
    double boundary;
    if (mc.count > 1.0) {
      boundary = radius_factor_ * mc.rms_deviation();
    } else {
      // Singleton boundary: half the distance to the nearest other cluster
      // center — any point inside it is provably closer to this singleton
      // than to that neighbour, so absorption cannot fuse distinct modes.
      // (0 when the pool holds a single cluster, so only duplicates absorb.)
      boundary = 0.0;
      double other = std::numeric_limits<double>::infinity();
      const Eigen::VectorXd c = mc.center();
      for (std::size_t i = 0; i < clusters_.size(); ++i) {
        if (i == nearest) continue;
        other = std::min(other, (clusters_[i].center() - c).norm());
      }
      if (std::isfinite(other)) boundary = 0.5 * other;
    }
    if (best <= boundary) {
      // Apply the pending decay physically before absorbing.
      const double f = std::exp(-lambda_ * static_cast<double>(timestamp - mc.last_update) / 1000.0);
      mc.count = mc.count * f + 1.0;
      mc.linear_sum = mc.linear_sum * f + x;
      mc.squared_sum = mc.squared_sum * f + x.cwiseProduct(x);
      mc.last_update = timestamp;
      return;
    }
  }

  MicroCluster fresh;
  fresh.count = 1.0;
  fresh.linear_sum = x;
  fresh.squared_sum = x.cwiseProduct(x);
  fresh.last_update = timestamp;
  clusters_.push_back(std::move(fresh));

  if (clusters_.size() > capacity_) {
    std::size_t lightest = 0;
    double least = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
      const double w = clusters_[i].decayed_count(timestamp, lambda_);
      if (w < least) {
        least = w;
        lightest = i;
      }
    }
    clusters_.erase(clusters_.begin() + static_cast<std::ptrdiff_t>(lightest));
  }
}

const MacroCluster* Clustering::find(int id) const {
  for (const auto& c : clusters)
    if (c.id == id) return &c;
  return nullptr;
}

namespace {

constexpr double kMinRadius = 1e-9;

struct KMeansResult {
  std::vector<Eigen::VectorXd> centers;
  std::vector<int> assignment;
};

// Weighted Lloyd iterations with k-means++ seeding. Empty clusters are
// re-seeded at the point farthest from its current center.
KMeansResult weighted_kmeans(const std::vector<Eigen::VectorXd>& points,
                             const std::vector<double>& weights, int k, Rng& rng) {
  const std::size_t n = points.size();
  KMeansResult res;
  res.centers.reserve(static_cast<std::size_t>(k));

  // k-means++: first center weight-proportional, then distance-weighted.
  double total_w = 0.0;
  for (double w : weights) total_w += w;
  {
    double u = rng.uniform() * total_w;
    std::size_t pick = n - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += weights[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    res.centers.push_back(points[pick]);
  }
  std::vector<double> d2(n, 0.0);
  while (static_cast<int>(res.centers.size()) < k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : res.centers) best = std::min(best, (points[i] - c).squaredNorm());
      d2[i] = weights[i] * best;
      sum += d2[i];
    }
    std::size_t pick = n - 1;
    if (sum > 0.0) {
      double u = rng.uniform() * sum;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.index(n);  // all points coincide with some center
    }
    res.centers.push_back(points[pick]);
  }

  res.assignment.assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best_c = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points[i] - res.centers[static_cast<std::size_t>(c)]).squaredNorm();
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      if (res.assignment[i] != best_c) {
        res.assignment[i] = best_c;
        changed = true;
      }
    }
    std::vector<Eigen::VectorXd> sums(static_cast<std::size_t>(k),
                                      Eigen::VectorXd::Zero(points.front().size()));
    std::vector<double> mass(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[static_cast<std::size_t>(res.assignment[i])] += weights[i] * points[i];
      mass[static_cast<std::size_t>(res.assignment[i])] += weights[i];
    }
    for (int c = 0; c < k; ++c) {
      if (mass[static_cast<std::size_t>(c)] > 0.0) {
        res.centers[static_cast<std::size_t>(c)] =
            sums[static_cast<std::size_t>(c)] / mass[static_cast<std::size_t>(c)];
      } else {
        // Re-seed an empty cluster at the farthest point from its assignee.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d =
              (points[i] - res.centers[static_cast<std::size_t>(res.assignment[i])]).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        res.centers[static_cast<std::size_t>(c)] = points[far];
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
  }
  return res;
}

// Weighted k-means objective: sum of weight x squared distance to the
// assigned center. Used to pick the best restart for a given k.
double weighted_inertia(const std::vector<Eigen::VectorXd>& points,
                        const std::vector<double>& weights, const KMeansResult& km) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += weights[i] *
             (points[i] - km.centers[static_cast<std::size_t>(km.assignment[i])]).squaredNorm();
  }
  return total;
}

// Weighted mean silhouette over points; singleton clusters contribute 0.
// Returns NaN when every pairwise distance is 0 (undefined silhouette).
double weighted_silhouette(const std::vector<Eigen::VectorXd>& points,
                           const std::vector<double>& weights,
                           const std::vector<int>& assignment, int k) {
  const std::size_t n = points.size();
  bool any_positive_distance = false;
  std::vector<double> cluster_w(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    cluster_w[static_cast<std::size_t>(assignment[i])] += weights[i];

  double s_sum = 0.0, w_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> dist_w(static_cast<std::size_t>(k), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (points[i] - points[j]).norm();
      if (d > 0.0) any_positive_distance = true;
      dist_w[static_cast<std::size_t>(assignment[j])] += weights[j] * d;
    }
    const int own = assignment[i];
    const double own_w = cluster_w[static_cast<std::size_t>(own)] - weights[i];
    double a = own_w > 0.0 ? dist_w[static_cast<std::size_t>(own)] / own_w : 0.0;
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || cluster_w[static_cast<std::size_t>(c)] <= 0.0) continue;
      b = std::min(b, dist_w[static_cast<std::size_t>(c)] / cluster_w[static_cast<std::size_t>(c)]);
    }
    double s = 0.0;
    if (own_w > 0.0 && std::isfinite(b)) {
      const double m = std::max(a, b);
      s = m > 0.0 ? (b - a) / m : 0.0;
    }
    s_sum += weights[i] * s;
    w_sum += weights[i];
  }
  if (!any_positive_distance) return std::numeric_limits<double>::quiet_NaN();
  return w_sum > 0.0 ? s_sum / w_sum : std::numeric_limits<double>::quiet_NaN();
}

Clustering assemble(const std::vector<Eigen::VectorXd>& points,
                    const std::vector<double>& weights, const std::vector<double>& rms,
                    const KMeansResult& km, int k) {
  Clustering out;
  out.clusters.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    auto& mc = out.clusters[static_cast<std::size_t>(c)];
    mc.id = c;
    mc.center = km.centers[static_cast<std::size_t>(c)];
    mc.radius = kMinRadius;
    mc.mass = 0.0;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& mc = out.clusters[static_cast<std::size_t>(km.assignment[i])];
    mc.mass += weights[i];
    mc.radius = std::max(mc.radius, (points[i] - mc.center).norm() + rms[i]);
    out.total_mass += weights[i];
  }
  for (auto& mc : out.clusters)
    mc.weight = out.total_mass > 0.0 ? mc.mass / out.total_mass : 0.0;
  return out;
}

}  // namespace

Clustering macro_cluster(const MicroClusterPool& pool, int k_min, int k_max,
                         std::uint64_t seed, std::int64_t now) {
  if (k_min < 1 || k_max < k_min) throw ContractError("invalid k range for macro clustering");
  const auto& micro = pool.clusters();
  if (micro.size() < static_cast<std::size_t>(k_min))
    throw StateError("fewer micro-clusters than k_min");

  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights, rms;
  points.reserve(micro.size());
  for (const auto& mc : micro) {
    points.push_back(mc.center());
    weights.push_back(mc.decayed_count(now, pool.lambda()));
    rms.push_back(mc.rms_deviation());
  }

  const int k_hi = std::min<int>(k_max, static_cast<int>(points.size()));
  Clustering best;
  double best_sil = -std::numeric_limits<double>::infinity();
  bool have_valid = false;
  constexpr int kRestarts = 4;
  for (int k = k_min; k <= k_hi; ++k) {
    // Several k-means++ restarts per k; the lowest-inertia run represents k,
    // so one unlucky seeding cannot sink an otherwise natural cluster count.
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
    KMeansResult km = weighted_kmeans(points, weights, k, rng);
    double km_inertia = weighted_inertia(points, weights, km);
    for (int r = 1; r < kRestarts; ++r) {
      KMeansResult retry = weighted_kmeans(points, weights, k, rng);
      const double inertia = weighted_inertia(points, weights, retry);
      if (inertia < km_inertia) {
        km = std::move(retry);
        km_inertia = inertia;
      }
    }
    const double sil = weighted_silhouette(points, weights, km.assignment, k);
    if (std::isnan(sil)) continue;
    if (!have_valid || sil > best_sil) {
      best_sil = sil;
      best = assemble(points, weights, rms, km, k);
      have_valid = true;
    }
  }
  if (!have_valid) {
    // All micro-clusters coincide: silhouette is undefined for every k.
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k_min)));
    const KMeansResult km = weighted_kmeans(points, weights, std::min(k_min, k_hi), rng);
    best = assemble(points, weights, rms, km, std::min(k_min, k_hi));
    best.degenerate = true;
  }
  return best;
}

double cluster_weight(const MacroCluster& cluster, const Clustering& clustering) {
  if (clustering.total_mass <= 0.0) throw StateError("clustering holds no points");
  return cluster.mass / clustering.total_mass;
}

double weight_threshold(const Clustering& clustering) {
  if (clustering.empty()) throw StateError("weight threshold of an empty clustering");
  const double k = static_cast<double>(clustering.size());
  return 1.0 / (k * k);
}

Clustering prune_by_weight(const Clustering& clustering) {
  const double threshold = weight_threshold(clustering);
  Clustering out;
  out.degenerate = clustering.degenerate;
  for (const auto& c : clustering.clusters) {
    if (c.weight > threshold) {
      out.clusters.push_back(c);
      out.total_mass += c.mass;
    }
  }
  // Weights stay relative to the original clustering total.
  for (auto& c : out.clusters) c.weight = c.mass / clustering.total_mass;
  return out;
}

std::pair<int, double> nearest_cluster(const Clustering& clustering, const Eigen::VectorXd& x) {
  if (clustering.empty()) throw StateError("nearest_cluster on an empty clustering");
  int best_id = -1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : clustering.clusters) {
    const double d = std::max(0.0, (x - c.center).norm() - c.radius);
    if (d < best || (d == best && c.id < best_id)) {
      best = d;
      best_id = c.id;
    }
  }
  return {best_id, best};
}

void write_clustering_csv(std::ostream& os, const Clustering& clustering) {
  os << "id,weight,radius,center\n";
  for (const auto& c : clustering.clusters) {
    os << c.id << ',' << c.weight << ',' << c.radius << ',';
    for (Eigen::Index q = 0; q < c.center.size(); ++q) {
      if (q) os << ';';
      os << c.center[q];
    }
    os << '\n';
  }
}

}  // namespace occstream
