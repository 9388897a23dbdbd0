#include "occstream/cluster_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace occstream {

namespace {

void check_ball(const MacroCluster& c) {
  if (!(c.radius > 0.0)) throw ContractError("cluster distance needs radii > 0");
  if (!c.center.allFinite()) throw ContractError("cluster distance needs finite centers");
}

ClusterDistanceResult interval_distance(const MacroCluster& a, const MacroCluster& b) {
  const double a_lo = a.center[0] - a.radius, a_hi = a.center[0] + a.radius;
  const double b_lo = b.center[0] - b.radius, b_hi = b.center[0] + b.radius;
  const double len_a = a_hi - a_lo, len_b = b_hi - b_lo;
  const double inter = std::max(0.0, std::min(a_hi, b_hi) - std::max(a_lo, b_lo));
  const double uni = len_a + len_b - inter;
  ClusterDistanceResult res;
  res.raw = len_a + len_b - 2.0 * inter;
  res.normalized = uni > 0.0 ? res.raw / uni : 0.0;
  return res;
}

}  // namespace

ClusterDistanceResult cluster_distance(const MacroCluster& a, const MacroCluster& b,
                                       std::size_t mc_samples, std::uint64_t seed) {
  check_ball(a);
  check_ball(b);
  if (a.center.size() != b.center.size())
    throw ContractError("cluster distance needs equal dimensions");
  const Eigen::Index d = a.center.size();
  if (d == 1) return interval_distance(a, b);
  if (mc_samples == 0) throw ContractError("cluster distance needs mc_samples > 0");

  // Bounding box of the union; computed symmetrically in (a, b) so that the
  // same seed yields the same sample set for both argument orders.
  Eigen::VectorXd lo(d), hi(d);
  for (Eigen::Index q = 0; q < d; ++q) {
    lo[q] = std::min(a.center[q] - a.radius, b.center[q] - b.radius);
    hi[q] = std::max(a.center[q] + a.radius, b.center[q] + b.radius);
  }
  double box_volume = 1.0;
  for (Eigen::Index q = 0; q < d; ++q) box_volume *= hi[q] - lo[q];

  // Latin hypercube: one stratified, independently shuffled coordinate per
  // dimension.
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> perms(static_cast<std::size_t>(d));
  for (auto& perm : perms) {
    perm.resize(mc_samples);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = mc_samples - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.index(i + 1)]);
  }

  const double r2a = a.radius * a.radius;
  const double r2b = b.radius * b.radius;
  std::size_t in_union = 0, in_sym_diff = 0;
  Eigen::VectorXd x(d);
  for (std::size_t i = 0; i < mc_samples; ++i) {
    for (Eigen::Index q = 0; q < d; ++q) {
      const double u =
          (static_cast<double>(perms[static_cast<std::size_t>(q)][i]) + rng.uniform()) /
          static_cast<double>(mc_samples);
      x[q] = lo[q] + (hi[q] - lo[q]) * u;
    }
    const bool in_a = (x - a.center).squaredNorm() <= r2a;
    const bool in_b = (x - b.center).squaredNorm() <= r2b;
    if (in_a || in_b) ++in_union;
    if (in_a != in_b) ++in_sym_diff;
  }

  ClusterDistanceResult res;
  res.raw = box_volume * static_cast<double>(in_sym_diff) / static_cast<double>(mc_samples);
  res.normalized =
      in_union > 0 ? static_cast<double>(in_sym_diff) / static_cast<double>(in_union) : 0.0;
  return res;
}

MatchResult match_clusterings(const Clustering& old_clustering, const Clustering& new_clustering,
                              double movement_threshold, const ContextModelSet& old_models,
                              std::size_t mc_samples, std::uint64_t seed) {
  if (!(movement_threshold > 0.0 && movement_threshold <= 1.0))
    throw ContractError("movement threshold must lie in (0, 1]");
  if (new_clustering.empty()) throw StateError("cannot match against an empty new clustering");

  const double survive_above = weight_threshold(new_clustering);
  MatchResult out;
  out.surviving.degenerate = new_clustering.degenerate;

  for (const auto& fresh : new_clustering.clusters) {
    if (!(fresh.weight > survive_above)) continue;
    out.surviving.clusters.push_back(fresh);
    out.surviving.total_mass += fresh.mass;

    // Closest old cluster by normalized distance; per-pair seeds keep the
    // Monte Carlo draws independent across pairs but stable across runs.
    int best_old = -1;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& old : old_clustering.clusters) {
      if (old_models.find(old.id) == old_models.end()) continue;
      const auto dist = cluster_distance(
          old, fresh, mc_samples,
          mix_seed(seed, static_cast<std::uint64_t>(old.id),
                   static_cast<std::uint64_t>(fresh.id)));
      if (dist.normalized < best) {
        best = dist.normalized;
        best_old = old.id;
      }
    }
    if (best_old >= 0 && best < movement_threshold) {
      out.models[fresh.id] = old_models.at(best_old)->clone();
    } else {
      out.needs_new.push_back(fresh.id);
    }
  }
  return out;
}

}  // namespace occstream
