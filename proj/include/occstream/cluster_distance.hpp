#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "occstream/classifier.hpp"
#include "occstream/clustering.hpp"

namespace occstream {

// Distance between two hypersphere clusters: the volume of the symmetric
// difference of their balls (raw), and that volume divided by the union's
// volume (normalized, in [0, 1]). Both are metrics; the normalized form is
// what movement thresholds compare against.
//
// 1-D is computed analytically on intervals. Higher dimensions use seeded
// Latin-hypercube Monte Carlo over the union's bounding box, so results are
// deterministic under (samples, seed) and symmetric in the arguments.
struct ClusterDistanceResult {
  double raw = 0.0;
  double normalized = 0.0;
};

ClusterDistanceResult cluster_distance(const MacroCluster& a, const MacroCluster& b,
                                       std::size_t mc_samples, std::uint64_t seed);

using ContextModelSet = std::map<int, std::unique_ptr<OneClassClassifier>>;

// Carries the classifier population across a reclustering. Surviving new
// clusters (weight above 1/k^2 of the incoming clustering) inherit a clone of
// the old classifier whose cluster sits within the movement threshold
// (normalized distance < threshold); the rest are listed as needing a fresh
// classifier.
struct MatchResult {
  Clustering surviving;
  ContextModelSet models;
  std::vector<int> needs_new;
};

MatchResult match_clusterings(const Clustering& old_clustering, const Clustering& new_clustering,
                              double movement_threshold, const ContextModelSet& old_models,
                              std::size_t mc_samples, std::uint64_t seed);

}  // namespace occstream
