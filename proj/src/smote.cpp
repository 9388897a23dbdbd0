#include "occstream/smote.hpp"

#include <algorithm>
#include <utility>

namespace occstream {

Eigen::VectorXd smote_interpolate(const Eigen::VectorXd& parent,
                                  const Eigen::VectorXd& neighbour, double lambda) {
  if (parent.size() != neighbour.size())
    throw ContractError("interpolation endpoints must share a dimension");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractError("lambda must lie in [0, 1]");
  return parent + lambda * (neighbour - parent);
}

std::vector<Instance> smote_generate(const OversampleRequest& request) {
  if (request.buffer.empty()) throw StateError("cannot oversample an empty buffer");
  if (request.neighbour_count < 1) throw ContractError("neighbour_count must be >= 1");

  const std::size_t have = request.buffer.size();
  if (request.target_count <= have) return {};
  const std::size_t deficit = request.target_count - have;

  Rng rng(request.seed);
  std::vector<Instance> out;
  out.reserve(deficit);

  if (have == 1) {
    const Instance& lone = request.buffer.front();
    for (std::size_t s = 0; s < deficit; ++s) {
      Instance synth;
      synth.features = lone.features;
      for (Eigen::Index q = 0; q < synth.features.size(); ++q)
        synth.features[q] += rng.normal(0.0, 1e-3);
      synth.label = Label::kMajority;
      synth.context = lone.context;
      out.push_back(std::move(synth));
    }
    return out;
  }

  // Neighbour lists are fixed by the buffer, so compute them once per parent
  // on demand and reuse across synthetics.
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(request.neighbour_count),
                                              have - 1);
  std::vector<std::vector<std::size_t>> neighbour_cache(have);
  auto neighbours_of = [&](std::size_t parent) -> const std::vector<std::size_t>& {
    auto& cached = neighbour_cache[parent];
    if (!cached.empty()) return cached;
    std::vector<std::pair<double, std::size_t>> dists;
    dists.reserve(have - 1);
    for (std::size_t i = 0; i < have; ++i) {
      if (i == parent) continue;
      dists.emplace_back((request.buffer[i].features - request.buffer[parent].features).norm(), i);
    }
    std::sort(dists.begin(), dists.end());  // distance, then index: deterministic ties
    cached.reserve(k);
    for (std::size_t i = 0; i < k; ++i) cached.push_back(dists[i].second);
    return cached;
  };

  for (std::size_t s = 0; s < deficit; ++s) {
    const std::size_t parent = rng.index(have);
    const auto& pool = neighbours_of(parent);
    const std::size_t partner = pool[rng.index(pool.size())];
    const double lambda = rng.uniform();
    Instance synth;
    synth.features = smote_interpolate(request.buffer[parent].features,
                                       request.buffer[partner].features, lambda);
    synth.label = Label::kMajority;
    synth.context = request.buffer[parent].context;
    out.push_back(std::move(synth));
  }
  return out;
}

}  // namespace occstream
