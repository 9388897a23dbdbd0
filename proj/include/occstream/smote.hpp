#pragma once

#include <cstdint>
#include <vector>

#include "occstream/instance.hpp"

namespace occstream {

// Oversampling request for one context's buffer. Buffer instances are assumed
// to share a context; synthetics inherit the parent's context id and carry the
// majority class label.
struct OversampleRequest {
  std::vector<Instance> buffer;
  int neighbour_count = 5;       // k nearest neighbours form the partner pool
  std::size_t target_count = 0;  // top the buffer up to this many instances
  std::uint64_t seed = 0;
};

// parent + lambda * (neighbour - parent); one lambda per synthetic.
Eigen::VectorXd smote_interpolate(const Eigen::VectorXd& parent,
                                  const Eigen::VectorXd& neighbour, double lambda);

// Returns exactly max(0, target_count - buffer.size()) synthetics. Each picks
// a uniformly random parent, one of the parent's k nearest buffered
// neighbours, and a single lambda ~ U[0,1]. A singleton buffer duplicates its
// lone instance with per-dimension Gaussian jitter (sigma 1e-3). Deterministic
// under the seed. Throws StateError on an empty buffer, ContractError on
// neighbour_count < 1.
std::vector<Instance> smote_generate(const OversampleRequest& request);

}  // namespace occstream
