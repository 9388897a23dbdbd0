#pragma once

#include <deque>
#include <memory>
#include <utility>
#include <vector>

#include "occstream/instance.hpp"

namespace occstream {

// Context of the Euclidean-nearest majority instance; ties break toward the
// lowest context id. Throws StateError when the list is empty and
// ContractError when a listed instance lacks a context.
int assign_minority_context(const Eigen::VectorXd& x,
                            const std::vector<Instance>& recent_majority);

// FIFO of the most recent majority instances, used to contextualize minority
// draws. Falls back to the descriptor's context distribution while empty
// (only possible in the first few stream positions).
class ContextAssigner {
 public:
  explicit ContextAssigner(std::size_t capacity = 500) : capacity_(capacity) {}

  void observe(const Eigen::VectorXd& features, int context);
  bool empty() const { return entries_.empty(); }

  // Nearest stored majority instance's context; ties toward lowest id.
  int assign(const Eigen::VectorXd& x) const;

 private:
  std::size_t capacity_;
  std::deque<std::pair<Eigen::VectorXd, int>> entries_;
};

// Mixture-model stream: per context a list of diagonal-covariance normal
// components for the majority class, plus a shared minority component list.
// Minority instances inherit the context of the nearest recent majority
// instance. Deterministic under the descriptor seed.
class MixtureModelStream : public InstanceStream {
 public:
  MixtureModelStream(StreamDescriptor descriptor,
                     std::vector<std::vector<MvndComponent>> majority_components,
                     std::vector<MvndComponent> minority_components,
                     std::size_t assigner_capacity = 500);

  int dimension() const override { return descriptor_.dimension; }
  bool has_next() override { return true; }
  Instance next() override;

 private:
  StreamDescriptor descriptor_;
  std::vector<std::vector<MvndComponent>> majority_;
  std::vector<MvndComponent> minority_;
  ContextAssigner assigner_;
  Rng rng_;

  int sample_context();
  Eigen::VectorXd sample_component(const MvndComponent& c);
};

// RBF stream: per context a list of weighted centroid balls (uniform draws
// within a ball); minority instances come from their own centroid list, except
// that with probability noise_fraction a minority draw is replaced by a
// uniform draw over the bounding box of all centroid balls expanded by 10%.
class RbfStream : public InstanceStream {
 public:
  RbfStream(StreamDescriptor descriptor,
            std::vector<std::vector<RbfCentroid>> majority_centroids,
            std::vector<RbfCentroid> minority_centroids, double noise_fraction,
            std::size_t assigner_capacity = 500);

  int dimension() const override { return descriptor_.dimension; }
  bool has_next() override { return true; }
  Instance next() override;

  // Bounding box used for noise draws (after the 10% expansion).
  const std::vector<std::pair<double, double>>& noise_box() const { return box_; }

 private:
  StreamDescriptor descriptor_;
  std::vector<std::vector<RbfCentroid>> majority_;
  std::vector<RbfCentroid> minority_;
  double noise_fraction_;
  std::vector<std::pair<double, double>> box_;
  ContextAssigner assigner_;
  Rng rng_;

  int sample_context();
  const RbfCentroid& pick_weighted(const std::vector<RbfCentroid>& list);
  Eigen::VectorXd sample_ball(const RbfCentroid& c);
};

}  // namespace occstream
