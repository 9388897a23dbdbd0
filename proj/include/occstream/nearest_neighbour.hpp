#pragma once

#include <Eigen/Core>
#include <deque>

#include "occstream/classifier.hpp"

namespace occstream {

// Score returned when the local spacing collapses to zero but the query is
// not itself a duplicate of its neighbour.
inline constexpr double kNndDuplicateSentinel = 1e12;

// Nearest-neighbour description over a FIFO of believed-normal instances.
// score(x) = ||x - NN(x)|| / ||NN(x) - NN(NN(x))||, where the inner lookup
// excludes the element chosen as NN(x). Larger is more anomalous; the native
// decision is normal iff score <= acceptance threshold.
class NeighbourBuffer {
 public:
  NeighbourBuffer(std::size_t capacity, double acceptance_threshold);

  struct Result {
    double score;
    bool normal;
  };

  // Needs at least two buffered instances (StateError otherwise). If the
  // denominator vanishes, score is 0 for an exact duplicate query and the
  // sentinel otherwise.
  Result score(const Eigen::VectorXd& x) const;

  // Appends only when the caller believes x normal; evicts the oldest entry
  // beyond capacity.
  void update(const Eigen::VectorXd& x, bool believed_normal);

  std::size_t size() const { return points_.size(); }
  std::size_t capacity() const { return capacity_; }
  double acceptance_threshold() const { return threshold_; }
  const std::deque<Eigen::VectorXd>& points() const { return points_; }

 private:
  std::size_t capacity_;
  double threshold_;
  std::deque<Eigen::VectorXd> points_;

  // Index of the nearest buffered point to x, skipping `skip` (pass size()
  // to skip nothing). Ties resolve to the oldest entry.
  std::size_t nearest(const Eigen::VectorXd& x, std::size_t skip) const;
};

class NndClassifier : public OneClassClassifier {
 public:
  NndClassifier(std::size_t capacity, double acceptance_threshold)
      : buffer_(capacity, acceptance_threshold) {}

  void initialize(const std::vector<Instance>& window) override;
  double score(const Eigen::VectorXd& x) const override;
  // The framework gates train() on its own believed-normal verdict, so the
  // buffer update here is unconditional.
  void train(const Eigen::VectorXd& x) override;
  std::unique_ptr<OneClassClassifier> clone() const override;
  std::int64_t train_count() const override { return train_count_; }

  const NeighbourBuffer& buffer() const { return buffer_; }

 private:
  NeighbourBuffer buffer_;
  std::int64_t train_count_ = 0;
};

}  // namespace occstream
