#include "occstream/nearest_neighbour.hpp"

#include <cmath>
#include <limits>

namespace occstream {

NeighbourBuffer::NeighbourBuffer(std::size_t capacity, double acceptance_threshold)
    : capacity_(capacity), threshold_(acceptance_threshold) {
  if (capacity_ < 2) throw ContractError("neighbour buffer capacity must be >= 2");
  if (!(threshold_ > 0.0)) throw ContractError("acceptance threshold must be > 0");
}

std::size_t NeighbourBuffer::nearest(const Eigen::VectorXd& x, std::size_t skip) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = points_.size();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i == skip) continue;
    const double d2 = (points_[i] - x).squaredNorm();
    if (d2 < best) {
      best = d2;
      best_idx = i;
    }
  }
  return best_idx;
}

NeighbourBuffer::Result NeighbourBuffer::score(const Eigen::VectorXd& x) const {
  if (points_.size() < 2)
    throw StateError("neighbour buffer needs at least 2 instances to score");
  std::size_t nn = nearest(x, points_.size());
  if (points_.size() >= 3 && (points_[nn] - x).squaredNorm() == 0.0) {
    // The query coincides with a stored point: treat it as that point and
    // score leave-one-out, so instances the buffer memorized still measure
    // their spacing against the rest of the data instead of degenerating to
    // 0. A second coincident point still yields 0 (true duplicates).
    nn = nearest(x, nn);
  }
  const std::size_t nn2 = nearest(points_[nn], nn);
  const double numer = (x - points_[nn]).norm();
  const double denom = (points_[nn] - points_[nn2]).norm();
  double s;
  if (denom == 0.0) {
    s = (numer == 0.0) ? 0.0 : kNndDuplicateSentinel;
  } else {
    s = numer / denom;
  }
  return {s, s <= threshold_};
}

void NeighbourBuffer::update(const Eigen::VectorXd& x, bool believed_normal) {
  if (!believed_normal) return;
  points_.push_back(x);
  if (points_.size() > capacity_) points_.pop_front();
}

void NndClassifier::initialize(const std::vector<Instance>& window) {
  if (window.empty()) throw StateError("neighbour buffer initialization window is empty");
  for (const auto& inst : window) buffer_.update(inst.features, true);
  train_count_ = static_cast<std::int64_t>(window.size());
}

double NndClassifier::score(const Eigen::VectorXd& x) const {
  return buffer_.score(x).score;
}

void NndClassifier::train(const Eigen::VectorXd& x) {
  buffer_.update(x, true);
  ++train_count_;
}

std::unique_ptr<OneClassClassifier> NndClassifier::clone() const {
  return std::make_unique<NndClassifier>(*this);
}

}  // namespace occstream
