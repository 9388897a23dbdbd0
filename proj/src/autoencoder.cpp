#include "occstream/autoencoder.hpp"

#include <cmath>
#include <string>

namespace occstream {

Eigen::VectorXd logistic(const Eigen::VectorXd& v) {
  return (1.0 / (1.0 + (-v.array()).exp())).matrix();
}

StreamingAutoencoder::StreamingAutoencoder(int dim, double learning_rate, std::uint64_t seed)
    : dim_(dim), lr_(learning_rate) {
  if (dim < 1) throw ContractError("autoencoder needs dimension >= 1");
  if (!(learning_rate >= 0.0)) throw ContractError("learning rate must be >= 0");
  Rng rng(seed);
  const int h = kAutoencoderHiddenWidth;
  auto draw = [&rng] { return rng.uniform(-0.5, 0.5); };
  w1_.resize(h, dim);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < dim; ++c) w1_(r, c) = draw();
  b1_.resize(h);
  for (int r = 0; r < h; ++r) b1_[r] = draw();
  w2_.resize(dim, h);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < h; ++c) w2_(r, c) = draw();
  b2_.resize(dim);
  for (int r = 0; r < dim; ++r) b2_[r] = draw();
}

void StreamingAutoencoder::check_input(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw ContractError("autoencoder input dimension " + std::to_string(x.size()) +
                        " != " + std::to_string(dim_));
  if (!x.allFinite()) throw ContractError("autoencoder input must be finite");
}

Eigen::VectorXd StreamingAutoencoder::reconstruct(const Eigen::VectorXd& x) const {
  check_input(x);
  const Eigen::VectorXd hidden = logistic(w1_ * x + b1_);
  return logistic(w2_ * hidden + b2_);
}

double StreamingAutoencoder::score(const Eigen::VectorXd& x) const {
  return 0.5 * (x - reconstruct(x)).squaredNorm();
}

StreamingAutoencoder::Gradients StreamingAutoencoder::gradients(const Eigen::VectorXd& x) const {
  check_input(x);
  const Eigen::VectorXd hidden = logistic(w1_ * x + b1_);
  const Eigen::VectorXd out = logistic(w2_ * hidden + b2_);
  // L = 0.5 * ||x - out||^2 with logistic units in both layers.
  const Eigen::VectorXd delta_out =
      ((out - x).array() * out.array() * (1.0 - out.array())).matrix();
  const Eigen::VectorXd delta_hidden =
      ((w2_.transpose() * delta_out).array() * hidden.array() * (1.0 - hidden.array())).matrix();
  Gradients g;
  g.w2 = delta_out * hidden.transpose();
  g.b2 = delta_out;
  g.w1 = delta_hidden * x.transpose();
  g.b1 = delta_hidden;
  return g;
}

void StreamingAutoencoder::train_step(const Eigen::VectorXd& x) {
  const Gradients g = gradients(x);
  w1_ -= lr_ * g.w1;
  b1_ -= lr_ * g.b1;
  w2_ -= lr_ * g.w2;
  b2_ -= lr_ * g.b2;
}

void StreamingAutoencoder::train_epochs(const std::vector<Eigen::VectorXd>& window, int epochs) {
  if (epochs < 0) throw ContractError("epochs must be >= 0");
  for (int e = 0; e < epochs; ++e)
    for (const auto& x : window) train_step(x);
}

void StreamingAutoencoder::load(const Eigen::MatrixXd& w1, const Eigen::VectorXd& b1,
                                const Eigen::MatrixXd& w2, const Eigen::VectorXd& b2) {
  if (w1.rows() != w1_.rows() || w1.cols() != w1_.cols() || b1.size() != b1_.size() ||
      w2.rows() != w2_.rows() || w2.cols() != w2_.cols() || b2.size() != b2_.size()) {
    throw ContractError("parameter snapshot shapes do not match the network");
  }
  w1_ = w1;
  b1_ = b1;
  w2_ = w2;
  b2_ = b2;
}

void AutoencoderClassifier::initialize(const std::vector<Instance>& window) {
  if (window.empty()) throw StateError("autoencoder initialization window is empty");
  scaler_.fit(window);
  net_.emplace(static_cast<int>(window.front().features.size()), lr_, seed_);
  std::vector<Eigen::VectorXd> scaled;
  scaled.reserve(window.size());
  for (const auto& inst : window) scaled.push_back(scaler_.transform(inst.features));
  net_->train_epochs(scaled, epochs_);
  train_count_ = static_cast<std::int64_t>(window.size());
}

double AutoencoderClassifier::score(const Eigen::VectorXd& x) const {
  if (!net_) throw StateError("autoencoder classifier is not initialized");
  return net_->score(scaler_.transform(x));
}

void AutoencoderClassifier::train(const Eigen::VectorXd& x) {
  if (!net_) throw StateError("autoencoder classifier is not initialized");
  net_->train_step(scaler_.transform(x));
  ++train_count_;
}

std::unique_ptr<OneClassClassifier> AutoencoderClassifier::clone() const {
  return std::make_unique<AutoencoderClassifier>(*this);
}

const StreamingAutoencoder& AutoencoderClassifier::network() const {
  if (!net_) throw StateError("autoencoder classifier is not initialized");
  return *net_;
}

}  // namespace occstream
