#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "occstream/classifier.hpp"

namespace occstream {

// Bottleneck width of the streaming autoencoder (input -> 2 -> input).
inline constexpr int kAutoencoderHiddenWidth = 2;

// Shallow autoencoder trained by online backpropagation. Inputs are expected
// in [0, 1]; both layers use the logistic activation and the anomaly score is
// half the squared reconstruction error.
class StreamingAutoencoder {
 public:
  // Weights and biases start uniform in [-0.5, 0.5] under the seed.
  StreamingAutoencoder(int dim, double learning_rate, std::uint64_t seed);

  int dim() const { return dim_; }

  Eigen::VectorXd reconstruct(const Eigen::VectorXd& x) const;
  double score(const Eigen::VectorXd& x) const;  // 0.5 * ||x - reconstruct(x)||^2

  struct Gradients {
    Eigen::MatrixXd w1, w2;
    Eigen::VectorXd b1, b2;
  };
  // Analytic backprop gradients of score() at x; exposed so tests can check
  // them against finite differences.
  Gradients gradients(const Eigen::VectorXd& x) const;

  // One gradient-descent step on x.
  void train_step(const Eigen::VectorXd& x);

  // Full passes over the window in order; epochs == 0 leaves weights at their
  // freshly initialized values.
  void train_epochs(const std::vector<Eigen::VectorXd>& window, int epochs);

  const Eigen::MatrixXd& encoder_weights() const { return w1_; }
  const Eigen::MatrixXd& decoder_weights() const { return w2_; }
  const Eigen::VectorXd& encoder_bias() const { return b1_; }
  const Eigen::VectorXd& decoder_bias() const { return b2_; }

  // Restores a parameter snapshot (shapes must match the network).
  void load(const Eigen::MatrixXd& w1, const Eigen::VectorXd& b1, const Eigen::MatrixXd& w2,
            const Eigen::VectorXd& b2);

 private:
  int dim_;
  double lr_;
  Eigen::MatrixXd w1_;  // hidden x dim
  Eigen::VectorXd b1_;  // hidden
  Eigen::MatrixXd w2_;  // dim x hidden
  Eigen::VectorXd b2_;  // dim

  void check_input(const Eigen::VectorXd& x) const;
};

// Element-wise logistic function, usable in Eigen expressions.
Eigen::VectorXd logistic(const Eigen::VectorXd& v);

class AutoencoderClassifier : public OneClassClassifier {
 public:
  AutoencoderClassifier(double learning_rate, int epochs, std::uint64_t seed)
      : lr_(learning_rate), epochs_(epochs), seed_(seed) {}

  void initialize(const std::vector<Instance>& window) override;
  double score(const Eigen::VectorXd& x) const override;
  void train(const Eigen::VectorXd& x) override;
  std::unique_ptr<OneClassClassifier> clone() const override;
  std::int64_t train_count() const override { return train_count_; }

  const StreamingAutoencoder& network() const;

 private:
  double lr_;
  int epochs_;
  std::uint64_t seed_;
  MinMaxScaler scaler_;
  std::optional<StreamingAutoencoder> net_;
  std::int64_t train_count_ = 0;
};

}  // namespace occstream
