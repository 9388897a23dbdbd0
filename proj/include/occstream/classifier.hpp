#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "occstream/instance.hpp"

namespace occstream {

// Per-dimension min-max rescaling to [0, 1], fitted once on an initialization
// window; later inputs are clamped into the fitted range. Degenerate
// dimensions (max == min) map to 0.5.
class MinMaxScaler {
 public:
  void fit(const std::vector<Instance>& window);
  bool fitted() const { return lo_.size() > 0; }
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd lo_, hi_;
};

// Streaming one-class model under the unified anomaly orientation: score(x)
// grows with anomalousness, whatever the underlying method's native scale.
// Callers decide OUTLIER via score > tau and gate train() on believed-normal
// verdicts.
class OneClassClassifier {
 public:
  virtual ~OneClassClassifier() = default;

  // Fits any input scaling and trains on the window (offline phase).
  virtual void initialize(const std::vector<Instance>& window) = 0;

  virtual double score(const Eigen::VectorXd& x) const = 0;

  // One incremental update on a believed-normal instance.
  virtual void train(const Eigen::VectorXd& x) = 0;

  virtual std::unique_ptr<OneClassClassifier> clone() const = 0;

  // Instances consumed by initialize() plus train() calls; used by framework
  // state exports and the training-purity tests.
  virtual std::int64_t train_count() const = 0;
};

enum class ClassifierKind { kAutoencoder, kHalfSpaceTrees, kNearestNeighbour };

struct ClassifierParams {
  // Streaming autoencoder
  double sa_learning_rate = 0.5;
  int sa_epochs = 10;
  // Streaming half-space trees
  int hst_trees = 5;
  int hst_depth = 12;
  std::int64_t hst_window = 500;
  double hst_size_limit = 0.1;
  // Streaming nearest-neighbour description
  std::size_t nnd_capacity = 100;
  double nnd_threshold = 1.0;
};

std::unique_ptr<OneClassClassifier> make_classifier(ClassifierKind kind,
                                                    const ClassifierParams& params,
                                                    std::uint64_t seed);

const char* classifier_name(ClassifierKind kind);
ClassifierKind classifier_from_name(const std::string& name);  // ConfigError on unknown

}  // namespace occstream
