#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "occstream/common.hpp"

namespace occstream {

enum class Label { kMajority, kMinority };

// One stream element: a feature vector plus optional class label and optional
// context id. Labels exist on synthetic/benchmark streams for evaluation only;
// contexts exist where a generator (or CSV column) supplies them.
struct Instance {
  Eigen::VectorXd features;
  std::optional<Label> label;
  std::optional<int> context;
};

// Shape of a synthetic stream: dimensionality, per-context emission
// probabilities, minority (anomaly) fraction, and the generator seed.
struct StreamDescriptor {
  int dimension = 0;
  std::vector<double> context_probabilities;
  double minority_fraction = 0.0;
  std::uint64_t seed = 0;

  int context_count() const { return static_cast<int>(context_probabilities.size()); }

  // Throws ConfigError on invalid shape.
  void validate() const;
};

// Diagonal-covariance normal component of a mixture-model stream.
struct MvndComponent {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // per-dimension, strictly positive
};

// Ball-shaped emitter of an RBF stream.
struct RbfCentroid {
  Eigen::VectorXd center;
  double radius = 0.0;  // > 0
  double weight = 0.0;  // > 0; weights normalize to a pick distribution
};

// Pull interface shared by generators and file readers. Generators never
// exhaust; file streams do.
class InstanceStream {
 public:
  virtual ~InstanceStream() = default;
  virtual int dimension() const = 0;
  virtual bool has_next() = 0;
  virtual Instance next() = 0;
};

// Throws ContractError if the instance does not match the descriptor
// (dimension, finiteness, context range). Used by tests and ingest checks.
void validate_instance(const Instance& inst, int dimension, int context_count);

}  // namespace occstream
