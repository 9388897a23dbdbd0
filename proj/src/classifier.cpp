#include "occstream/classifier.hpp"

#include <limits>
#include <string>

#include "occstream/autoencoder.hpp"
#include "occstream/half_space_trees.hpp"
#include "occstream/nearest_neighbour.hpp"

namespace occstream {

void MinMaxScaler::fit(const std::vector<Instance>& window) {
  if (window.empty()) throw StateError("cannot fit a scaler on an empty window");
  const Eigen::Index d = window.front().features.size();
  lo_ = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
  hi_ = Eigen::VectorXd::Constant(d, -std::numeric_limits<double>::infinity());
  for (const auto& inst : window) {
    if (inst.features.size() != d) throw ContractError("scaler window has mixed dimensions");
    lo_ = lo_.cwiseMin(inst.features);
    hi_ = hi_.cwiseMax(inst.features);
  }
}

Eigen::VectorXd MinMaxScaler::transform(const Eigen::VectorXd& x) const {
  if (!fitted()) throw StateError("scaler is not fitted");
  if (x.size() != lo_.size()) throw ContractError("scaler input dimension mismatch");
  Eigen::VectorXd out(x.size());
  for (Eigen::Index q = 0; q < x.size(); ++q) {
    const double range = hi_[q] - lo_[q];
    if (range <= 0.0) {
      out[q] = 0.5;
    } else {
      const double v = (x[q] - lo_[q]) / range;
      out[q] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }
  }
  return out;
}

std::unique_ptr<OneClassClassifier> make_classifier(ClassifierKind kind,
                                                    const ClassifierParams& params,
                                                    std::uint64_t seed) {
  switch (kind) {
    case ClassifierKind::kAutoencoder:
      return std::make_unique<AutoencoderClassifier>(params.sa_learning_rate, params.sa_epochs,
                                                     seed);
    case ClassifierKind::kHalfSpaceTrees:
      return std::make_unique<HsTreesClassifier>(params.hst_trees, params.hst_depth,
                                                 params.hst_window, params.hst_size_limit, seed);
    case ClassifierKind::kNearestNeighbour:
      return std::make_unique<NndClassifier>(params.nnd_capacity, params.nnd_threshold);
  }
  throw ContractError("unknown classifier kind");
}

const char* classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kAutoencoder:
      return "sa";
    case ClassifierKind::kHalfSpaceTrees:
      return "hstrees";
    case ClassifierKind::kNearestNeighbour:
      return "nnd";
  }
  return "?";
}

ClassifierKind classifier_from_name(const std::string& name) {
  if (name == "sa") return ClassifierKind::kAutoencoder;
  if (name == "hstrees") return ClassifierKind::kHalfSpaceTrees;
  if (name == "nnd") return ClassifierKind::kNearestNeighbour;
  throw ConfigError("unknown classifier '" + name + "' (expected sa, hstrees, or nnd)");
}

}  // namespace occstream
