#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>

#include "occstream/common.hpp"

namespace occstream {

// Gaussian naive Bayes over context ids: running per-context, per-feature
// moments (Welford) with a variance floor, count-based priors, and
// log-posterior argmax prediction with ties toward the lowest context id.
class GaussianNaiveBayes {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  explicit GaussianNaiveBayes(int dim);

  void train(const Eigen::VectorXd& x, int context);

  // Throws StateError before any training.
  int predict(const Eigen::VectorXd& x) const;

  // Unnormalized log posterior per context, for inspection and tests.
  std::map<int, double> log_posteriors(const Eigen::VectorXd& x) const;

  std::int64_t train_count() const { return total_; }
  std::size_t context_count() const { return stats_.size(); }

 private:
  struct Moments {
    std::int64_t n = 0;
    Eigen::VectorXd mean;
    Eigen::VectorXd m2;
  };

  int dim_;
  std::int64_t total_ = 0;
  std::map<int, Moments> stats_;
};

}  // namespace occstream
