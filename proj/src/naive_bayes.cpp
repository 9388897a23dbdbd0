#include "occstream/naive_bayes.hpp"

#include <cmath>
#include <limits>

namespace occstream {

GaussianNaiveBayes::GaussianNaiveBayes(int dim) : dim_(dim) {
  if (dim < 1) throw ContractError("naive Bayes needs dimension >= 1");
}

void GaussianNaiveBayes::train(const Eigen::VectorXd& x, int context) {
  if (x.size() != dim_) throw ContractError("naive Bayes input dimension mismatch");
  if (!x.allFinite()) throw ContractError("naive Bayes input must be finite");
  if (context < 0) throw ContractError("naive Bayes context ids must be >= 0");
  Moments& m = stats_[context];
  if (m.n == 0) {
    m.mean = Eigen::VectorXd::Zero(dim_);
    m.m2 = Eigen::VectorXd::Zero(dim_);
  }
  ++m.n;
  const Eigen::VectorXd delta = x - m.mean;
  m.mean += delta / static_cast<double>(m.n);
  m.m2 += delta.cwiseProduct(x - m.mean);
  ++total_;
}

std::map<int, double> GaussianNaiveBayes::log_posteriors(const Eigen::VectorXd& x) const {
  if (stats_.empty()) throw StateError("naive Bayes has seen no training data");
  if (x.size() != dim_) throw ContractError("naive Bayes input dimension mismatch");
  constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
  std::map<int, double> out;
  for (const auto& [ctx, m] : stats_) {
    double lp = std::log(static_cast<double>(m.n) / static_cast<double>(total_));
    for (int q = 0; q < dim_; ++q) {
      const double var =
          std::max(kVarianceFloor, m.n > 0 ? m.m2[q] / static_cast<double>(m.n) : 0.0);
      const double diff = x[q] - m.mean[q];
      lp += -0.5 * (kLogTwoPi + std::log(var) + diff * diff / var);
    }
    out[ctx] = lp;
  }
  return out;
}

int GaussianNaiveBayes::predict(const Eigen::VectorXd& x) const {
  const auto posts = log_posteriors(x);
  int best_ctx = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [ctx, lp] : posts) {  // ascending ids: strict > keeps the lowest on ties
    if (lp > best) {
      best = lp;
      best_ctx = ctx;
    }
  }
  return best_ctx;
}

}  // namespace occstream
