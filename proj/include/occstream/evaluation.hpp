#pragma once

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "occstream/common.hpp"

namespace occstream {

// Sliding window of (anomaly score, truth-is-minority) pairs, oldest evicted
// at capacity. Feeds the prequential metrics; metrics that need both classes
// return NaN sentinels on single-class windows, and callers exclude those
// from aggregates.
class EvaluationWindow {
 public:
  explicit EvaluationWindow(std::size_t capacity = 500);

  void push(double score, bool truth_minority);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return pairs_.size(); }
  bool has_both_classes() const { return minority_ > 0 && minority_ < pairs_.size(); }
  const std::deque<std::pair<double, bool>>& pairs() const { return pairs_; }

 private:
  std::size_t capacity_;
  std::deque<std::pair<double, bool>> pairs_;
  std::size_t minority_ = 0;
};

// Probability that a random minority score exceeds a random majority score,
// ties counted half (rank/Mann-Whitney form). NaN when a class is missing.
double prequential_auc(const EvaluationWindow& window);

struct ConfusionMatrix {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Confusion of the rule "minority iff score > tau" against the window truth.
ConfusionMatrix confusion_at(const EvaluationWindow& window, double tau);

double sensitivity(const ConfusionMatrix& cm);  // NaN when no positives
double specificity(const ConfusionMatrix& cm);  // NaN when no negatives
double g_mean(const ConfusionMatrix& cm);       // sqrt(sens * spec); NaN sentinel

// Threshold maximizing Informedness J = sensitivity + specificity - 1 within
// one window. Candidates are the midpoints between adjacent distinct scores
// plus the two boundary rules (everything / nothing flagged), which makes the
// scan exact over all real thresholds; ties break toward the smaller
// threshold. Throws StateError when the window lacks a class.
double informedness_optimal_tau(const EvaluationWindow& window);

// Mean of the per-window optima; windows missing a class are skipped, and a
// StateError is raised when none are usable.
double informedness_threshold(const std::vector<EvaluationWindow>& windows);

// CDF of the Student-t distribution with dof degrees of freedom.
double student_t_cdf(double x, double dof);

// Posterior masses of a correlated Bayesian t-test over fold differences:
// Student-t posterior with n-1 dof, location mean(d), scale
// sqrt((1/n + rho/(1-rho)) * var(d)); the three probabilities partition the
// line at +/- rope_half_width. Zero-variance inputs place all mass on the
// mean's side or region. Requires n >= 2 and rho in [0, 1).
struct PosteriorSummary {
  double p_left = 0.0;   // mean difference below -rope
  double p_rope = 0.0;   // practical equivalence
  double p_right = 0.0;  // mean difference above +rope
};

PosteriorSummary correlated_bayesian_t_test(const std::vector<double>& differences, double rho,
                                            double rope_half_width = 0.01);

}  // namespace occstream
