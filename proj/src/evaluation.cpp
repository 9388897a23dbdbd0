#include "occstream/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace occstream {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

EvaluationWindow::EvaluationWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw ContractError("evaluation window capacity must be >= 1");
}

void EvaluationWindow::push(double score, bool truth_minority) {
  if (std::isnan(score)) throw ContractError("evaluation window rejects NaN scores");
  pairs_.emplace_back(score, truth_minority);
  if (truth_minority) ++minority_;
  if (pairs_.size() > capacity_) {
    if (pairs_.front().second) --minority_;
    pairs_.pop_front();
  }
}

double prequential_auc(const EvaluationWindow& window) {
  if (!window.has_both_classes()) return kNaN;
  std::vector<std::pair<double, bool>> sorted(window.pairs().begin(), window.pairs().end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Midranks handle ties: each block of equal scores shares its mean rank.
  double rank_sum_minority = 0.0;
  std::size_t n_min = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t) {
      if (sorted[t].second) {
        rank_sum_minority += midrank;
        ++n_min;
      }
    }
    i = j;
  }
  const double n1 = static_cast<double>(n_min);
  const double n0 = static_cast<double>(sorted.size() - n_min);
  const double u = rank_sum_minority - n1 * (n1 + 1.0) / 2.0;
  return u / (n1 * n0);
}

ConfusionMatrix confusion_at(const EvaluationWindow& window, double tau) {
  ConfusionMatrix cm;
  for (const auto& [score, truth] : window.pairs()) {
    const bool flagged = score > tau;
    if (truth) {
      flagged ? ++cm.tp : ++cm.fn;
    } else {
      flagged ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

double sensitivity(const ConfusionMatrix& cm) {
  const std::int64_t pos = cm.tp + cm.fn;
  return pos > 0 ? static_cast<double>(cm.tp) / static_cast<double>(pos) : kNaN;
}

double specificity(const ConfusionMatrix& cm) {
  const std::int64_t neg = cm.tn + cm.fp;
  return neg > 0 ? static_cast<double>(cm.tn) / static_cast<double>(neg) : kNaN;
}

double g_mean(const ConfusionMatrix& cm) {
  const double sens = sensitivity(cm);
  const double spec = specificity(cm);
  if (std::isnan(sens) || std::isnan(spec)) return kNaN;
  return std::sqrt(sens * spec);
}

double informedness_optimal_tau(const EvaluationWindow& window) {
  if (!window.has_both_classes())
    throw StateError("informedness needs both classes in the window");

  std::vector<std::pair<double, bool>> sorted(window.pairs().begin(), window.pairs().end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const double total_pos = [&] {
    std::size_t c = 0;
    for (const auto& p : sorted) c += p.second ? 1u : 0u;
    return static_cast<double>(c);
  }();
  const double total_neg = static_cast<double>(sorted.size()) - total_pos;

  std::vector<double> candidates;
  candidates.push_back(sorted.front().first - 1.0);  // flags everything
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].first != sorted[i - 1].first)
      candidates.push_back(0.5 * (sorted[i - 1].first + sorted[i].first));
  candidates.push_back(sorted.back().first);  // flags nothing

  double best_tau = candidates.front();
  double best_j = -std::numeric_limits<double>::infinity();
  // One ascending sweep: counts at or below the candidate accumulate as the
  // candidate passes each score.
  std::size_t idx = 0;
  double pos_below = 0.0, neg_below = 0.0;
  for (double tau : candidates) {
    while (idx < sorted.size() && sorted[idx].first <= tau) {
      (sorted[idx].second ? pos_below : neg_below) += 1.0;
      ++idx;
    }
    const double sens = (total_pos - pos_below) / total_pos;
    const double spec = neg_below / total_neg;
    const double j = sens + spec - 1.0;
    if (j > best_j) {  // strict: ties keep the smaller candidate
      best_j = j;
      best_tau = tau;
    }
  }
  return best_tau;
}

double informedness_threshold(const std::vector<EvaluationWindow>& windows) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& w : windows) {
    if (!w.has_both_classes()) continue;
    sum += informedness_optimal_tau(w);
    ++used;
  }
  if (used == 0) throw StateError("no window with both classes; informedness undefined");
  return sum / static_cast<double>(used);
}

namespace {

// Regularized incomplete beta function I_x(a, b) via the standard continued
// fraction (Lentz), accurate enough for t CDFs at any realistic dof.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_cdf(double x, double dof) {
  if (!(dof > 0.0)) throw ContractError("student t needs dof > 0");
  if (x == 0.0) return 0.5;
  const double ib = incomplete_beta(0.5 * dof, 0.5, dof / (dof + x * x));
  return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

PosteriorSummary correlated_bayesian_t_test(const std::vector<double>& differences, double rho,
                                            double rope_half_width) {
  const std::size_t n = differences.size();
  if (n < 2) throw ContractError("correlated t test needs at least 2 differences");
  if (!(rho >= 0.0 && rho < 1.0)) throw ContractError("rho must lie in [0, 1)");
  if (!(rope_half_width >= 0.0)) throw ContractError("rope half width must be >= 0");

  double mean = 0.0;
  for (double d : differences) mean += d;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double d : differences) var += (d - mean) * (d - mean);
  var /= static_cast<double>(n - 1);

  PosteriorSummary out;
  const double scale = std::sqrt((1.0 / static_cast<double>(n) + rho / (1.0 - rho)) * var);
  if (scale == 0.0) {
    // Degenerate posterior: a point mass at the sample mean.
    if (mean < -rope_half_width) {
      out.p_left = 1.0;
    } else if (mean > rope_half_width) {
      out.p_right = 1.0;
    } else {
      out.p_rope = 1.0;
    }
    return out;
  }
  const double dof = static_cast<double>(n - 1);
  const double cdf_lo = student_t_cdf((-rope_half_width - mean) / scale, dof);
  const double cdf_hi = student_t_cdf((rope_half_width - mean) / scale, dof);
  out.p_left = cdf_lo;
  out.p_rope = cdf_hi - cdf_lo;
  out.p_right = 1.0 - cdf_hi;
  return out;
}

}  // namespace occstream
