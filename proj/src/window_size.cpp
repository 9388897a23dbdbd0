#include "occstream/window_size.hpp"

#include <algorithm>
#include <cmath>

namespace occstream {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ContractError("confidence must lie in (0, 1)");
  // Phi(x) - Phi(-x) = 2*Phi(x) - 1 = confidence.
  const double target = 0.5 * (1.0 + confidence);
  double lo = 0.0, hi = 1.0;
  while (normal_cdf(hi) < target) hi *= 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

WindowSizeResult min_window_size(const WindowSizeQuery& query) {
  if (query.context_probabilities.empty())
    throw ContractError("window size query needs context probabilities");
  double sum = 0.0;
  for (double p : query.context_probabilities) {
    if (!(p > 0.0 && p <= 1.0))
      throw ContractError("context probabilities must lie in (0, 1]");
    sum += p;
  }
  if (sum > 1.0 + 1e-9) throw ContractError("context probabilities must sum to at most 1");
  if (query.required_count < 1) throw ContractError("required_count must be >= 1");

  const double p = *std::min_element(query.context_probabilities.begin(),
                                     query.context_probabilities.end());
  const double x = normal_quantile_two_sided(query.confidence);
  const double tau = static_cast<double>(query.required_count);

  const auto satisfies = [p, x, tau](std::int64_t n) {
    const double nd = static_cast<double>(n);
    return nd * p - x * std::sqrt(nd * p * (1.0 - p)) >= tau;
  };

  // n*p - x*sqrt(n*p*(1-p)) >= tau is quadratic in u = sqrt(n):
  // p*u^2 - x*sqrt(p*(1-p))*u - tau >= 0.
  const double v = x * std::sqrt(p * (1.0 - p));
  const double u = (v + std::sqrt(v * v + 4.0 * p * tau)) / (2.0 * p);
  std::int64_t n = static_cast<std::int64_t>(std::ceil(u * u));

  // Tighten against floating point slop around the ceiling.
  while (n > 1 && satisfies(n - 1)) --n;
  while (!satisfies(n)) ++n;

  WindowSizeResult res;
  res.window_size = n;
  const double nd = static_cast<double>(n);
  res.approximation_valid =
      p < 1.0 && nd > 9.0 * (1.0 - p) / p && nd > 9.0 * p / (1.0 - p);
  return res;
}

}  // namespace occstream
