#pragma once

#include <cstdint>
#include <vector>

#include "occstream/common.hpp"

namespace occstream {

// How many stream instances must be buffered so that, with confidence
// `confidence`, at least `required_count` of them come from the rarest
// context (normal approximation to the binomial).
struct WindowSizeQuery {
  std::vector<double> context_probabilities;  // each in (0, 1], sum <= 1 + 1e-9
  std::int64_t required_count = 1;            // instances needed per context
  double confidence = 0.95;                   // in (0, 1)
};

struct WindowSizeResult {
  std::int64_t window_size = 0;
  // Rule-of-thumb validity of the normal approximation at the returned n:
  // n > 9(1-p)/p and n > 9p/(1-p) for the rarest context probability p.
  bool approximation_valid = false;
};

double normal_cdf(double x);

// Two-sided standard-normal quantile: the x with Phi(x) - Phi(-x) =
// confidence, found by bisection to 1e-10.
double normal_quantile_two_sided(double confidence);

// Smallest integer n with n*p - x*sqrt(n*p*(1-p)) >= required_count for
// p = min context probability; solved in closed form (quadratic in sqrt(n))
// and then tightened so that n-1 always fails the inequality.
WindowSizeResult min_window_size(const WindowSizeQuery& query);

}  // namespace occstream
