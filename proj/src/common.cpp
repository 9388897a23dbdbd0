#include "occstream/common.hpp"

#include <cmath>

namespace occstream {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  return splitmix64(base ^ splitmix64(salt));
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt1, std::uint64_t salt2) {
  return mix_seed(mix_seed(base, salt1), salt2);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double two_pi = 6.283185307179586476925286766559;
  spare_ = mag * std::sin(two_pi * u2);
  have_spare_ = true;
  return mag * std::cos(two_pi * u2);
}

std::size_t Rng::index(std::size_t n) {
  // uniform() < 1 strictly, so the floor stays below n for any sane n.
  return static_cast<std::size_t>(uniform() * static_cast<double>(n));
}

}  // namespace occstream
