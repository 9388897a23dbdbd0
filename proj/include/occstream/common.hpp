#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace occstream {

// Failure categories surfaced to callers. The CLI maps ConfigError-like
// failures to exit code 2 and InitializationError to exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InitializationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stable sub-seed derivation: every stochastic component of a run draws from
// its own stream so that adding one component never shifts another's draws.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt1, std::uint64_t salt2);

// Salt tags for mix_seed, one per randomness consumer.
namespace seed_tag {
inline constexpr std::uint64_t kClassifier = 1;
inline constexpr std::uint64_t kSmote = 2;
inline constexpr std::uint64_t kMacro = 3;
inline constexpr std::uint64_t kClusterDistance = 4;
inline constexpr std::uint64_t kFreshClassifier = 5;
inline constexpr std::uint64_t kFreshSmote = 6;
}  // namespace seed_tag

// Deterministic random source. std::mt19937_64's output sequence is fully
// specified by the standard; the distribution transforms live here because
// std::*_distribution output is implementation-defined and seeded runs must
// reproduce byte-identically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; one spare value is cached.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace occstream
