#include "occstream/instance.hpp"

#include <cmath>
#include <string>

namespace occstream {

void StreamDescriptor::validate() const {
  if (dimension < 1) throw ConfigError("stream dimension must be >= 1");
  if (context_probabilities.empty())
    throw ConfigError("stream needs at least one context probability");
  double sum = 0.0;
  for (double p : context_probabilities) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("context probabilities must lie in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("context probabilities must sum to 1 (got " + std::to_string(sum) + ")");
  if (!(minority_fraction >= 0.0 && minority_fraction <= 1.0))
    throw ConfigError("minority_fraction must lie in [0, 1]");
}

void validate_instance(const Instance& inst, int dimension, int context_count) {
  if (inst.features.size() != dimension)
    throw ContractError("instance dimension " + std::to_string(inst.features.size()) +
                        " does not match stream dimension " + std::to_string(dimension));
  if (!inst.features.allFinite()) throw ContractError("instance features must be finite");
  if (inst.context) {
    if (*inst.context < 0 || *inst.context >= context_count)
      throw ContractError("context id " + std::to_string(*inst.context) + " out of range");
  }
}

}  // namespace occstream
