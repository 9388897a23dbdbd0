#include "occstream/generators.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace occstream {

int assign_minority_context(const Eigen::VectorXd& x,
                            const std::vector<Instance>& recent_majority) {
  if (recent_majority.empty())
    throw StateError("cannot assign a context: no recent majority instances");
  double best = std::numeric_limits<double>::infinity();
  int best_ctx = -1;
  for (const Instance& inst : recent_majority) {
    if (!inst.context) throw ContractError("majority instance without a context id");
    const double d2 = (inst.features - x).squaredNorm();
    if (d2 < best || (d2 == best && *inst.context < best_ctx)) {
      best = d2;
      best_ctx = *inst.context;
    }
  }
  return best_ctx;
}

void ContextAssigner::observe(const Eigen::VectorXd& features, int context) {
  entries_.emplace_back(features, context);
  if (entries_.size() > capacity_) entries_.pop_front();
}

int ContextAssigner::assign(const Eigen::VectorXd& x) const {
  if (entries_.empty()) throw StateError("context assigner is empty");
  double best = std::numeric_limits<double>::infinity();
  int best_ctx = -1;
  for (const auto& [feat, ctx] : entries_) {
    const double d2 = (feat - x).squaredNorm();
    if (d2 < best || (d2 == best && ctx < best_ctx)) {
      best = d2;
      best_ctx = ctx;
    }
  }
  return best_ctx;
}

namespace {

void check_dims(const Eigen::VectorXd& v, int d, const char* what) {
  if (v.size() != d)
    throw ConfigError(std::string(what) + " has dimension " + std::to_string(v.size()) +
                      ", stream expects " + std::to_string(d));
}

}  // namespace

MixtureModelStream::MixtureModelStream(StreamDescriptor descriptor,
                                       std::vector<std::vector<MvndComponent>> majority_components,
                                       std::vector<MvndComponent> minority_components,
                                       std::size_t assigner_capacity)
    : descriptor_(std::move(descriptor)),
      majority_(std::move(majority_components)),
      minority_(std::move(minority_components)),
      assigner_(assigner_capacity),
      rng_(descriptor_.seed) {
  descriptor_.validate();
  const int d = descriptor_.dimension;
  if (static_cast<int>(majority_.size()) != descriptor_.context_count())
    throw ConfigError("one majority component list per context is required");
  for (const auto& list : majority_) {
    if (list.empty()) throw ConfigError("empty majority component list");
    for (const auto& c : list) {
      check_dims(c.mean, d, "component mean");
      check_dims(c.stddev, d, "component stddev");
      if ((c.stddev.array() <= 0.0).any())
        throw ConfigError("component stddev entries must be > 0");
    }
  }
  if (descriptor_.minority_fraction > 0.0 && minority_.empty())
    throw ConfigError("minority_fraction > 0 requires minority components");
  for (const auto& c : minority_) {
    check_dims(c.mean, d, "minority mean");
    check_dims(c.stddev, d, "minority stddev");
    if ((c.stddev.array() <= 0.0).any())
      throw ConfigError("minority stddev entries must be > 0");
  }
}

int MixtureModelStream::sample_context() {
  const double u = rng_.uniform();
  double acc = 0.0;
  const auto& probs = descriptor_.context_probabilities;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return descriptor_.context_count() - 1;  // guards rounding of the last bin
}

Eigen::VectorXd MixtureModelStream::sample_component(const MvndComponent& c) {
  Eigen::VectorXd x(descriptor_.dimension);
  for (int q = 0; q < descriptor_.dimension; ++q)
    x[q] = rng_.normal(c.mean[q], c.stddev[q]);
  return x;
}

Instance MixtureModelStream::next() {
  Instance inst;
  if (rng_.uniform() < descriptor_.minority_fraction) {
    const MvndComponent& comp = minority_[rng_.index(minority_.size())];
    inst.features = sample_component(comp);
    inst.label = Label::kMinority;
    // Stream start: no majority seen yet, fall back to the context prior.
    inst.context = assigner_.empty() ? sample_context() : assigner_.assign(inst.features);
  } else {
    const int ctx = sample_context();
    const auto& list = majority_[ctx];
    inst.features = sample_component(list[rng_.index(list.size())]);
    inst.label = Label::kMajority;
    inst.context = ctx;
    assigner_.observe(inst.features, ctx);
  }
  return inst;
}

RbfStream::RbfStream(StreamDescriptor descriptor,
                     std::vector<std::vector<RbfCentroid>> majority_centroids,
                     std::vector<RbfCentroid> minority_centroids, double noise_fraction,
                     std::size_t assigner_capacity)
    : descriptor_(std::move(descriptor)),
      majority_(std::move(majority_centroids)),
      minority_(std::move(minority_centroids)),
      noise_fraction_(noise_fraction),
      assigner_(assigner_capacity),
      rng_(descriptor_.seed) {
  descriptor_.validate();
  const int d = descriptor_.dimension;
  if (static_cast<int>(majority_.size()) != descriptor_.context_count())
    throw ConfigError("one majority centroid list per context is required");
  if (!(noise_fraction_ >= 0.0 && noise_fraction_ <= 1.0))
    throw ConfigError("noise_fraction must lie in [0, 1]");
  auto check_centroid = [d](const RbfCentroid& c) {
    check_dims(c.center, d, "centroid center");
    if (!(c.radius > 0.0)) throw ConfigError("centroid radius must be > 0");
    if (!(c.weight > 0.0)) throw ConfigError("centroid weight must be > 0");
  };
  for (const auto& list : majority_) {
    if (list.empty()) throw ConfigError("empty majority centroid list");
    for (const auto& c : list) check_centroid(c);
  }
  if (descriptor_.minority_fraction > 0.0 && minority_.empty())
    throw ConfigError("minority_fraction > 0 requires minority centroids");
  for (const auto& c : minority_) check_centroid(c);

  // Noise box: axis-aligned box over every centroid ball, expanded 10% about
  // its center.
  box_.assign(d, {std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()});
  auto grow = [this, d](const RbfCentroid& c) {
    for (int q = 0; q < d; ++q) {
      box_[q].first = std::min(box_[q].first, c.center[q] - c.radius);
      box_[q].second = std::max(box_[q].second, c.center[q] + c.radius);
    }
  };
  for (const auto& list : majority_)
    for (const auto& c : list) grow(c);
  for (const auto& c : minority_) grow(c);
  for (auto& [lo, hi] : box_) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.55 * (hi - lo);  // 1.1x the original extent
    lo = mid - half;
    hi = mid + half;
  }
}

int RbfStream::sample_context() {
  const double u = rng_.uniform();
  double acc = 0.0;
  const auto& probs = descriptor_.context_probabilities;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return descriptor_.context_count() - 1;
}

const RbfCentroid& RbfStream::pick_weighted(const std::vector<RbfCentroid>& list) {
  double total = 0.0;
  for (const auto& c : list) total += c.weight;
  const double u = rng_.uniform() * total;
  double acc = 0.0;
  for (const auto& c : list) {
    acc += c.weight;
    if (u < acc) return c;
  }
  return list.back();
}

Eigen::VectorXd RbfStream::sample_ball(const RbfCentroid& c) {
  const int d = descriptor_.dimension;
  // Uniform in the ball: normalized Gaussian direction, radius ~ r * u^(1/d).
  Eigen::VectorXd dir(d);
  double norm = 0.0;
  do {
    for (int q = 0; q < d; ++q) dir[q] = rng_.normal();
    norm = dir.norm();
  } while (norm == 0.0);
  const double r = c.radius * std::pow(rng_.uniform(), 1.0 / d);
  return c.center + dir * (r / norm);
}

Instance RbfStream::next() {
  Instance inst;
  if (rng_.uniform() < descriptor_.minority_fraction) {
    if (rng_.uniform() < noise_fraction_) {
      Eigen::VectorXd x(descriptor_.dimension);
      for (int q = 0; q < descriptor_.dimension; ++q)
        x[q] = rng_.uniform(box_[q].first, box_[q].second);
      inst.features = std::move(x);
    } else {
      inst.features = sample_ball(pick_weighted(minority_));
    }
    inst.label = Label::kMinority;
    inst.context = assigner_.empty() ? sample_context() : assigner_.assign(inst.features);
  } else {
    const int ctx = sample_context();
    inst.features = sample_ball(pick_weighted(majority_[ctx]));
    inst.label = Label::kMajority;
    inst.context = ctx;
    assigner_.observe(inst.features, ctx);
  }
  return inst;
}

}  // namespace occstream
