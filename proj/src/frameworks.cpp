#include "occstream/frameworks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>

#include "occstream/common.hpp"
#include "occstream/smote.hpp"

namespace occstream {

namespace {

// Buffers an initialization window by explicit context id.
std::map<int, std::vector<Instance>> split_by_context(const std::vector<Instance>& window,
                                                      int context_count) {
  std::map<int, std::vector<Instance>> buffers;
  for (int c = 0; c < context_count; ++c) buffers[c];
  for (const Instance& inst : window) {
    if (!inst.context) {
      throw ContractError("initialization instance is missing its context id");
    }
    if (*inst.context < 0 || *inst.context >= context_count) {
      throw ContractError("initialization instance context " + std::to_string(*inst.context) +
                          " is outside [0, " + std::to_string(context_count) + ")");
    }
    buffers[*inst.context].push_back(inst);
  }
  return buffers;
}

// Tops a buffer up to min_points with interpolated synthetics, in place.
void oversample_to_floor(std::vector<Instance>& buffer, std::int64_t min_points,
                         int neighbour_count, std::uint64_t seed) {
  if (static_cast<std::int64_t>(buffer.size()) >= min_points) return;
  OversampleRequest request;
  request.buffer = buffer;
  request.neighbour_count = neighbour_count;
  request.target_count = min_points;
  request.seed = seed;
  std::vector<Instance> synthetic = smote_generate(request);
  buffer.insert(buffer.end(), std::make_move_iterator(synthetic.begin()),
                std::make_move_iterator(synthetic.end()));
}

void export_models(std::ostream& os, const ContextModelSet& models) {
  for (const auto& [context, model] : models) {
    os << "context " << context << " trained " << model->train_count() << "\n";
  }
}

}  // namespace

void FrameworkConfig::validate(bool needs_contexts) const {
  if (min_points < 1) throw ConfigError("min_points must be positive");
  if (initial_points < min_points) {
    throw ConfigError("initial_points must be at least min_points");
  }
  if (needs_contexts && context_count < 1) {
    throw ConfigError("context_count must be positive");
  }
  if (recluster_period < 1) throw ConfigError("recluster_period must be positive");
  if (!(movement_threshold > 0.0) || movement_threshold > 1.0) {
    throw ConfigError("movement_threshold must be in (0, 1]");
  }
  if (!(inclusion_threshold > 0.0)) throw ConfigError("inclusion_threshold must be positive");
  if (k_min < 1 || k_max < k_min) throw ConfigError("cluster count range is invalid");
  if (cd_samples == 0) throw ConfigError("cd_samples must be positive");
  if (smote_neighbours < 1) throw ConfigError("smote_neighbours must be positive");
}

Verdict Framework::verdict_for(double score) const {
  if (std::isnan(tau_)) {
    throw StateError("decision threshold has not been set");
  }
  return score > tau_ ? Verdict::kOutlier : Verdict::kNormal;
}

// --- single-classifier baseline -------------------------------------------

SingleClassifierFramework::SingleClassifierFramework(const FrameworkConfig& config)
    : Framework(config) {
  config_.validate(false);
}

void SingleClassifierFramework::initialize(const std::vector<Instance>& window) {
  if (window.empty()) throw InitializationError("initialization window is empty");
  std::vector<Instance> buffer = window;
  oversample_to_floor(buffer, config_.min_points, config_.smote_neighbours,
                      mix_seed(config_.seed, seed_tag::kSmote, 0));
  model_ = make_classifier(config_.classifier, config_.params,
                           mix_seed(config_.seed, seed_tag::kClassifier, 0));
  model_->initialize(buffer);
}

StreamVerdict SingleClassifierFramework::step(const Instance& inst, bool allow_train) {
  if (!model_) throw StateError("framework has not been initialized");
  StreamVerdict out;
  out.score = model_->score(inst.features);
  out.label = verdict_for(out.score);
  out.context = 0;
  if (allow_train && out.label == Verdict::kNormal) model_->train(inst.features);
  return out;
}

std::pair<double, int> SingleClassifierFramework::score_instance(const Instance& inst) const {
  if (!model_) throw StateError("framework has not been initialized");
  return {model_->score(inst.features), 0};
}

std::map<int, std::int64_t> SingleClassifierFramework::training_counts() const {
  std::map<int, std::int64_t> counts;
  if (model_) counts[0] = model_->train_count();
  return counts;
}

void SingleClassifierFramework::export_state(std::ostream& os) const {
  os << "framework single\n";
  if (model_) os << "context 0 trained " << model_->train_count() << "\n";
}

// --- explicit context at train and test ------------------------------------

OCComplete::OCComplete(const FrameworkConfig& config) : Framework(config) {
  config_.validate(true);
}

void OCComplete::initialize(const std::vector<Instance>& window) {
  auto buffers = split_by_context(window, config_.context_count);
  for (auto& [context, buffer] : buffers) {
    if (buffer.empty()) {
      throw InitializationError("context " + std::to_string(context) +
                                " received no initialization instances");
    }
    oversample_to_floor(buffer, config_.min_points, config_.smote_neighbours,
                        mix_seed(config_.seed, seed_tag::kSmote, context));
    auto model = make_classifier(config_.classifier, config_.params,
                                 mix_seed(config_.seed, seed_tag::kClassifier, context));
    model->initialize(buffer);
    models_[context] = std::move(model);
  }
}

int OCComplete::required_context(const Instance& inst) const {
  if (!inst.context) throw ContractError("instance is missing its context id");
  if (models_.find(*inst.context) == models_.end()) {
    throw ContractError("instance context " + std::to_string(*inst.context) +
                        " has no classifier");
  }
  return *inst.context;
}

StreamVerdict OCComplete::step(const Instance& inst, bool allow_train) {
  if (models_.empty()) throw StateError("framework has not been initialized");
  const int context = required_context(inst);
  OneClassClassifier& model = *models_.at(context);
  StreamVerdict out;
  out.score = model.score(inst.features);
  out.label = verdict_for(out.score);
  out.context = context;
  if (allow_train && out.label == Verdict::kNormal) model.train(inst.features);
  return out;
}

std::pair<double, int> OCComplete::score_instance(const Instance& inst) const {
  if (models_.empty()) throw StateError("framework has not been initialized");
  const int context = required_context(inst);
  return {models_.at(context)->score(inst.features), context};
}

std::map<int, std::int64_t> OCComplete::training_counts() const {
  std::map<int, std::int64_t> counts;
  for (const auto& [context, model] : models_) counts[context] = model->train_count();
  return counts;
}

void OCComplete::export_state(std::ostream& os) const {
  os << "framework occomplete\n";
  export_models(os, models_);
}

// --- context predicted online by a frozen decider ---------------------------

OCFuzzy::OCFuzzy(const FrameworkConfig& config) : Framework(config) {
  config_.validate(true);
}

void OCFuzzy::initialize(const std::vector<Instance>& window) {
  auto buffers = split_by_context(window, config_.context_count);
  const Eigen::Index dim = window.empty() ? 0 : window.front().features.size();
  decider_.emplace(static_cast<int>(dim));
  for (auto& [context, buffer] : buffers) {
    if (buffer.empty()) {
      throw InitializationError("context " + std::to_string(context) +
                                " received no initialization instances");
    }
    oversample_to_floor(buffer, config_.min_points, config_.smote_neighbours,
                        mix_seed(config_.seed, seed_tag::kSmote, context));
    // The decider learns from the oversampled buffer so its class priors match
    // the balanced training material the classifiers see.
    for (const Instance& inst : buffer) decider_->train(inst.features, context);
    auto model = make_classifier(config_.classifier, config_.params,
                                 mix_seed(config_.seed, seed_tag::kClassifier, context));
    model->initialize(buffer);
    models_[context] = std::move(model);
  }
}

const GaussianNaiveBayes& OCFuzzy::decider() const {
  if (!decider_) throw StateError("framework has not been initialized");
  return *decider_;
}

StreamVerdict OCFuzzy::step(const Instance& inst, bool allow_train) {
  if (!decider_ || models_.empty()) throw StateError("framework has not been initialized");
  const int predicted = decider_->predict(inst.features);
  if (inst.context) ++decider_confusion_[{*inst.context, predicted}];
  OneClassClassifier& model = *models_.at(predicted);
  StreamVerdict out;
  out.score = model.score(inst.features);
  out.label = verdict_for(out.score);
  out.context = predicted;
  if (allow_train && out.label == Verdict::kNormal) model.train(inst.features);
  return out;
}

std::pair<double, int> OCFuzzy::score_instance(const Instance& inst) const {
  if (!decider_ || models_.empty()) throw StateError("framework has not been initialized");
  const int predicted = decider_->predict(inst.features);
  return {models_.at(predicted)->score(inst.features), predicted};
}

std::map<int, std::int64_t> OCFuzzy::training_counts() const {
  std::map<int, std::int64_t> counts;
  for (const auto& [context, model] : models_) counts[context] = model->train_count();
  return counts;
}

void OCFuzzy::export_state(std::ostream& os) const {
  os << "framework ocfuzzy\n";
  export_models(os, models_);
}

// --- context recovered by stream clustering ---------------------------------

OCCluster::OCCluster(const FrameworkConfig& config) : Framework(config) {
  config_.validate(false);
}

void OCCluster::remember(const Instance& inst) {
  recent_.push_back(inst);
  while (static_cast<std::int64_t>(recent_.size()) > config_.recluster_period) {
    recent_.pop_front();
  }
}

void OCCluster::initialize(const std::vector<Instance>& window) {
  if (window.empty()) throw InitializationError("initialization window is empty");
  const Eigen::Index dim = window.front().features.size();
  pool_ = std::make_unique<MicroClusterPool>(static_cast<int>(dim));
  for (const Instance& inst : window) {
    pool_->insert(inst.features, clock_);
    remember(inst);
    ++clock_;
  }

  Clustering full = macro_cluster(*pool_, config_.k_min, config_.k_max,
                                  mix_seed(config_.seed, seed_tag::kMacro, epoch_), clock_);
  clustering_ = prune_by_weight(full);
  if (clustering_.clusters.empty()) {
    throw InitializationError("every initial cluster fell below the weight threshold");
  }

  // Route the initialization window to the surviving clusters, oversample each
  // buffer to the floor, and train that cluster's classifier on it.
  std::map<int, std::vector<Instance>> buffers;
  for (const MacroCluster& cluster : clustering_.clusters) buffers[cluster.id];
  for (const Instance& inst : window) {
    buffers[nearest_cluster(clustering_, inst.features).first].push_back(inst);
  }
  for (auto& [id, buffer] : buffers) {
    if (buffer.empty()) {
      // A surviving cluster can end up without directly-routed instances when a
      // heavier neighbour shadows it; seed its buffer from the cluster center.
      Instance pseudo;
      pseudo.features = clustering_.find(id)->center;
      buffer.push_back(pseudo);
    }
    oversample_to_floor(buffer, config_.min_points, config_.smote_neighbours,
                        mix_seed(config_.seed, seed_tag::kSmote, id));
    auto model = make_classifier(config_.classifier, config_.params,
                                 mix_seed(config_.seed, seed_tag::kClassifier, id));
    model->initialize(buffer);
    models_[id] = std::move(model);
  }
  snapshots_.push_back({clock_, clustering_});
}

void OCCluster::train_fresh(int cluster_id) {
  const MacroCluster* cluster = clustering_.find(cluster_id);
  std::vector<Instance> buffer;
  for (const Instance& inst : recent_) {
    if (nearest_cluster(clustering_, inst.features).first == cluster_id) {
      buffer.push_back(inst);
    }
  }
  if (buffer.empty()) {
    Instance pseudo;
    pseudo.features = cluster->center;
    buffer.push_back(pseudo);
  }
  oversample_to_floor(buffer, config_.min_points, config_.smote_neighbours,
                      mix_seed(config_.seed, seed_tag::kFreshSmote,
                               epoch_ * 10000 + cluster_id));
  auto model = make_classifier(config_.classifier, config_.params,
                               mix_seed(config_.seed, seed_tag::kFreshClassifier,
                                        epoch_ * 10000 + cluster_id));
  model->initialize(buffer);
  models_[cluster_id] = std::move(model);
}

void OCCluster::recluster() {
  ++epoch_;
  Clustering fresh;
  try {
    fresh = macro_cluster(*pool_, config_.k_min, config_.k_max,
                          mix_seed(config_.seed, seed_tag::kMacro, epoch_), clock_);
  } catch (const StateError&) {
    // Decay can leave fewer micro-clusters than k_min; keep the current model set.
    ++all_pruned_events_;
    return;
  }

  MatchResult match = match_clusterings(clustering_, fresh, config_.movement_threshold,
                                        models_, config_.cd_samples,
                                        mix_seed(config_.seed, seed_tag::kClusterDistance,
                                                 epoch_));
  if (match.surviving.clusters.empty()) {
    // Everything fell below the weight threshold: keep the previous clustering
    // and classifiers rather than running blind.
    ++all_pruned_events_;
    return;
  }
  clustering_ = std::move(match.surviving);
  models_ = std::move(match.models);
  for (int id : match.needs_new) train_fresh(id);
  snapshots_.push_back({clock_, clustering_});
}

StreamVerdict OCCluster::step(const Instance& inst, bool allow_train) {
  if (!pool_ || models_.empty()) throw StateError("framework has not been initialized");
  const auto [cluster_id, gap] = nearest_cluster(clustering_, inst.features);
  OneClassClassifier& model = *models_.at(cluster_id);
  StreamVerdict out;
  out.score = model.score(inst.features);
  out.label = verdict_for(out.score);
  out.context = cluster_id;

  if (allow_train) {
    if (out.label == Verdict::kNormal) {
      const MacroCluster* cluster = clustering_.find(cluster_id);
      const double reach = (inst.features - cluster->center).norm();
      if (reach <= config_.inclusion_threshold * cluster->radius) {
        model.train(inst.features);
      }
    }
    pool_->insert(inst.features, clock_);
    remember(inst);
  }
  ++clock_;
  ++since_recluster_;
  if (allow_train && since_recluster_ >= config_.recluster_period) {
    since_recluster_ = 0;
    recluster();
  }
  return out;
}

std::pair<double, int> OCCluster::score_instance(const Instance& inst) const {
  if (!pool_ || models_.empty()) throw StateError("framework has not been initialized");
  const int cluster_id = nearest_cluster(clustering_, inst.features).first;
  return {models_.at(cluster_id)->score(inst.features), cluster_id};
}

std::map<int, std::int64_t> OCCluster::training_counts() const {
  std::map<int, std::int64_t> counts;
  for (const auto& [id, model] : models_) counts[id] = model->train_count();
  return counts;
}

void OCCluster::export_state(std::ostream& os) const {
  os << "framework occluster\n";
  os << "clusters " << clustering_.clusters.size() << " degenerate "
     << (clustering_.degenerate ? 1 : 0) << "\n";
  export_models(os, models_);
}

// --- factory ----------------------------------------------------------------

std::unique_ptr<Framework> make_framework(FrameworkChoice choice, const FrameworkConfig& config) {
  switch (choice) {
    case FrameworkChoice::kSingle:
      return std::make_unique<SingleClassifierFramework>(config);
    case FrameworkChoice::kOCComplete:
      return std::make_unique<OCComplete>(config);
    case FrameworkChoice::kOCFuzzy:
      return std::make_unique<OCFuzzy>(config);
    case FrameworkChoice::kOCCluster:
      return std::make_unique<OCCluster>(config);
  }
  throw ContractError("unknown framework choice");
}

const char* framework_name(FrameworkChoice choice) {
  switch (choice) {
    case FrameworkChoice::kSingle:
      return "single";
    case FrameworkChoice::kOCComplete:
      return "occomplete";
    case FrameworkChoice::kOCFuzzy:
      return "ocfuzzy";
    case FrameworkChoice::kOCCluster:
      return "occluster";
  }
  throw ContractError("unknown framework choice");
}

FrameworkChoice framework_from_name(const std::string& name) {
  if (name == "single") return FrameworkChoice::kSingle;
  if (name == "occomplete") return FrameworkChoice::kOCComplete;
  if (name == "ocfuzzy") return FrameworkChoice::kOCFuzzy;
  if (name == "occluster") return FrameworkChoice::kOCCluster;
  throw ConfigError("unknown framework '" + name + "'");
}

}  // namespace occstream
