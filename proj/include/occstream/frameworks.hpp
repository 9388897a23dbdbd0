#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "occstream/classifier.hpp"
#include "occstream/cluster_distance.hpp"
#include "occstream/clustering.hpp"
#include "occstream/instance.hpp"
#include "occstream/naive_bayes.hpp"

namespace occstream {

// Shared configuration of the context frameworks. initial_points is the TOTAL
// number of stream instances consumed by initialization (callers default it
// to 2000 per context model).
struct FrameworkConfig {
  std::int64_t initial_points = 0;
  std::int64_t min_points = 1000;   // per-context floor enforced by oversampling
  int context_count = 0;            // j; ignored by the clustering framework
  double tau = std::numeric_limits<double>::quiet_NaN();  // NaN: calibrate later
  std::int64_t recluster_period = 2000;                   // w
  double movement_threshold = 0.2;                        // against normalized distance
  double inclusion_threshold = 1.0;                       // x radius gates online training
  int k_min = 2;
  int k_max = 8;
  std::size_t cd_samples = 100000;
  int smote_neighbours = 5;
  std::uint64_t seed = 0;
  ClassifierKind classifier = ClassifierKind::kAutoencoder;
  ClassifierParams params;

  void validate(bool needs_contexts) const;  // throws ConfigError
};

enum class Verdict { kNormal, kOutlier };

// Outcome of one prequential step: the believed label, the anomaly score that
// produced it, and the context (explicit, predicted, or cluster id) whose
// classifier scored the instance.
struct StreamVerdict {
  Verdict label = Verdict::kNormal;
  double score = 0.0;
  int context = 0;
};

class Framework {
 public:
  virtual ~Framework() = default;

  // Consumes the initialization window (offline phase: labels and, where the
  // variant needs them, contexts are available).
  virtual void initialize(const std::vector<Instance>& window) = 0;

  // Score, verdict at tau (outlier iff score > tau, strictly), and, when
  // allow_train and the verdict is normal, one incremental training step.
  virtual StreamVerdict step(const Instance& inst, bool allow_train = true) = 0;

  // Pure scoring: (score, selected context), no state change. Used for
  // threshold calibration.
  virtual std::pair<double, int> score_instance(const Instance& inst) const = 0;

  // Per-context classifier training counts (state snapshot, purity tests).
  virtual std::map<int, std::int64_t> training_counts() const = 0;

  virtual void export_state(std::ostream& os) const = 0;

  virtual const char* name() const = 0;

  double tau() const { return tau_; }
  void set_tau(double tau) { tau_ = tau; }

 protected:
  explicit Framework(const FrameworkConfig& config) : config_(config), tau_(config.tau) {}

  Verdict verdict_for(double score) const;

  FrameworkConfig config_;
  double tau_;
};

// Baseline: one classifier over the whole stream, same believed-normal
// training gate as the frameworks, context fixed at 0.
class SingleClassifierFramework : public Framework {
 public:
  explicit SingleClassifierFramework(const FrameworkConfig& config);

  void initialize(const std::vector<Instance>& window) override;
  StreamVerdict step(const Instance& inst, bool allow_train) override;
  std::pair<double, int> score_instance(const Instance& inst) const override;
  std::map<int, std::int64_t> training_counts() const override;
  void export_state(std::ostream& os) const override;
  const char* name() const override { return "single"; }

 private:
  std::unique_ptr<OneClassClassifier> model_;
};

// Context explicit at training and testing: one classifier per declared
// context, instances routed by their context id.
class OCComplete : public Framework {
 public:
  explicit OCComplete(const FrameworkConfig& config);

  void initialize(const std::vector<Instance>& window) override;
  StreamVerdict step(const Instance& inst, bool allow_train) override;
  std::pair<double, int> score_instance(const Instance& inst) const override;
  std::map<int, std::int64_t> training_counts() const override;
  void export_state(std::ostream& os) const override;
  const char* name() const override { return "occomplete"; }

 private:
  ContextModelSet models_;

  int required_context(const Instance& inst) const;
};

// Context explicit during initialization only: a naive Bayes decider learns
// the context from the initialization buffers (synthetics included) and
// routes every later instance; the decider is never retrained online.
class OCFuzzy : public Framework {
 public:
  explicit OCFuzzy(const FrameworkConfig& config);

  void initialize(const std::vector<Instance>& window) override;
  StreamVerdict step(const Instance& inst, bool allow_train) override;
  std::pair<double, int> score_instance(const Instance& inst) const override;
  std::map<int, std::int64_t> training_counts() const override;
  void export_state(std::ostream& os) const override;
  const char* name() const override { return "ocfuzzy"; }

  const GaussianNaiveBayes& decider() const;

  // Oracle-context vs predicted-context counts over stepped instances that
  // carried a context id.
  const std::map<std::pair<int, int>, std::int64_t>& decider_confusion() const {
    return decider_confusion_;
  }

 private:
  ContextModelSet models_;
  std::optional<GaussianNaiveBayes> decider_;
  std::map<std::pair<int, int>, std::int64_t> decider_confusion_;
};

// No context supervision: contexts are recovered by stream clustering. Every
// recluster_period instances a new macro clustering is extracted, low-weight
// clusters are pruned, classifiers follow clusters whose normalized movement
// stays below the threshold, and clusters without a donor get a fresh
// classifier trained on their recent instances.
class OCCluster : public Framework {
 public:
  explicit OCCluster(const FrameworkConfig& config);

  void initialize(const std::vector<Instance>& window) override;
  StreamVerdict step(const Instance& inst, bool allow_train) override;
  std::pair<double, int> score_instance(const Instance& inst) const override;
  std::map<int, std::int64_t> training_counts() const override;
  void export_state(std::ostream& os) const override;
  const char* name() const override { return "occluster"; }

  const Clustering& clustering() const { return clustering_; }
  const MicroClusterPool& pool() const { return *pool_; }
  std::int64_t all_pruned_events() const { return all_pruned_events_; }

  struct Snapshot {
    std::int64_t instance_index;
    Clustering clustering;
  };
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }

 private:
  std::unique_ptr<MicroClusterPool> pool_;
  Clustering clustering_;
  ContextModelSet models_;
  std::deque<Instance> recent_;  // last recluster_period instances
  std::int64_t clock_ = 0;       // all instances seen (init + online)
  std::int64_t since_recluster_ = 0;
  std::int64_t epoch_ = 0;  // reclustering round, salts the derived seeds
  std::int64_t all_pruned_events_ = 0;
  std::vector<Snapshot> snapshots_;

  void remember(const Instance& inst);
  void train_fresh(int cluster_id);
  void recluster();
};

enum class FrameworkChoice { kSingle, kOCComplete, kOCFuzzy, kOCCluster };

std::unique_ptr<Framework> make_framework(FrameworkChoice choice, const FrameworkConfig& config);

const char* framework_name(FrameworkChoice choice);
FrameworkChoice framework_from_name(const std::string& name);  // ConfigError on unknown

}  // namespace occstream
