#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "occstream/frameworks.hpp"
#include "occstream/instance.hpp"

namespace occstream {

// One emitted evaluation point: sliding-window metrics for one fold replica
// after `instance_index` stream instances (initialization included).
struct MetricRow {
  std::int64_t instance_index = 0;
  int fold = 0;
  double prequential_auc = 0.0;
  double g_mean = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
};

struct FoldSeries {
  int fold = 0;
  double tau_used = 0.0;         // threshold the replica decided with
  double informedness_tau = 0.0; // mean of per-window optimal thresholds (NaN if none)
  std::vector<MetricRow> rows;
  std::vector<OCCluster::Snapshot> cluster_snapshots;  // clustering replicas only
};

struct CrossValidationPlan {
  FrameworkChoice framework = FrameworkChoice::kSingle;
  FrameworkConfig config;
  int fold_count = 10;
  std::int64_t metric_period = 500;
  std::size_t window_capacity = 500;
  bool parallel = true;
};

struct CrossValidationResult {
  std::vector<FoldSeries> folds;  // indexed by fold id
  std::vector<MetricRow> merged;  // ordered by (instance_index, fold)
};

// Distributed prequential cross-validation. Stream position i (measured from
// the very first instance, initialization window included) belongs to fold
// i mod fold_count. Replica f trains on every position outside fold f — its
// initialization subset and online training gate both apply that rule — but
// scores and is evaluated on every online instance. With fold_count = 1 the
// single replica trains on everything (plain prequential run).
//
// When the configured threshold is NaN, each replica calibrates its own: it
// scores its initialization subset and takes the Informedness-optimal
// threshold over those (score, truth) pairs, falling back to the maximum
// observed score when only one class is present.
//
// Replicas run in parallel (one thread per fold) with no shared mutable
// state; the merged series is ordered by (instance_index, fold) and therefore
// deterministic regardless of scheduling.
CrossValidationResult run_cross_validation(const CrossValidationPlan& plan,
                                           const std::vector<Instance>& initial_window,
                                           const std::vector<Instance>& online_segment);

// Drains a stream into an initialization window and an online segment.
std::pair<std::vector<Instance>, std::vector<Instance>> materialize_stream(
    InstanceStream& stream, std::int64_t initial_points, std::int64_t online_length);

}  // namespace occstream
