#include "occstream/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <tuple>

#include "occstream/common.hpp"
#include "occstream/evaluation.hpp"

namespace occstream {

namespace {

bool trains_at(std::int64_t position, int fold_count, int fold) {
  return fold_count == 1 || position % fold_count != fold;
}

// Calibrates the decision threshold on the replica's initialization subset:
// Informedness-optimal over its own (score, truth) pairs, or the maximum
// observed score when the subset is single-class. When no threshold beats
// chance (best informedness <= 0, e.g. the initial model cannot separate the
// classes yet) the optimum degenerates to "flag everything", which would stop
// all future training; the max-score fallback applies there too, so the
// learner starts out believing instances normal and keeps adapting.
double calibrate_tau(const Framework& framework, const std::vector<Instance>& subset) {
  EvaluationWindow window(std::max<std::size_t>(subset.size(), 1));
  double max_score = -std::numeric_limits<double>::infinity();
  for (const Instance& inst : subset) {
    const double score = framework.score_instance(inst).first;
    max_score = std::max(max_score, score);
    if (inst.label) window.push(score, *inst.label == Label::kMinority);
  }
  if (!std::isfinite(max_score)) {
    throw InitializationError("threshold calibration found no scorable instances");
  }
  if (window.has_both_classes()) {
    const double tau = informedness_optimal_tau(window);
    const ConfusionMatrix cm = confusion_at(window, tau);
    if (sensitivity(cm) + specificity(cm) - 1.0 > 0.0) return tau;
  }
  return max_score;
}

FoldSeries run_fold(const CrossValidationPlan& plan, const std::vector<Instance>& initial_window,
                    const std::vector<Instance>& online_segment, int fold) {
  FoldSeries series;
  series.fold = fold;

  std::vector<Instance> subset;
  subset.reserve(initial_window.size());
  for (std::size_t i = 0; i < initial_window.size(); ++i) {
    if (trains_at(static_cast<std::int64_t>(i), plan.fold_count, fold)) {
      subset.push_back(initial_window[i]);
    }
  }

  std::unique_ptr<Framework> framework = make_framework(plan.framework, plan.config);
  framework->initialize(subset);
  if (std::isnan(framework->tau())) framework->set_tau(calibrate_tau(*framework, subset));
  series.tau_used = framework->tau();

  EvaluationWindow window(plan.window_capacity);
  std::vector<double> window_optima;
  const auto init_size = static_cast<std::int64_t>(initial_window.size());
  for (std::size_t pos = 0; pos < online_segment.size(); ++pos) {
    const Instance& inst = online_segment[pos];
    const std::int64_t global = init_size + static_cast<std::int64_t>(pos);
    const StreamVerdict verdict =
        framework->step(inst, trains_at(global, plan.fold_count, fold));
    if (inst.label) window.push(verdict.score, *inst.label == Label::kMinority);

    if ((static_cast<std::int64_t>(pos) + 1) % plan.metric_period == 0) {
      MetricRow row;
      row.instance_index = global + 1;  // instances seen so far, initialization included
      row.fold = fold;
      row.prequential_auc = prequential_auc(window);
      const ConfusionMatrix cm = confusion_at(window, framework->tau());
      row.sensitivity = sensitivity(cm);
      row.specificity = specificity(cm);
      row.g_mean = g_mean(cm);
      series.rows.push_back(row);
      if (window.has_both_classes()) window_optima.push_back(informedness_optimal_tau(window));
    }
  }

  if (window_optima.empty()) {
    series.informedness_tau = std::numeric_limits<double>::quiet_NaN();
  } else {
    double sum = 0.0;
    for (double v : window_optima) sum += v;
    series.informedness_tau = sum / static_cast<double>(window_optima.size());
  }
  if (const auto* clustered = dynamic_cast<const OCCluster*>(framework.get())) {
    series.cluster_snapshots = clustered->snapshots();
  }
  return series;
}

}  // namespace

CrossValidationResult run_cross_validation(const CrossValidationPlan& plan,
                                           const std::vector<Instance>& initial_window,
                                           const std::vector<Instance>& online_segment) {
  if (plan.fold_count < 1) throw ConfigError("fold_count must be positive");
  if (plan.metric_period < 1) throw ConfigError("metric_period must be positive");
  if (plan.window_capacity < 1) throw ConfigError("window_capacity must be positive");

  CrossValidationResult result;
  result.folds.resize(plan.fold_count);

  if (plan.parallel && plan.fold_count > 1) {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> failures(plan.fold_count);
    workers.reserve(plan.fold_count);
    for (int fold = 0; fold < plan.fold_count; ++fold) {
      workers.emplace_back([&, fold] {
        try {
          result.folds[fold] = run_fold(plan, initial_window, online_segment, fold);
        } catch (...) {
          failures[fold] = std::current_exception();
        }
      });
    }
    for (std::thread& worker : workers) worker.join();
    for (const std::exception_ptr& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  } else {
    for (int fold = 0; fold < plan.fold_count; ++fold) {
      result.folds[fold] = run_fold(plan, initial_window, online_segment, fold);
    }
  }

  for (const FoldSeries& series : result.folds) {
    result.merged.insert(result.merged.end(), series.rows.begin(), series.rows.end());
  }
  std::sort(result.merged.begin(), result.merged.end(),
            [](const MetricRow& a, const MetricRow& b) {
              return std::tie(a.instance_index, a.fold) < std::tie(b.instance_index, b.fold);
            });
  return result;
}

std::pair<std::vector<Instance>, std::vector<Instance>> materialize_stream(
    InstanceStream& stream, std::int64_t initial_points, std::int64_t online_length) {
  if (initial_points < 1) throw ConfigError("initial_points must be positive");
  if (online_length < 0) throw ConfigError("online_length must be non-negative");
  std::vector<Instance> initial_window;
  initial_window.reserve(initial_points);
  for (std::int64_t i = 0; i < initial_points && stream.has_next(); ++i) {
    initial_window.push_back(stream.next());
  }
  if (static_cast<std::int64_t>(initial_window.size()) < initial_points) {
    throw InitializationError("stream ended inside the initialization window");
  }
  std::vector<Instance> online_segment;
  online_segment.reserve(online_length);
  for (std::int64_t i = 0; i < online_length && stream.has_next(); ++i) {
    online_segment.push_back(stream.next());
  }
  return {std::move(initial_window), std::move(online_segment)};
}

}  // namespace occstream
