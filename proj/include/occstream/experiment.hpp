#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "occstream/cross_validation.hpp"
#include "occstream/csv_stream.hpp"
#include "occstream/evaluation.hpp"
#include "occstream/frameworks.hpp"
#include "occstream/generators.hpp"
#include "occstream/instance.hpp"

namespace occstream {

using ConfigMap = std::map<std::string, std::string>;

// Flat `key = value` configuration text: one pair per line, `#` starts a
// comment, blank lines ignored, later duplicates win. Throws ConfigError with
// the offending line number on malformed lines.
ConfigMap parse_config_text(const std::string& text, const std::string& source_name);
ConfigMap parse_config_file(const std::string& path);

// `key=value` override strings (CLI); applied in order on top of the file.
void apply_overrides(ConfigMap& config, const std::vector<std::string>& overrides);

// Fully resolved experiment: stream source, framework, evaluation protocol.
// manifest_echo holds every consumed key with its final (possibly defaulted)
// value; re-running from that echo reproduces the experiment bit-for-bit.
struct ExperimentConfig {
  // Stream source (exactly one of the three kinds).
  std::string stream_kind;  // "mixture" | "rbf" | "csv"
  StreamDescriptor descriptor;
  std::vector<std::vector<MvndComponent>> mixture_majority;
  std::vector<MvndComponent> mixture_minority;
  std::vector<std::vector<RbfCentroid>> rbf_majority;
  std::vector<RbfCentroid> rbf_minority;
  double rbf_noise_fraction = 0.0;
  std::string csv_path;
  CsvSchema csv_schema;
  std::optional<CsvNormalization> csv_normalization;
  std::int64_t stream_length = 100000;  // online instances after initialization

  FrameworkChoice framework = FrameworkChoice::kSingle;
  FrameworkConfig framework_config;

  int fold_count = 10;
  std::int64_t metric_period = 500;
  std::size_t window_capacity = 500;
  bool parallel = true;

  ConfigMap manifest_echo;
};

// Validates and defaults a raw key-value map. ConfigError names the offending
// or unknown key.
ExperimentConfig resolve_config(const ConfigMap& raw);

std::unique_ptr<InstanceStream> build_stream(const ExperimentConfig& config);

// Runs the experiment and writes into out_dir: manifest.txt (reproducible
// config echo), metrics.csv (long-format per-fold series), threshold_report.csv
// (per-fold decision and Informedness-optimal thresholds), and clusters.csv
// (clustering snapshots, clustering framework only).
void run_experiment(const ExperimentConfig& config, const std::string& out_dir);

struct ComparisonReport {
  std::string comparison;          // "<b> - <a> (<metric>)"
  std::vector<double> differences; // per-fold mean differences, run B minus run A
  PosteriorSummary posterior;
};

// Compares two finished run directories on "auc" or "gmean": per-fold means of
// the metric (NaN rows skipped), differences B − A, correlated Bayesian t-test
// with correlation 1/fold_count. The runs must share stream seed and fold
// structure (ConfigError otherwise).
ComparisonReport compare_runs(const std::string& dir_a, const std::string& dir_b,
                              const std::string& metric, double rope_half_width);

void write_comparison_csv(const std::string& path, const ComparisonReport& report);

// Deterministic float formatting for all CSV output: shortest representation
// that stays stable across runs; NaN prints as "nan".
std::string format_metric(double value);

}  // namespace occstream
