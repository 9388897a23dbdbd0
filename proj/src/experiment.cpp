#include "occstream/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "occstream/common.hpp"

namespace occstream {

namespace {

constexpr const char* kManifestSchema = "occstream-manifest-v1";
constexpr const char* kMetricsSchema = "occstream-metrics-v1";
constexpr const char* kThresholdSchema = "occstream-thresholds-v1";
constexpr const char* kClustersSchema = "occstream-clusters-v1";
constexpr const char* kComparisonSchema = "occstream-comparison-v1";

std::string trim(const std::string& s) {
  std::size_t first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  std::size_t last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, delim)) parts.push_back(part);
  if (!s.empty() && s.back() == delim) parts.push_back("");
  return parts;
}

double parse_double_value(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
}

std::int64_t parse_int_value(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + text + "' is not an integer");
  }
}

bool parse_bool_value(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': '" + text + "' is not a boolean");
}

std::string format_exact(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string format_exact(std::int64_t value) { return std::to_string(value); }

// Reads typed values out of the raw map, recording every consumed key and its
// final (possibly defaulted) value so the manifest echo reproduces the run.
class Resolver {
 public:
  explicit Resolver(const ConfigMap& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) {
    const std::string value = has(key) ? raw_.at(key) : fallback;
    note(key, value);
    return value;
  }

  std::string str_required(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + key + "'");
    note(key, raw_.at(key));
    return raw_.at(key);
  }

  std::int64_t i64(const std::string& key, std::int64_t fallback) {
    const std::int64_t value = has(key) ? parse_int_value(key, raw_.at(key)) : fallback;
    note(key, format_exact(value));
    return value;
  }

  int int_(const std::string& key, int fallback) {
    return static_cast<int>(i64(key, fallback));
  }

  double dbl(const std::string& key, double fallback) {
    const double value = has(key) ? parse_double_value(key, raw_.at(key)) : fallback;
    note(key, format_exact(value));
    return value;
  }

  double dbl_required(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + key + "'");
    return dbl(key, 0.0);
  }

  bool bln(const std::string& key, bool fallback) {
    const bool value = has(key) ? parse_bool_value(key, raw_.at(key)) : fallback;
    note(key, value ? "true" : "false");
    return value;
  }

  std::vector<double> vec_required(const std::string& key) {
    const std::string text = str_required(key);
    std::vector<double> values;
    for (const std::string& part : split(text, ',')) {
      values.push_back(parse_double_value(key, trim(part)));
    }
    if (values.empty()) throw ConfigError("key '" + key + "': empty vector");
    return values;
  }

  std::vector<std::string> strings_required(const std::string& key) {
    const std::string text = str_required(key);
    std::vector<std::string> values;
    for (const std::string& part : split(text, ',')) {
      const std::string token = trim(part);
      if (!token.empty()) values.push_back(token);
    }
    if (values.empty()) throw ConfigError("key '" + key + "': empty list");
    return values;
  }

  void ensure_consumed() const {
    std::vector<std::string> unknown;
    for (const auto& [key, value] : raw_) {
      if (consumed_.count(key) == 0) unknown.push_back(key);
    }
    if (!unknown.empty()) {
      std::string joined;
      for (const std::string& key : unknown) {
        if (!joined.empty()) joined += ", ";
        joined += "'" + key + "'";
      }
      throw ConfigError("unknown config key(s): " + joined);
    }
  }

  const ConfigMap& echo() const { return echo_; }

 private:
  void note(const std::string& key, const std::string& value) {
    consumed_.insert(key);
    echo_[key] = value;
  }

  const ConfigMap& raw_;
  std::set<std::string> consumed_;
  ConfigMap echo_;
};

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

Eigen::VectorXd vec_of_dim(Resolver& resolver, const std::string& key, int dimension) {
  const std::vector<double> values = resolver.vec_required(key);
  if (static_cast<int>(values.size()) != dimension) {
    throw ConfigError("key '" + key + "': expected " + std::to_string(dimension) +
                      " values, got " + std::to_string(values.size()));
  }
  return to_vector(values);
}

std::vector<MvndComponent> read_mixture_components(Resolver& resolver, const std::string& prefix,
                                                   int dimension) {
  std::vector<MvndComponent> components;
  for (int index = 0;; ++index) {
    const std::string mean_key = prefix + "." + std::to_string(index) + ".mean";
    const std::string std_key = prefix + "." + std::to_string(index) + ".std";
    if (!resolver.has(mean_key) && !resolver.has(std_key)) break;
    MvndComponent component;
    component.mean = vec_of_dim(resolver, mean_key, dimension);
    component.stddev = vec_of_dim(resolver, std_key, dimension);
    components.push_back(std::move(component));
  }
  return components;
}

std::vector<RbfCentroid> read_rbf_centroids(Resolver& resolver, const std::string& prefix,
                                            int dimension) {
  std::vector<RbfCentroid> centroids;
  for (int index = 0;; ++index) {
    const std::string base = prefix + "." + std::to_string(index);
    if (!resolver.has(base + ".center") && !resolver.has(base + ".radius")) break;
    RbfCentroid centroid;
    centroid.center = vec_of_dim(resolver, base + ".center", dimension);
    centroid.radius = resolver.dbl_required(base + ".radius");
    centroid.weight = resolver.dbl(base + ".weight", 1.0);
    centroids.push_back(std::move(centroid));
  }
  return centroids;
}

void write_lines(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StateError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw StateError("write to '" + path + "' failed");
}

std::string run_name(const std::string& dir) {
  std::string trimmed = dir;
  while (trimmed.size() > 1 && trimmed.back() == '/') trimmed.pop_back();
  const std::string name = std::filesystem::path(trimmed).filename().string();
  return name.empty() ? trimmed : name;
}

ConfigMap read_manifest(const std::string& dir) {
  const std::string path = dir + "/manifest.txt";
  if (!std::filesystem::exists(path)) {
    throw ConfigError("'" + path + "' not found; is '" + dir + "' a finished run directory?");
  }
  return parse_config_file(path);
}

std::string manifest_value(const ConfigMap& manifest, const std::string& dir,
                           const std::string& key) {
  auto it = manifest.find(key);
  if (it == manifest.end()) {
    throw ConfigError("manifest in '" + dir + "' is missing key '" + key + "'");
  }
  return it->second;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text, const std::string& source_name) {
  ConfigMap config;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source_name + ":" + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(source_name + ":" + std::to_string(line_number) + ": empty key");
    }
    config[key] = value;
  }
  return config;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void apply_overrides(ConfigMap& config, const std::vector<std::string>& overrides) {
  for (const std::string& entry : overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + entry + "' is not of the form key=value");
    }
    config[trim(entry.substr(0, eq))] = trim(entry.substr(eq + 1));
  }
}

ExperimentConfig resolve_config(const ConfigMap& raw) {
  Resolver resolver(raw);
  ExperimentConfig config;

  config.stream_kind = resolver.str_required("stream");
  if (config.stream_kind != "mixture" && config.stream_kind != "rbf" &&
      config.stream_kind != "csv") {
    throw ConfigError("key 'stream': expected mixture, rbf, or csv");
  }

  const std::string framework_text = resolver.str("framework", "single");
  config.framework = framework_from_name(framework_text);
  const std::string classifier_text = resolver.str("classifier", "sa");
  config.framework_config.classifier = classifier_from_name(classifier_text);

  int contexts = resolver.int_("contexts", 1);
  if (contexts < 1) throw ConfigError("key 'contexts': must be positive");

  if (config.stream_kind == "csv") {
    config.csv_path = resolver.str_required("csv.path");
    config.csv_schema.feature_columns = resolver.strings_required("csv.features");
    config.csv_schema.class_column = resolver.str_required("csv.class_column");
    if (resolver.has("csv.context_column")) {
      config.csv_schema.context_column = resolver.str_required("csv.context_column");
    }
    config.csv_schema.majority_labels = resolver.strings_required("csv.majority_labels");
    config.csv_schema.minority_labels = resolver.strings_required("csv.minority_labels");
    const bool has_min = resolver.has("csv.normalize_min");
    const bool has_max = resolver.has("csv.normalize_max");
    if (has_min != has_max) {
      throw ConfigError("csv.normalize_min and csv.normalize_max must be given together");
    }
    if (has_min) {
      CsvNormalization norm;
      norm.minimum = to_vector(resolver.vec_required("csv.normalize_min"));
      norm.maximum = to_vector(resolver.vec_required("csv.normalize_max"));
      if (norm.minimum.size() != norm.maximum.size() ||
          norm.minimum.size() != static_cast<Eigen::Index>(
                                     config.csv_schema.feature_columns.size())) {
        throw ConfigError("csv normalization vectors must match the feature column count");
      }
      config.csv_normalization = std::move(norm);
    }
    config.descriptor.dimension = static_cast<int>(config.csv_schema.feature_columns.size());
  } else {
    config.descriptor.dimension = resolver.int_("dimension", 0);
    std::vector<double> probabilities;
    if (resolver.has("context_probs")) {
      probabilities = resolver.vec_required("context_probs");
      if (static_cast<int>(probabilities.size()) != contexts) {
        throw ConfigError("key 'context_probs': expected " + std::to_string(contexts) +
                          " probabilities");
      }
    } else {
      probabilities.assign(contexts, 1.0 / contexts);
    }
    config.descriptor.context_probabilities = probabilities;
    config.descriptor.minority_fraction = resolver.dbl("minority_fraction", 0.01);
    config.descriptor.seed = static_cast<std::uint64_t>(resolver.i64("stream_seed", 1));
    config.descriptor.validate();

    if (config.stream_kind == "mixture") {
      for (int c = 0; c < contexts; ++c) {
        auto components = read_mixture_components(resolver, "majority." + std::to_string(c),
                                                  config.descriptor.dimension);
        if (components.empty()) {
          throw ConfigError("context " + std::to_string(c) +
                            " has no components (majority." + std::to_string(c) + ".0.mean ...)");
        }
        config.mixture_majority.push_back(std::move(components));
      }
      config.mixture_minority =
          read_mixture_components(resolver, "minority", config.descriptor.dimension);
      if (config.mixture_minority.empty() && config.descriptor.minority_fraction > 0.0) {
        throw ConfigError("minority_fraction > 0 but no minority components given");
      }
    } else {
      for (int c = 0; c < contexts; ++c) {
        auto centroids = read_rbf_centroids(resolver, "rbf.majority." + std::to_string(c),
                                            config.descriptor.dimension);
        if (centroids.empty()) {
          throw ConfigError("context " + std::to_string(c) + " has no centroids (rbf.majority." +
                            std::to_string(c) + ".0.center ...)");
        }
        config.rbf_majority.push_back(std::move(centroids));
      }
      config.rbf_minority =
          read_rbf_centroids(resolver, "rbf.minority", config.descriptor.dimension);
      if (config.rbf_minority.empty() && config.descriptor.minority_fraction > 0.0) {
        throw ConfigError("minority_fraction > 0 but no minority centroids given");
      }
      config.rbf_noise_fraction = resolver.dbl("rbf.noise_fraction", 0.1);
      if (config.rbf_noise_fraction < 0.0 || config.rbf_noise_fraction > 1.0) {
        throw ConfigError("key 'rbf.noise_fraction': must lie in [0, 1]");
      }
    }
  }

  config.stream_length = resolver.i64("stream_length", 100000);
  if (config.stream_length < 1) throw ConfigError("key 'stream_length': must be positive");

  FrameworkConfig& fc = config.framework_config;
  fc.context_count = contexts;
  fc.min_points = resolver.i64("min_points", 1000);
  fc.initial_points = resolver.i64("initial_points", 2000 * static_cast<std::int64_t>(contexts));
  fc.tau = resolver.has("tau") ? resolver.dbl("tau", 0.0)
                               : std::numeric_limits<double>::quiet_NaN();
  fc.recluster_period = resolver.i64("recluster_period", 2000);
  fc.movement_threshold = resolver.dbl("movement_threshold", 0.2);
  fc.inclusion_threshold = resolver.dbl("inclusion_threshold", 1.0);
  fc.k_min = resolver.int_("k_min", 2);
  fc.k_max = resolver.int_("k_max", 8);
  fc.cd_samples = static_cast<std::size_t>(resolver.i64("cd_samples", 100000));
  fc.smote_neighbours = resolver.int_("smote_neighbours", 5);
  fc.seed = static_cast<std::uint64_t>(resolver.i64("seed", 1));

  ClassifierParams& params = fc.params;
  params.sa_learning_rate = resolver.dbl("sa_learning_rate", params.sa_learning_rate);
  params.sa_epochs = resolver.int_("sa_epochs", params.sa_epochs);
  params.hst_trees = resolver.int_("hst_trees", params.hst_trees);
  params.hst_depth = resolver.int_("hst_depth", params.hst_depth);
  params.hst_window = resolver.i64("hst_window", params.hst_window);
  params.hst_size_limit = resolver.dbl("hst_size_limit", params.hst_size_limit);
  params.nnd_capacity = static_cast<std::size_t>(
      resolver.i64("nnd_capacity", static_cast<std::int64_t>(params.nnd_capacity)));
  params.nnd_threshold = resolver.dbl("nnd_threshold", params.nnd_threshold);

  fc.validate(config.framework == FrameworkChoice::kOCComplete ||
              config.framework == FrameworkChoice::kOCFuzzy);

  config.fold_count = resolver.int_("fold_count", 10);
  if (config.fold_count < 1) throw ConfigError("key 'fold_count': must be positive");
  config.metric_period = resolver.i64("metric_period", 500);
  if (config.metric_period < 1) throw ConfigError("key 'metric_period': must be positive");
  const std::int64_t capacity = resolver.i64("window_capacity", 500);
  if (capacity < 1) throw ConfigError("key 'window_capacity': must be positive");
  config.window_capacity = static_cast<std::size_t>(capacity);
  config.parallel = resolver.bln("parallel", true);

  resolver.ensure_consumed();
  config.manifest_echo = resolver.echo();
  return config;
}

std::unique_ptr<InstanceStream> build_stream(const ExperimentConfig& config) {
  if (config.stream_kind == "mixture") {
    return std::make_unique<MixtureModelStream>(config.descriptor, config.mixture_majority,
                                                config.mixture_minority);
  }
  if (config.stream_kind == "rbf") {
    return std::make_unique<RbfStream>(config.descriptor, config.rbf_majority,
                                       config.rbf_minority, config.rbf_noise_fraction);
  }
  return std::make_unique<CsvStream>(config.csv_path, config.csv_schema,
                                     config.csv_normalization);
}

std::string format_metric(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

void run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::unique_ptr<InstanceStream> stream = build_stream(config);
  auto [initial_window, online_segment] =
      materialize_stream(*stream, config.framework_config.initial_points, config.stream_length);

  CrossValidationPlan plan;
  plan.framework = config.framework;
  plan.config = config.framework_config;
  plan.fold_count = config.fold_count;
  plan.metric_period = config.metric_period;
  plan.window_capacity = config.window_capacity;
  plan.parallel = config.parallel;
  const CrossValidationResult result = run_cross_validation(plan, initial_window, online_segment);

  const std::string framework_text = framework_name(config.framework);
  const std::string classifier_text = classifier_name(config.framework_config.classifier);

  {
    std::ostringstream manifest;
    manifest << "# schema: " << kManifestSchema << "\n";
    for (const auto& [key, value] : config.manifest_echo) {
      manifest << key << " = " << value << "\n";
    }
    write_lines(out_dir + "/manifest.txt", manifest.str());
  }

  {
    std::ostringstream metrics;
    metrics << "# schema: " << kMetricsSchema << "\n";
    metrics << "instance_index,fold,framework,classifier,prequential_auc,g_mean,sensitivity,"
               "specificity\n";
    for (const MetricRow& row : result.merged) {
      metrics << row.instance_index << ',' << row.fold << ',' << framework_text << ','
              << classifier_text << ',' << format_metric(row.prequential_auc) << ','
              << format_metric(row.g_mean) << ',' << format_metric(row.sensitivity) << ','
              << format_metric(row.specificity) << '\n';
    }
    write_lines(out_dir + "/metrics.csv", metrics.str());
  }

  {
    std::ostringstream report;
    report << "# schema: " << kThresholdSchema << "\n";
    report << "framework,classifier,fold,tau_used,informedness_tau\n";
    for (const FoldSeries& series : result.folds) {
      report << framework_text << ',' << classifier_text << ',' << series.fold << ','
             << format_metric(series.tau_used) << ',' << format_metric(series.informedness_tau)
             << '\n';
    }
    write_lines(out_dir + "/threshold_report.csv", report.str());
  }

  if (config.framework == FrameworkChoice::kOCCluster) {
    std::ostringstream clusters;
    clusters << "# schema: " << kClustersSchema << "\n";
    clusters << "instance_index,fold,cluster_id,weight,radius,center\n";
    for (const FoldSeries& series : result.folds) {
      for (const OCCluster::Snapshot& snapshot : series.cluster_snapshots) {
        for (const MacroCluster& cluster : snapshot.clustering.clusters) {
          clusters << snapshot.instance_index << ',' << series.fold << ',' << cluster.id << ','
                   << format_metric(cluster.weight) << ',' << format_metric(cluster.radius) << ',';
          for (Eigen::Index i = 0; i < cluster.center.size(); ++i) {
            if (i > 0) clusters << ';';
            clusters << format_metric(cluster.center[i]);
          }
          clusters << '\n';
        }
      }
    }
    write_lines(out_dir + "/clusters.csv", clusters.str());
  }
}

ComparisonReport compare_runs(const std::string& dir_a, const std::string& dir_b,
                              const std::string& metric, double rope_half_width) {
  if (metric != "auc" && metric != "gmean") {
    throw ConfigError("metric must be 'auc' or 'gmean', got '" + metric + "'");
  }
  const ConfigMap manifest_a = read_manifest(dir_a);
  const ConfigMap manifest_b = read_manifest(dir_b);
  for (const char* key : {"stream_seed", "fold_count", "stream", "stream_length"}) {
    // CSV runs have no stream_seed key; both manifests must then omit it alike.
    const bool in_a = manifest_a.count(key) > 0;
    const bool in_b = manifest_b.count(key) > 0;
    if (in_a != in_b ||
        (in_a && manifest_value(manifest_a, dir_a, key) != manifest_value(manifest_b, dir_b, key))) {
      throw ConfigError(std::string("runs disagree on '") + key +
                        "'; comparison requires a shared stream and fold structure");
    }
  }
  const int fold_count =
      static_cast<int>(parse_int_value("fold_count", manifest_value(manifest_a, dir_a,
                                                                    "fold_count")));

  auto fold_means = [&](const std::string& dir) {
    const std::string path = dir + "/metrics.csv";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::vector<double> sums(fold_count, 0.0);
    std::vector<std::int64_t> counts(fold_count, 0);
    std::string line;
    bool header_seen = false;
    int column = -1;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const std::vector<std::string> cells = split(line, ',');
      if (!header_seen) {
        header_seen = true;
        const std::string wanted = metric == "auc" ? "prequential_auc" : "g_mean";
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i] == wanted) column = static_cast<int>(i);
        }
        if (column < 0) throw ConfigError("'" + path + "' lacks a '" + wanted + "' column");
        continue;
      }
      if (static_cast<int>(cells.size()) <= column) {
        throw ConfigError("'" + path + "' has a short row");
      }
      const int fold = static_cast<int>(parse_int_value("fold", cells.at(1)));
      if (fold < 0 || fold >= fold_count) {
        throw ConfigError("'" + path + "' row names fold " + std::to_string(fold) +
                          " outside the manifest's fold_count");
      }
      const double value = parse_double_value("metric", cells.at(column));
      if (std::isnan(value)) continue;
      sums[fold] += value;
      ++counts[fold];
    }
    std::vector<double> means(fold_count);
    for (int fold = 0; fold < fold_count; ++fold) {
      if (counts[fold] == 0) {
        throw StateError("fold " + std::to_string(fold) + " of '" + dir +
                         "' has no finite metric rows");
      }
      means[fold] = sums[fold] / static_cast<double>(counts[fold]);
    }
    return means;
  };

  const std::vector<double> means_a = fold_means(dir_a);
  const std::vector<double> means_b = fold_means(dir_b);

  ComparisonReport report;
  report.differences.resize(fold_count);
  for (int fold = 0; fold < fold_count; ++fold) {
    report.differences[fold] = means_b[fold] - means_a[fold];
  }
  report.comparison = run_name(dir_b) + " - " + run_name(dir_a) + " (" + metric + ")";
  report.posterior = correlated_bayesian_t_test(report.differences, 1.0 / fold_count,
                                                rope_half_width);
  return report;
}

void write_comparison_csv(const std::string& path, const ComparisonReport& report) {
  std::ostringstream out;
  out << "# schema: " << kComparisonSchema << "\n";
  out << "comparison,p_left,p_rope,p_right\n";
  out << report.comparison << ',' << format_metric(report.posterior.p_left) << ','
      << format_metric(report.posterior.p_rope) << ',' << format_metric(report.posterior.p_right)
      << '\n';
  write_lines(path, out.str());
}

}  // namespace occstream
