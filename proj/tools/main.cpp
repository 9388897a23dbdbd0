#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "occstream/cluster_distance.hpp"
#include "occstream/common.hpp"
#include "occstream/experiment.hpp"
#include "occstream/window_size.hpp"

namespace {

Eigen::VectorXd parse_point(const std::vector<double>& values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

int run_command(const std::string& config_path, std::optional<std::int64_t> seed,
                const std::string& out_dir, const std::vector<std::string>& overrides) {
  occstream::ConfigMap raw = occstream::parse_config_file(config_path);
  if (seed) {
    raw["seed"] = std::to_string(*seed);
    raw["stream_seed"] = std::to_string(*seed);
  }
  occstream::apply_overrides(raw, overrides);
  const occstream::ExperimentConfig config = occstream::resolve_config(raw);
  occstream::run_experiment(config, out_dir);
  std::cout << "run written to " << out_dir << "\n";
  return 0;
}

int compare_command(const std::string& dir_a, const std::string& dir_b, const std::string& metric,
                    double rope, const std::string& out_path) {
  const occstream::ComparisonReport report =
      occstream::compare_runs(dir_a, dir_b, metric, rope);
  if (!out_path.empty()) occstream::write_comparison_csv(out_path, report);
  std::cout << report.comparison << "\n"
            << "p_left=" << occstream::format_metric(report.posterior.p_left)
            << " p_rope=" << occstream::format_metric(report.posterior.p_rope)
            << " p_right=" << occstream::format_metric(report.posterior.p_right) << "\n";
  return 0;
}

int window_size_command(const std::vector<double>& probs, std::int64_t count, double confidence) {
  occstream::WindowSizeQuery query;
  query.context_probabilities = probs;
  query.required_count = count;
  query.confidence = confidence;
  const occstream::WindowSizeResult result = occstream::min_window_size(query);
  std::cout << "window_size=" << result.window_size
            << " approximation_valid=" << (result.approximation_valid ? "true" : "false") << "\n";
  return 0;
}

int cluster_distance_command(const std::vector<double>& a_center, double a_radius,
                             const std::vector<double>& b_center, double b_radius,
                             std::size_t samples, std::uint64_t seed) {
  occstream::MacroCluster a;
  a.id = 0;
  a.center = parse_point(a_center);
  a.radius = a_radius;
  occstream::MacroCluster b;
  b.id = 1;
  b.center = parse_point(b_center);
  b.radius = b_radius;
  const occstream::ClusterDistanceResult result =
      occstream::cluster_distance(a, b, samples, seed);
  std::cout << "raw=" << occstream::format_metric(result.raw)
            << " normalized=" << occstream::format_metric(result.normalized) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming one-class classification with context-aware frameworks"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a configured experiment");
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::string out_dir = "run_out";
  std::vector<std::string> overrides;
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_option("--seed", seed, "Override both 'seed' and 'stream_seed'");
  run->add_option("--out", out_dir, "Output directory");
  run->allow_extras();  // any other --key=value becomes a config override

  // compare
  auto* compare = app.add_subcommand("compare", "Compare two finished runs");
  std::string dir_a, dir_b, metric = "auc", compare_out;
  double rope = 0.01;
  compare->add_option("run_a", dir_a, "Baseline run directory")->required();
  compare->add_option("run_b", dir_b, "Candidate run directory")->required();
  compare->add_option("--metric", metric, "auc or gmean");
  compare->add_option("--rope", rope, "Half-width of the practical-equivalence region");
  compare->add_option("--out", compare_out, "Write the report CSV here");

  // window-size
  auto* window = app.add_subcommand("window-size",
                                    "Minimal window size guaranteeing rare-context coverage");
  std::vector<double> probs;
  std::int64_t required_count = 10;
  double confidence = 0.95;
  window->add_option("--probs", probs, "Context probabilities")->required()->expected(1, -1);
  window->add_option("--count", required_count, "Required instances of the rarest context");
  window->add_option("--confidence", confidence, "Coverage confidence in (0, 1)");

  // cluster-distance
  auto* cd = app.add_subcommand("cluster-distance", "Distance between two ball clusters");
  std::vector<double> a_center, b_center;
  double a_radius = 1.0, b_radius = 1.0;
  std::size_t samples = 100000;
  std::uint64_t cd_seed = 1;
  cd->add_option("--a-center", a_center, "Center of the first ball")->required()->expected(1, -1);
  cd->add_option("--a-radius", a_radius, "Radius of the first ball")->required();
  cd->add_option("--b-center", b_center, "Center of the second ball")->required()->expected(1, -1);
  cd->add_option("--b-radius", b_radius, "Radius of the second ball")->required();
  cd->add_option("--samples", samples, "Monte-Carlo samples (dimension >= 2)");
  cd->add_option("--seed", cd_seed, "Monte-Carlo seed");

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      for (std::string extra : run->remaining()) {
        if (extra.rfind("--", 0) != 0 || extra.find('=') == std::string::npos) {
          throw occstream::ConfigError("unrecognized argument '" + extra +
                                       "' (overrides look like --key=value)");
        }
        overrides.push_back(extra.substr(2));
      }
      return run_command(config_path, seed, out_dir, overrides);
    }
    if (compare->parsed()) return compare_command(dir_a, dir_b, metric, rope, compare_out);
    if (window->parsed()) return window_size_command(probs, required_count, confidence);
    if (cd->parsed()) {
      return cluster_distance_command(a_center, a_radius, b_center, b_radius, samples, cd_seed);
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const occstream::InitializationError& e) {
    std::cerr << "initialization error: " << e.what() << "\n";
    return 3;
  } catch (const occstream::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const occstream::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const occstream::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const occstream::ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
