// Acceptance gate: nine end-to-end properties of the engine, each printed as
// one PASS/FAIL line. The process exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "occstream/autoencoder.hpp"
#include "occstream/classifier.hpp"
#include "occstream/cluster_distance.hpp"
#include "occstream/clustering.hpp"
#include "occstream/common.hpp"
#include "occstream/evaluation.hpp"
#include "occstream/experiment.hpp"
#include "occstream/frameworks.hpp"
#include "occstream/half_space_trees.hpp"
#include "occstream/instance.hpp"
#include "occstream/smote.hpp"
#include "occstream/window_size.hpp"

namespace fs = std::filesystem;
using namespace occstream;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double>(elapsed).count();
}

std::string fmt(double value, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << value;
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StateError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---------------------------------------------------------------------------
// 1. The cluster distance is a metric: non-negativity, identity, symmetry,
//    and the triangle inequality over seeded random ball pairs/triples.
// ---------------------------------------------------------------------------
Outcome criterion_cluster_distance_metric() {
  constexpr int kTrials = 1000;
  constexpr std::size_t kSamples = 40000;
  int violations = 0;
  std::string first_violation;

  Rng rng(20240901);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int dim = 1 + trial % 3;
    auto random_ball = [&](int id) {
      MacroCluster ball;
      ball.id = id;
      ball.center = Eigen::VectorXd::Zero(dim);
      for (int d = 0; d < dim; ++d) ball.center[d] = rng.uniform(-5.0, 5.0);
      ball.radius = rng.uniform(0.05, 3.0);
      return ball;
    };
    const MacroCluster a = random_ball(0);
    const MacroCluster b = random_ball(1);
    const MacroCluster c = random_ball(2);
    const std::uint64_t seed = mix_seed(77, static_cast<std::uint64_t>(trial));

    const ClusterDistanceResult ab = cluster_distance(a, b, kSamples, seed);
    const ClusterDistanceResult ba = cluster_distance(b, a, kSamples, seed);
    const ClusterDistanceResult bc = cluster_distance(b, c, kSamples, seed);
    const ClusterDistanceResult ac = cluster_distance(a, c, kSamples, seed);
    const ClusterDistanceResult aa = cluster_distance(a, a, kSamples, seed);

    // MC noise allowance for >= 2 dimensions; 1-D is analytic and exact.
    const double raw_slack = dim == 1 ? 1e-9 : 0.02 * (ab.raw + bc.raw) + 1e-9;
    const double norm_slack = dim == 1 ? 1e-9 : 0.02;

    auto flag = [&](const std::string& what) {
      ++violations;
      if (first_violation.empty()) {
        first_violation = what + " (trial " + std::to_string(trial) + ", dim " +
                          std::to_string(dim) + ")";
      }
    };

    if (ab.raw < 0.0 || ab.normalized < 0.0 || ab.normalized > 1.0 + 1e-12) {
      flag("range");
    }
    if (aa.raw != 0.0 || aa.normalized != 0.0) flag("identity");
    if (ab.raw != ba.raw || ab.normalized != ba.normalized) flag("symmetry");
    if (ac.raw > ab.raw + bc.raw + raw_slack) flag("raw triangle");
    if (ac.normalized > ab.normalized + bc.normalized + norm_slack) {
      flag("normalized triangle");
    }
  }

  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(kTrials) + " triples, " + std::to_string(violations) +
               " violations" + (violations ? ": " + first_violation : "");
  return out;
}

// ---------------------------------------------------------------------------
// 2. Window sizing: Monte-Carlo coverage of the returned window size meets
//    the requested confidence, and the size is minimal for the bound.
// ---------------------------------------------------------------------------
Outcome criterion_window_sizing() {
  const std::vector<std::pair<double, std::int64_t>> combos = {
      {0.5, 1},  {0.5, 10}, {0.5, 30},  {0.4, 5},   {0.4, 20},
      {0.3, 5},  {0.3, 10}, {0.3, 50},  {0.25, 10}, {0.25, 20},
      {0.2, 5},  {0.2, 10}, {0.2, 50},  {0.15, 10}, {0.15, 20},
      {0.1, 10}, {0.1, 20}, {0.1, 50},  {0.07, 10}, {0.07, 30},
  };
  const double confidences[3] = {0.9, 0.95, 0.99};
  constexpr int kTrialsPerCombo = 10000;

  int failures = 0;
  std::string first_failure;
  Rng rng(555);
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const auto [p, required] = combos[i];
    const double confidence = confidences[i % 3];

    WindowSizeQuery query;
    query.context_probabilities = {p, 1.0 - p};
    query.required_count = required;
    query.confidence = confidence;
    const WindowSizeResult result = min_window_size(query);
    const std::int64_t n = result.window_size;

    auto fail = [&](const std::string& what) {
      ++failures;
      if (first_failure.empty()) {
        first_failure = what + " at p=" + fmt(p) + " tau=" + std::to_string(required) +
                        " conf=" + fmt(confidence) + " n=" + std::to_string(n);
      }
    };

    // Minimality: the bound must fail at n - 1.
    const double x = normal_quantile_two_sided(confidence);
    const double m = static_cast<double>(n - 1);
    const double lower_at = m * p - x * std::sqrt(m * p * (1.0 - p));
    if (lower_at >= static_cast<double>(required)) fail("n-1 also satisfies the bound");

    // Coverage: windows of size n contain >= required rare instances with the
    // requested confidence (allowing 3 standard errors of MC noise).
    int covered = 0;
    for (int trial = 0; trial < kTrialsPerCombo; ++trial) {
      std::int64_t count = 0;
      for (std::int64_t j = 0; j < n; ++j) {
        if (rng.uniform() < p) ++count;
      }
      if (count >= required) ++covered;
    }
    const double coverage = static_cast<double>(covered) / kTrialsPerCombo;
    const double se = std::sqrt(confidence * (1.0 - confidence) / kTrialsPerCombo);
    if (coverage < confidence - 3.0 * se) {
      fail("coverage " + fmt(coverage) + " < " + fmt(confidence - 3.0 * se));
    }
  }

  Outcome out;
  out.pass = failures == 0;
  out.detail = std::to_string(combos.size()) + " combos x " +
               std::to_string(kTrialsPerCombo) + " trials, " + std::to_string(failures) +
               " failures" + (failures ? ": " + first_failure : "");
  return out;
}

// ---------------------------------------------------------------------------
// 3. Sliding-window AUC equals brute-force pair counting; random scorers sit
//    at 1/2 and a perfect scorer at exactly 1.
// ---------------------------------------------------------------------------
Outcome criterion_auc_oracle() {
  Rng rng(90210);
  int mismatches = 0;

  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t size = 2 + rng.index(199);
    EvaluationWindow window(size);
    std::size_t minority = 1 + rng.index(size - 1);  // both classes present
    std::vector<std::pair<double, bool>> pairs;
    for (std::size_t i = 0; i < size; ++i) {
      // Scores quantized to eighths so ties are frequent and sums exact.
      const double score = static_cast<double>(rng.index(17)) / 8.0;
      const bool is_minority = i < minority;
      pairs.emplace_back(score, is_minority);
    }
    // Shuffle arrival order.
    for (std::size_t i = pairs.size(); i > 1; --i) {
      std::swap(pairs[i - 1], pairs[rng.index(i)]);
    }
    for (const auto& [score, truth] : pairs) window.push(score, truth);

    double u = 0.0;
    std::int64_t positives = 0, negatives = 0;
    for (const auto& [si, ti] : pairs) {
      if (!ti) continue;
      ++positives;
      for (const auto& [sj, tj] : pairs) {
        if (tj) continue;
        if (si > sj) u += 1.0;
        else if (si == sj) u += 0.5;
      }
    }
    negatives = static_cast<std::int64_t>(pairs.size()) - positives;
    const double oracle = u / (static_cast<double>(positives) * static_cast<double>(negatives));
    if (prequential_auc(window) != oracle) ++mismatches;
  }

  // Random scorer over a 10 000-instance run.
  EvaluationWindow random_window(10000);
  for (int i = 0; i < 10000; ++i) {
    random_window.push(rng.uniform(), rng.uniform() < 0.3);
  }
  const double random_auc = prequential_auc(random_window);
  const bool random_ok = std::abs(random_auc - 0.5) <= 0.05;

  // Perfect scorer: every minority strictly above every majority.
  EvaluationWindow perfect_window(10000);
  for (int i = 0; i < 10000; ++i) {
    const bool truth = rng.uniform() < 0.3;
    perfect_window.push(truth ? 1.0 : 0.0, truth);
  }
  const bool perfect_ok = prequential_auc(perfect_window) == 1.0;

  Outcome out;
  out.pass = mismatches == 0 && random_ok && perfect_ok;
  out.detail = "500 windows, " + std::to_string(mismatches) +
               " oracle mismatches; random AUC " + fmt(random_auc) + "; perfect AUC " +
               fmt(prequential_auc(perfect_window));
  return out;
}

// ---------------------------------------------------------------------------
// 4. Autoencoder backprop gradients match central finite differences.
// ---------------------------------------------------------------------------
Outcome criterion_autoencoder_gradients() {
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  Rng rng(424242);

  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + static_cast<int>(rng.index(5));
    StreamingAutoencoder net(dim, 0.5, mix_seed(3000, static_cast<std::uint64_t>(trial)));
    Eigen::VectorXd x(dim);
    for (int d = 0; d < dim; ++d) x[d] = rng.uniform();

    const StreamingAutoencoder::Gradients analytic = net.gradients(x);
    const Eigen::MatrixXd w1 = net.encoder_weights();
    const Eigen::VectorXd b1 = net.encoder_bias();
    const Eigen::MatrixXd w2 = net.decoder_weights();
    const Eigen::VectorXd b2 = net.decoder_bias();

    auto probe = [&](auto mutate) {
      Eigen::MatrixXd pw1 = w1;
      Eigen::VectorXd pb1 = b1;
      Eigen::MatrixXd pw2 = w2;
      Eigen::VectorXd pb2 = b2;
      mutate(pw1, pb1, pw2, pb2);
      net.load(pw1, pb1, pw2, pb2);
      return net.score(x);
    };
    auto central = [&](auto mutate_by) {
      const double up = probe([&](auto& a, auto& b, auto& c, auto& d) {
        mutate_by(a, b, c, d, kStep);
      });
      const double down = probe([&](auto& a, auto& b, auto& c, auto& d) {
        mutate_by(a, b, c, d, -kStep);
      });
      return (up - down) / (2.0 * kStep);
    };
    auto track = [&](double a, double fd) {
      const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-8});
      worst = std::max(worst, rel);
    };

    for (Eigen::Index r = 0; r < w1.rows(); ++r) {
      for (Eigen::Index col = 0; col < w1.cols(); ++col) {
        track(analytic.w1(r, col), central([&](auto& a, auto&, auto&, auto&, double h) {
                a(r, col) += h;
              }));
      }
    }
    for (Eigen::Index r = 0; r < b1.size(); ++r) {
      track(analytic.b1[r], central([&](auto&, auto& b, auto&, auto&, double h) {
              b[r] += h;
            }));
    }
    for (Eigen::Index r = 0; r < w2.rows(); ++r) {
      for (Eigen::Index col = 0; col < w2.cols(); ++col) {
        track(analytic.w2(r, col), central([&](auto&, auto&, auto& c, auto&, double h) {
                c(r, col) += h;
              }));
      }
    }
    for (Eigen::Index r = 0; r < b2.size(); ++r) {
      track(analytic.b2[r], central([&](auto&, auto&, auto&, auto& d, double h) {
              d[r] += h;
            }));
    }
    net.load(w1, b1, w2, b2);
  }

  Outcome out;
  out.pass = worst < 1e-4;
  out.detail = "100 network/input pairs, worst relative error " + fmt(worst, 3);
  return out;
}

// ---------------------------------------------------------------------------
// 5. Half-space trees: post-roll leaf masses conserve the update count, and
//    the node score matches the hand-computed value (3 updates, depth 2 -> 12).
// ---------------------------------------------------------------------------
Outcome criterion_hst_mass() {
  Outcome out;
  out.pass = true;
  std::ostringstream detail;

  {
    // Hand case: one tree of depth 2 over [0,1], three identical updates, one
    // roll. The probe shares the full path, terminal mass 3 at level 2 -> 12.
    HalfSpaceForest forest(1, 1, 2, 30, 0.1, 99, {{0.0, 1.0}});
    Eigen::VectorXd x(1);
    x[0] = 0.2;
    for (int i = 0; i < 3; ++i) forest.update(x);
    forest.roll_window();
    const double same_path = forest.raw_mass(x);
    Eigen::VectorXd far(1);
    // The other side of every split on x's path has zero reference mass.
    far[0] = x[0] < forest.tree(0).split_value[0] ? 0.9 : 0.1;
    const double off_path = forest.raw_mass(far);
    if (same_path != 12.0 || off_path != 0.0) {
      out.pass = false;
      detail << "hand case: same-path " << same_path << " (want 12), off-path " << off_path
             << " (want 0); ";
    }
  }

  {
    // Conservation: leaves of each tree sum to the number of updates.
    const int depth = 5;
    HalfSpaceForest forest(3, 4, depth, 1000, 0.1, 7,
                           {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}});
    Rng rng(31);
    for (int i = 0; i < 64; ++i) {
      Eigen::VectorXd x(3);
      for (int d = 0; d < 3; ++d) x[d] = rng.uniform();
      forest.update(x);
    }
    forest.roll_window();
    const std::size_t first_leaf = (1u << depth) - 1;
    const std::size_t node_count = (1u << (depth + 1)) - 1;
    for (int t = 0; t < forest.tree_count(); ++t) {
      const HalfSpaceForest::Tree& tree = forest.tree(t);
      std::int64_t leaf_sum = 0;
      for (std::size_t node = first_leaf; node < node_count; ++node) {
        leaf_sum += tree.mass_ref[node];
      }
      std::int64_t latest_sum = 0;
      for (std::size_t node = 0; node < node_count; ++node) {
        latest_sum += tree.mass_latest[node];
      }
      if (leaf_sum != 64 || tree.mass_ref[0] != 64 || latest_sum != 0) {
        out.pass = false;
        detail << "tree " << t << ": leaf sum " << leaf_sum << ", root " << tree.mass_ref[0]
               << ", latest " << latest_sum << " (want 64/64/0); ";
      }
    }
  }

  out.detail = out.pass ? "hand value 12 and 4-tree conservation of 64 updates"
                        : detail.str();
  return out;
}

// ---------------------------------------------------------------------------
// 6. Oversampling geometry: synthetics lie on a segment between buffer
//    members, inside the buffer's bounding box, with exact deficit counts.
// ---------------------------------------------------------------------------
Outcome criterion_smote_geometry() {
  constexpr int kPool = 60;
  constexpr std::size_t kWanted = 10000;
  Rng rng(2718);

  OversampleRequest request;
  request.neighbour_count = 5;
  request.target_count = kPool + kWanted;
  request.seed = 1234;
  for (int i = 0; i < kPool; ++i) {
    Instance inst;
    inst.features = Eigen::VectorXd::Zero(3);
    for (int d = 0; d < 3; ++d) inst.features[d] = rng.uniform(-2.0, 2.0);
    inst.context = 4;
    inst.label = Label::kMajority;
    request.buffer.push_back(std::move(inst));
  }

  Eigen::VectorXd lo = request.buffer[0].features;
  Eigen::VectorXd hi = request.buffer[0].features;
  for (const Instance& inst : request.buffer) {
    lo = lo.cwiseMin(inst.features);
    hi = hi.cwiseMax(inst.features);
  }

  const std::vector<Instance> synthetics = smote_generate(request);
  if (synthetics.size() != kWanted) {
    return {false, "deficit: got " + std::to_string(synthetics.size()) + ", want " +
                       std::to_string(kWanted)};
  }

  auto segment_distance = [](const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                             const Eigen::VectorXd& b) {
    const Eigen::VectorXd ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
  };

  int outside_box = 0, off_segment = 0, wrong_tags = 0;
  for (const Instance& synth : synthetics) {
    if (((synth.features - lo).minCoeff() < -1e-9) ||
        ((hi - synth.features).minCoeff() < -1e-9)) {
      ++outside_box;
    }
    if (!synth.context || *synth.context != 4 || !synth.label ||
        *synth.label != Label::kMajority) {
      ++wrong_tags;
    }
    bool on_some_segment = false;
    for (int i = 0; i < kPool && !on_some_segment; ++i) {
      for (int j = i + 1; j < kPool; ++j) {
        if (segment_distance(synth.features, request.buffer[i].features,
                             request.buffer[j].features) < 1e-9) {
          on_some_segment = true;
          break;
        }
      }
    }
    if (!on_some_segment) ++off_segment;
  }

  Outcome out;
  out.pass = outside_box == 0 && off_segment == 0 && wrong_tags == 0;
  out.detail = std::to_string(kWanted) + " synthetics: " + std::to_string(outside_box) +
               " outside box, " + std::to_string(off_segment) + " off segment, " +
               std::to_string(wrong_tags) + " with wrong context/label";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Directional findings at desk scale, plus 8. byte-identical re-runs.
//    Shared state: the runs are expensive, so criterion 8 reuses one of them.
// ---------------------------------------------------------------------------
struct DeskScaleRuns {
  std::string root;
  std::map<std::string, std::string> dirs;  // config stem -> run dir
  std::string error;
  ExperimentConfig rerun_config;   // criterion 8 re-executes this one
  std::string rerun_source_dir;
};

DeskScaleRuns run_desk_scale() {
  DeskScaleRuns runs;
  runs.root = (fs::temp_directory_path() / "occstream_acceptance").string();
  std::error_code ec;
  fs::remove_all(runs.root, ec);
  fs::create_directories(runs.root);

  const std::vector<std::string> stems = {
      "mixture_sa_single",  "mixture_sa_occomplete", "mixture_sa_ocfuzzy",
      "mixture_nnd_single", "mixture_nnd_occluster", "rbf_hst_single",
      "rbf_hst_occomplete", "rbf_hst_ocfuzzy",
  };
  try {
    for (const std::string& stem : stems) {
      const std::string config_path =
          std::string(OCCSTREAM_CONFIG_DIR) + "/" + stem + ".conf";
      const ExperimentConfig config = resolve_config(parse_config_file(config_path));
      const std::string out_dir = runs.root + "/" + stem;
      run_experiment(config, out_dir);
      runs.dirs[stem] = out_dir;
      if (stem == "mixture_sa_single") {
        runs.rerun_config = config;
        runs.rerun_source_dir = out_dir;
      }
    }
  } catch (const std::exception& e) {
    runs.error = e.what();
  }
  return runs;
}

Outcome criterion_directional_findings(const DeskScaleRuns& runs) {
  if (!runs.error.empty()) return {false, "runs failed: " + runs.error};

  auto p_right = [&](const std::string& baseline, const std::string& challenger) {
    return compare_runs(runs.dirs.at(baseline), runs.dirs.at(challenger), "auc", 0.01)
        .posterior.p_right;
  };

  const double sa_complete = p_right("mixture_sa_single", "mixture_sa_occomplete");
  const double sa_fuzzy = p_right("mixture_sa_single", "mixture_sa_ocfuzzy");
  const double nnd_cluster = p_right("mixture_nnd_single", "mixture_nnd_occluster");
  const double hst_complete = p_right("rbf_hst_single", "rbf_hst_occomplete");
  const double hst_fuzzy = p_right("rbf_hst_single", "rbf_hst_ocfuzzy");

  const bool a_ok = sa_complete > 0.8 && sa_fuzzy > 0.8;
  const bool b_ok = nnd_cluster > 0.8;
  const bool c_ok = hst_complete < 0.5 && hst_fuzzy < 0.5;

  Outcome out;
  out.pass = a_ok && b_ok && c_ok;
  out.detail = "p_right over single: sa/complete " + fmt(sa_complete) + ", sa/fuzzy " +
               fmt(sa_fuzzy) + " (want >0.8); nnd/cluster " + fmt(nnd_cluster) +
               " (want >0.8); hst/complete " + fmt(hst_complete) + ", hst/fuzzy " +
               fmt(hst_fuzzy) + " (want <0.5)";
  return out;
}

Outcome criterion_byte_identical_rerun(const DeskScaleRuns& runs) {
  if (!runs.error.empty()) return {false, "runs failed: " + runs.error};
  const std::string rerun_dir = runs.root + "/rerun_mixture_sa_single";
  run_experiment(runs.rerun_config, rerun_dir);
  const bool metrics_same = read_file(runs.rerun_source_dir + "/metrics.csv") ==
                            read_file(rerun_dir + "/metrics.csv");
  const bool thresholds_same = read_file(runs.rerun_source_dir + "/threshold_report.csv") ==
                               read_file(rerun_dir + "/threshold_report.csv");
  Outcome out;
  out.pass = metrics_same && thresholds_same;
  out.detail = std::string("metrics.csv ") + (metrics_same ? "identical" : "DIFFER") +
               ", threshold_report.csv " + (thresholds_same ? "identical" : "DIFFER");
  return out;
}

// ---------------------------------------------------------------------------
// 9. With one declared context, context routing degenerates to the bare base
//    classifier: score sequences match bit for bit for all three classifiers.
// ---------------------------------------------------------------------------
Outcome criterion_degenerate_context() {
  Outcome out;
  out.pass = true;
  std::ostringstream detail;

  for (const std::string kind_name : {"sa", "hstrees", "nnd"}) {
    const ClassifierKind kind = classifier_from_name(kind_name);

    Rng rng(808);
    std::vector<Instance> window;
    for (int i = 0; i < 600; ++i) {
      Instance inst;
      inst.features = Eigen::VectorXd::Zero(2);
      inst.features[0] = rng.uniform();
      inst.features[1] = rng.uniform();
      inst.context = 0;
      inst.label = Label::kMajority;
      window.push_back(std::move(inst));
    }
    std::vector<Instance> online;
    for (int i = 0; i < 400; ++i) {
      Instance inst;
      inst.features = Eigen::VectorXd::Zero(2);
      inst.features[0] = rng.uniform(-0.2, 1.2);
      inst.features[1] = rng.uniform(-0.2, 1.2);
      inst.context = 0;
      online.push_back(std::move(inst));
    }

    FrameworkConfig config;
    config.classifier = kind;
    config.context_count = 1;
    config.min_points = 2;       // below the window size: no oversampling
    config.initial_points = 600;
    config.seed = 123;

    // The bare classifier under the same derived seed and window.
    ClassifierParams params;
    auto bare = make_classifier(kind, params, mix_seed(123, seed_tag::kClassifier, 0));
    bare->initialize(window);

    std::vector<double> bare_scores;
    bare_scores.reserve(window.size());
    for (const Instance& inst : window) bare_scores.push_back(bare->score(inst.features));
    std::vector<double> sorted = bare_scores;
    std::sort(sorted.begin(), sorted.end());
    const double tau = sorted[sorted.size() / 2];

    auto routed = make_framework(framework_from_name("occomplete"), config);
    routed->initialize(window);
    routed->set_tau(tau);

    int mismatches = 0;
    for (const Instance& inst : online) {
      const double bare_score = bare->score(inst.features);
      const StreamVerdict verdict = routed->step(inst, true);
      if (verdict.score != bare_score) ++mismatches;
      if (bare_score <= tau) bare->train(inst.features);  // believed normal
    }
    if (mismatches > 0) {
      out.pass = false;
      detail << kind_name << ": " << mismatches << " of 400 scores differ; ";
    }
  }

  out.detail = out.pass ? "sa, hst, nnd: 400-step score sequences identical to the bare model"
                        : detail.str();
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string name;
    Outcome outcome;
    double seconds;
  };
  std::vector<Criterion> results;

  DeskScaleRuns desk_runs;

  auto run = [&](int number, const std::string& name, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    results.push_back({number, name, outcome, seconds_since(start)});
    const Criterion& c = results.back();
    std::cout << "ACCEPTANCE " << c.number << " " << c.name << ": "
              << (c.outcome.pass ? "PASS" : "FAIL") << " (" << c.outcome.detail << "; "
              << fmt(c.seconds, 3) << "s)" << std::endl;
  };

  run(1, "cluster-distance-metric", criterion_cluster_distance_metric);
  run(2, "window-sizing-coverage", criterion_window_sizing);
  run(3, "prequential-auc-oracle", criterion_auc_oracle);
  run(4, "autoencoder-gradients", criterion_autoencoder_gradients);
  run(5, "half-space-tree-mass", criterion_hst_mass);
  run(6, "oversampling-geometry", criterion_smote_geometry);
  run(7, "directional-findings", [&] {
    desk_runs = run_desk_scale();
    return criterion_directional_findings(desk_runs);
  });
  run(8, "byte-identical-rerun", [&] { return criterion_byte_identical_rerun(desk_runs); });
  run(9, "degenerate-context-equivalence", criterion_degenerate_context);

  int failed = 0;
  for (const Criterion& c : results) {
    if (!c.outcome.pass) ++failed;
  }
  std::cout << "acceptance summary: " << (results.size() - failed) << "/" << results.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
