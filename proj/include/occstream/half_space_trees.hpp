#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "occstream/classifier.hpp"

namespace occstream {

// Ensemble of full binary trees over a fixed workspace. Each internal node
// splits a randomly chosen attribute at the midpoint of its range; structure
// is built once, independent of any instance. Nodes carry a reference-window
// mass and a latest-window mass; every window_size updates the windows roll
// (reference <- latest, latest <- 0).
//
// The native mass score is high for in-distribution points, so the unified
// anomaly score is its negation.
class HalfSpaceForest {
 public:
  HalfSpaceForest(int dim, int tree_count, int depth, std::int64_t window_size,
                  double size_limit, std::uint64_t seed,
                  std::vector<std::pair<double, double>> workspace);

  // Sum over trees of r * 2^k at the terminal node of x's path, where the
  // terminal node is the first one whose reference mass drops below
  // size_limit * window_size, or the leaf.
  double raw_mass(const Eigen::VectorXd& x) const;

  double score(const Eigen::VectorXd& x) const { return -raw_mass(x); }

  // Increment latest-window mass along x's root-to-leaf path in every tree.
  void update(const Eigen::VectorXd& x);

  // reference <- latest, latest <- 0, for every node of every tree.
  void roll_window();

  // update() plus an automatic roll_window() after every window_size updates.
  void observe(const Eigen::VectorXd& x);

  // Nodes are stored as implicit complete binary trees: children of i are
  // 2i+1 and 2i+2; the first 2^depth - 1 entries are internal.
  struct Tree {
    std::vector<int> split_attr;
    std::vector<double> split_value;
    std::vector<std::int64_t> mass_ref;
    std::vector<std::int64_t> mass_latest;
  };

  int tree_count() const { return static_cast<int>(trees_.size()); }
  int depth() const { return depth_; }
  std::int64_t window_size() const { return window_size_; }
  const Tree& tree(int i) const { return trees_.at(static_cast<std::size_t>(i)); }

 private:
  int dim_;
  int depth_;
  std::int64_t window_size_;
  double size_limit_;
  std::vector<std::pair<double, double>> workspace_;
  std::vector<Tree> trees_;
  std::int64_t since_roll_ = 0;

  void build_node(Tree& tree, std::size_t node, int level,
                  std::vector<std::pair<double, double>>& ranges, Rng& rng);
  std::size_t descend(const Tree& tree, const Eigen::VectorXd& x, std::size_t node) const;
};

class HsTreesClassifier : public OneClassClassifier {
 public:
  HsTreesClassifier(int tree_count, int depth, std::int64_t window_size, double size_limit,
                    std::uint64_t seed)
      : tree_count_(tree_count),
        depth_(depth),
        window_size_(window_size),
        size_limit_(size_limit),
        seed_(seed) {}

  void initialize(const std::vector<Instance>& window) override;
  double score(const Eigen::VectorXd& x) const override;
  void train(const Eigen::VectorXd& x) override;
  std::unique_ptr<OneClassClassifier> clone() const override;
  std::int64_t train_count() const override { return train_count_; }

  const HalfSpaceForest& forest() const;

 private:
  int tree_count_;
  int depth_;
  std::int64_t window_size_;
  double size_limit_;
  std::uint64_t seed_;
  MinMaxScaler scaler_;
  std::optional<HalfSpaceForest> forest_;
  std::int64_t train_count_ = 0;
};

}  // namespace occstream
