#include "occstream/half_space_trees.hpp"

#include <cmath>
#include <string>

namespace occstream {

HalfSpaceForest::HalfSpaceForest(int dim, int tree_count, int depth, std::int64_t window_size,
                                 double size_limit, std::uint64_t seed,
                                 std::vector<std::pair<double, double>> workspace)
    : dim_(dim),
      depth_(depth),
      window_size_(window_size),
      size_limit_(size_limit),
      workspace_(std::move(workspace)) {
  if (dim < 1) throw ContractError("forest needs dimension >= 1");
  if (tree_count < 1) throw ContractError("tree count must be >= 1");
  if (depth < 1) throw ContractError("tree depth must be >= 1");
  if (window_size < 1) throw ContractError("window size must be >= 1");
  if (!(size_limit >= 0.0)) throw ContractError("size limit must be >= 0");
  if (static_cast<int>(workspace_.size()) != dim)
    throw ContractError("workspace must give a range per dimension");
  for (const auto& [lo, hi] : workspace_)
    if (!(lo < hi)) throw ContractError("workspace ranges must have lo < hi");

  const std::size_t node_count = (std::size_t{1} << (depth + 1)) - 1;
  const std::size_t internal_count = (std::size_t{1} << depth) - 1;
  Rng rng(seed);
  trees_.resize(static_cast<std::size_t>(tree_count));
  for (auto& tree : trees_) {
    tree.split_attr.assign(internal_count, -1);
    tree.split_value.assign(internal_count, 0.0);
    tree.mass_ref.assign(node_count, 0);
    tree.mass_latest.assign(node_count, 0);
    auto ranges = workspace_;
    build_node(tree, 0, 0, ranges, rng);
  }
}

void HalfSpaceForest::build_node(Tree& tree, std::size_t node, int level,
                                 std::vector<std::pair<double, double>>& ranges, Rng& rng) {
  if (level == depth_) return;  // leaves carry no split
  const int attr = static_cast<int>(rng.index(static_cast<std::size_t>(dim_)));
  const auto saved = ranges[attr];
  const double mid = 0.5 * (saved.first + saved.second);
  tree.split_attr[node] = attr;
  tree.split_value[node] = mid;
  ranges[attr] = {saved.first, mid};
  build_node(tree, 2 * node + 1, level + 1, ranges, rng);
  ranges[attr] = {mid, saved.second};
  build_node(tree, 2 * node + 2, level + 1, ranges, rng);
  ranges[attr] = saved;
}

std::size_t HalfSpaceForest::descend(const Tree& tree, const Eigen::VectorXd& x,
                                     std::size_t node) const {
  const int attr = tree.split_attr[node];
  return x[attr] < tree.split_value[node] ? 2 * node + 1 : 2 * node + 2;
}

double HalfSpaceForest::raw_mass(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw ContractError("forest input dimension mismatch");
  const double limit = size_limit_ * static_cast<double>(window_size_);
  double total = 0.0;
  for (const auto& tree : trees_) {
    std::size_t node = 0;
    int level = 0;
    while (level < depth_ && static_cast<double>(tree.mass_ref[node]) >= limit) {
      node = descend(tree, x, node);
      ++level;
    }
    total += static_cast<double>(tree.mass_ref[node]) * std::pow(2.0, level);
  }
  return total;
}

void HalfSpaceForest::update(const Eigen::VectorXd& x) {
  if (x.size() != dim_) throw ContractError("forest input dimension mismatch");
  for (auto& tree : trees_) {
    std::size_t node = 0;
    for (int level = 0;; ++level) {
      ++tree.mass_latest[node];
      if (level == depth_) break;
      node = descend(tree, x, node);
    }
  }
}

void HalfSpaceForest::roll_window() {
  for (auto& tree : trees_) {
    tree.mass_ref = tree.mass_latest;
    std::fill(tree.mass_latest.begin(), tree.mass_latest.end(), std::int64_t{0});
  }
  since_roll_ = 0;
}

void HalfSpaceForest::observe(const Eigen::VectorXd& x) {
  update(x);
  if (++since_roll_ >= window_size_) roll_window();
}

void HsTreesClassifier::initialize(const std::vector<Instance>& window) {
  if (window.empty()) throw StateError("half-space trees initialization window is empty");
  scaler_.fit(window);
  const int d = static_cast<int>(window.front().features.size());
  std::vector<std::pair<double, double>> unit(static_cast<std::size_t>(d), {0.0, 1.0});
  forest_.emplace(d, tree_count_, depth_, window_size_, size_limit_, seed_, std::move(unit));
  for (const auto& inst : window) forest_->observe(scaler_.transform(inst.features));
  train_count_ = static_cast<std::int64_t>(window.size());
}

double HsTreesClassifier::score(const Eigen::VectorXd& x) const {
  if (!forest_) throw StateError("half-space trees classifier is not initialized");
  return forest_->score(scaler_.transform(x));
}

void HsTreesClassifier::train(const Eigen::VectorXd& x) {
  if (!forest_) throw StateError("half-space trees classifier is not initialized");
  forest_->observe(scaler_.transform(x));
  ++train_count_;
}

std::unique_ptr<OneClassClassifier> HsTreesClassifier::clone() const {
  return std::make_unique<HsTreesClassifier>(*this);
}

const HalfSpaceForest& HsTreesClassifier::forest() const {
  if (!forest_) throw StateError("half-space trees classifier is not initialized");
  return *forest_;
}

}  // namespace occstream
