#pragma once

#include <cstdint>
#include <vector>

#include "crashdet/core/types.hpp"

namespace crashdet::learn {

struct TreeNode {
  int feature = -1;  // -1: leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf payload: class-1 weight share or regression mean
};

// Axis-aligned CART tree with exhaustive split search over midpoints of
// sorted distinct feature values. Supports weighted Gini/entropy
// classification (y in {0,1}) and weighted MSE regression.
class DecisionTree {
 public:
  enum class Criterion { Gini, Entropy, Mse };

  struct Options {
    Criterion criterion = Criterion::Gini;
    int max_depth = 10;
    int min_samples_leaf = 1;
    double min_impurity_decrease = 0.0;
    int max_features = -1;  // -1: consider all features at every node
    std::uint64_t seed = 0;  // only used when max_features limits the search
  };

  void fit(const MatX& x, const VecX& y, const VecX& w, const Options& opt);

  double predict(const VecX& x) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
      i = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const { return depth_; }
  int feature_count() const { return n_features_; }
  bool uses_feature(int f) const;

  void set_nodes(std::vector<TreeNode> nodes, int n_features);

 private:
  std::vector<TreeNode> nodes_;
  int depth_ = 0;
  int n_features_ = 0;
};

}  // namespace crashdet::learn
