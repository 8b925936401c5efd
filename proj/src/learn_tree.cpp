#include "crashdet/learn/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/random.hpp"

namespace crashdet::learn {

namespace {

double impurity(DecisionTree::Criterion crit, double w_sum, double w_pos, double wy_sq_sum,
                double wy_sum) {
  if (w_sum <= 0.0) return 0.0;
  switch (crit) {
    case DecisionTree::Criterion::Gini: {
      const double p = w_pos / w_sum;
      return 2.0 * p * (1.0 - p);
    }
    case DecisionTree::Criterion::Entropy: {
      const double p = w_pos / w_sum;
      double h = 0.0;
      if (p > 0.0) h -= p * std::log2(p);
      if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
      return h;
    }
    case DecisionTree::Criterion::Mse: {
      const double mean = wy_sum / w_sum;
      return wy_sq_sum / w_sum - mean * mean;
    }
  }
  return 0.0;
}

struct SplitResult {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

}  // namespace

void DecisionTree::fit(const MatX& x, const VecX& y, const VecX& w, const Options& opt) {
  if (x.rows() == 0) throw ValidationError("cannot fit a tree on an empty matrix");
  if (x.rows() != y.size() || x.rows() != w.size()) {
    throw ValidationError("tree fit: x/y/w row mismatch");
  }
  nodes_.clear();
  depth_ = 0;
  n_features_ = static_cast<int>(x.cols());
  const bool regression = opt.criterion == Criterion::Mse;

  Rng rng(opt.seed);
  std::vector<int> all_features(static_cast<std::size_t>(n_features_));
  std::iota(all_features.begin(), all_features.end(), 0);

  struct Job {
    int node;
    std::vector<int> idx;
    int depth;
  };

  std::vector<Job> stack;
  {
    std::vector<int> root;
    root.reserve(static_cast<std::size_t>(x.rows()));
    for (int i = 0; i < x.rows(); ++i) {
      if (w[i] > 0.0) root.push_back(i);
    }
    if (root.empty()) throw ValidationError("tree fit: all sample weights are zero");
    nodes_.emplace_back();
    stack.push_back({0, std::move(root), 0});
  }

  std::vector<std::pair<double, int>> sorted;  // (value, sample) scratch

  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();
    depth_ = std::max(depth_, job.depth);

    double w_sum = 0.0, w_pos = 0.0, wy_sum = 0.0, wy_sq = 0.0;
    for (int i : job.idx) {
      w_sum += w[i];
      wy_sum += w[i] * y[i];
      wy_sq += w[i] * y[i] * y[i];
      if (y[i] > 0.5) w_pos += w[i];
    }
    const double node_value = regression ? wy_sum / w_sum : w_pos / w_sum;
    const double node_imp = impurity(opt.criterion, w_sum, w_pos, wy_sq, wy_sum);

    auto make_leaf = [&] {
      TreeNode& n = nodes_[static_cast<std::size_t>(job.node)];
      n.feature = -1;
      n.value = node_value;
    };

    if (job.depth >= opt.max_depth || node_imp <= 1e-15 ||
        job.idx.size() < static_cast<std::size_t>(2 * opt.min_samples_leaf)) {
      make_leaf();
      continue;
    }

    // candidate features, optionally a random subset per node
    const std::vector<int>* features = &all_features;
    std::vector<int> subset;
    if (opt.max_features > 0 && opt.max_features < n_features_) {
      subset = all_features;
      rng.shuffle(subset);
      subset.resize(static_cast<std::size_t>(opt.max_features));
      std::sort(subset.begin(), subset.end());
      features = &subset;
    }

    SplitResult best;
    for (int f : *features) {
      sorted.clear();
      sorted.reserve(job.idx.size());
      for (int i : job.idx) sorted.emplace_back(x(i, f), i);
      std::sort(sorted.begin(), sorted.end());
      if (sorted.front().first == sorted.back().first) continue;

      double lw = 0.0, lpos = 0.0, ly = 0.0, ly2 = 0.0;
      std::size_t left_n = 0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const int i = sorted[k].second;
        lw += w[i];
        ly += w[i] * y[i];
        ly2 += w[i] * y[i] * y[i];
        if (y[i] > 0.5) lpos += w[i];
        ++left_n;
        if (sorted[k].first == sorted[k + 1].first) continue;
        if (left_n < static_cast<std::size_t>(opt.min_samples_leaf) ||
            job.idx.size() - left_n < static_cast<std::size_t>(opt.min_samples_leaf)) {
          continue;
        }
        const double rw = w_sum - lw;
        const double l_imp = impurity(opt.criterion, lw, lpos, ly2, ly);
        const double r_imp =
            impurity(opt.criterion, rw, w_pos - lpos, wy_sq - ly2, wy_sum - ly);
        const double gain = node_imp - (lw * l_imp + rw * r_imp) / w_sum;
        if (gain > best.gain + 1e-15) {
          best.feature = f;
          best.threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
          best.gain = gain;
        }
      }
    }

    if (best.feature < 0 || best.gain <= opt.min_impurity_decrease) {
      make_leaf();
      continue;
    }

    std::vector<int> left, right;
    left.reserve(job.idx.size());
    right.reserve(job.idx.size());
    for (int i : job.idx) {
      (x(i, best.feature) <= best.threshold ? left : right).push_back(i);
    }
    if (left.empty() || right.empty()) {  // numeric ties collapsed a side
      make_leaf();
      continue;
    }

    const int li = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const int ri = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    TreeNode& n = nodes_[static_cast<std::size_t>(job.node)];
    n.feature = best.feature;
    n.threshold = best.threshold;
    n.left = li;
    n.right = ri;
    stack.push_back({li, std::move(left), job.depth + 1});
    stack.push_back({ri, std::move(right), job.depth + 1});
  }
}

bool DecisionTree::uses_feature(int f) const {
  for (const auto& n : nodes_) {
    if (n.feature == f) return true;
  }
  return false;
}

void DecisionTree::set_nodes(std::vector<TreeNode> nodes, int n_features) {
  nodes_ = std::move(nodes);
  n_features_ = n_features;
  depth_ = 0;
}

}  // namespace crashdet::learn
