#include "crashdet/learn/ensembles.hpp"

#include <cmath>

#include "crashdet/core/random.hpp"

namespace crashdet::learn {

namespace {

double misclassification(const VecX& scores, const VecXi& y) {
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if ((scores[i] >= 0.5 ? 1 : 0) != y[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(y.size());
}

}  // namespace

void AdaBoostModel::fit(const MatX& x, const VecXi& y, const Options& opt) {
  require_two_classes(y);
  const Eigen::Index n = x.rows();
  n_features_ = static_cast<int>(x.cols());
  trees_.clear();
  alphas_.clear();
  round_errors_.clear();
  round_weight_sums_.clear();
  training_errors_.clear();
  alpha_sum_ = 0.0;

  VecX yd(n);
  for (Eigen::Index i = 0; i < n; ++i) yd[i] = y[i];
  VecX w = VecX::Constant(n, 1.0 / static_cast<double>(n));
  VecX ensemble_pos = VecX::Zero(n);  // running alpha mass on class 1

  DecisionTree::Options topt;
  topt.criterion = DecisionTree::Criterion::Gini;
  topt.max_depth = opt.max_depth;

  for (int m = 0; m < opt.n_learners; ++m) {
    DecisionTree tree;
    tree.fit(x, yd, w, topt);

    double err = 0.0;
    std::vector<char> wrong(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const int pred = tree.predict(x.row(i).transpose()) >= 0.5 ? 1 : 0;
      wrong[static_cast<std::size_t>(i)] = pred != y[i];
      if (pred != y[i]) err += w[i];
    }
    // SAMME acceptance: a learner no better than chance ends the ensemble
    if (err >= 0.5) break;
    const double err_c = std::max(err, 1e-12);
    const double alpha = opt.learning_rate * std::log((1.0 - err_c) / err_c);

    for (Eigen::Index i = 0; i < n; ++i) {
      if (wrong[static_cast<std::size_t>(i)]) w[i] *= std::exp(alpha);
    }
    const double w_sum = w.sum();
    w /= w_sum;

    trees_.push_back(std::move(tree));
    alphas_.push_back(alpha);
    alpha_sum_ += alpha;
    round_errors_.push_back(err);
    round_weight_sums_.push_back(w.sum());

    for (Eigen::Index i = 0; i < n; ++i) {
      const bool predicted_one = wrong[static_cast<std::size_t>(i)] ? y[i] == 0 : y[i] == 1;
      if (predicted_one) ensemble_pos[i] += alpha;
    }
    VecX s(n);
    for (Eigen::Index i = 0; i < n; ++i) s[i] = ensemble_pos[i] / alpha_sum_;
    training_errors_.push_back(misclassification(s, y));

    if (err <= 1e-12) break;  // perfect learner: nothing left to reweight
  }
  if (trees_.empty()) throw TrainingError("adaboost: no weak learner beat chance");
}

void AdaBoostModel::restore(std::vector<DecisionTree> trees, std::vector<double> alphas,
                            int n_features) {
  trees_ = std::move(trees);
  alphas_ = std::move(alphas);
  n_features_ = n_features;
  alpha_sum_ = 0.0;
  for (double a : alphas_) alpha_sum_ += a;
}

void GradientBoostModel::fit(const MatX& x, const VecXi& y, const Options& opt) {
  require_two_classes(y);
  const Eigen::Index n = x.rows();
  n_features_ = static_cast<int>(x.cols());
  trees_.clear();
  training_errors_.clear();
  lr_ = opt.learning_rate;

  VecX ys(n);  // labels in {-1, +1}
  double pos = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    ys[i] = y[i] != 0 ? 1.0 : -1.0;
    pos += y[i] != 0 ? 1.0 : 0.0;
  }
  const double p1 = std::clamp(pos / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
  f0_ = 0.5 * std::log(p1 / (1.0 - p1));

  VecX f = VecX::Constant(n, f0_);
  const VecX w = VecX::Ones(n);

  DecisionTree::Options topt;
  topt.criterion = DecisionTree::Criterion::Mse;
  topt.max_depth = opt.max_depth;
  topt.min_samples_leaf = opt.min_samples_leaf;

  VecX residual(n);
  std::vector<int> leaf_of(static_cast<std::size_t>(n));
  for (int m = 0; m < opt.n_learners; ++m) {
    for (Eigen::Index i = 0; i < n; ++i) residual[i] = ys[i] * std::exp(-ys[i] * f[i]);

    DecisionTree tree;
    tree.fit(x, residual, w, topt);

    // Newton step per leaf: gamma = sum(r) / sum(|r|)
    const auto& nodes = tree.nodes();
    std::vector<double> num(nodes.size(), 0.0), den(nodes.size(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      int node = 0;
      while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(node)];
        node = x(i, nd.feature) <= nd.threshold ? nd.left : nd.right;
      }
      leaf_of[static_cast<std::size_t>(i)] = node;
      num[static_cast<std::size_t>(node)] += residual[i];
      den[static_cast<std::size_t>(node)] += std::abs(residual[i]);
    }
    std::vector<TreeNode> updated = nodes;
    for (std::size_t k = 0; k < updated.size(); ++k) {
      if (updated[k].feature < 0) {
        updated[k].value = den[k] > 0.0 ? num[k] / den[k] : 0.0;
      }
    }
    tree.set_nodes(std::move(updated), n_features_);

    for (Eigen::Index i = 0; i < n; ++i) {
      f[i] += lr_ * tree.nodes()[static_cast<std::size_t>(leaf_of[static_cast<std::size_t>(i)])].value;
    }
    trees_.push_back(std::move(tree));

    Eigen::Index wrongc = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((f[i] >= 0.0 ? 1 : 0) != y[i]) ++wrongc;
    }
    training_errors_.push_back(static_cast<double>(wrongc) / static_cast<double>(n));
  }
}

void GradientBoostModel::restore(std::vector<DecisionTree> trees, double f0, double lr,
                                 int n_features) {
  trees_ = std::move(trees);
  f0_ = f0;
  lr_ = lr;
  n_features_ = n_features;
}

void RandomForestModel::fit(const MatX& x, const VecXi& y, const Options& opt) {
  require_two_classes(y);
  const Eigen::Index n = x.rows();
  n_features_ = static_cast<int>(x.cols());
  trees_.clear();
  trees_.reserve(static_cast<std::size_t>(opt.n_learners));

  VecX yd(n);
  for (Eigen::Index i = 0; i < n; ++i) yd[i] = y[i];

  int max_features = opt.max_features;
  if (max_features == -2) {
    max_features = std::max(1, static_cast<int>(std::floor(std::sqrt(x.cols()))));
  }

  for (int t = 0; t < opt.n_learners; ++t) {
    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(t)));
    VecX w;
    if (opt.bootstrap) {
      w = VecX::Zero(n);  // multinomial bootstrap as integer weights
      for (Eigen::Index i = 0; i < n; ++i) {
        w[static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(n)))] += 1.0;
      }
    } else {
      w = VecX::Ones(n);
    }
    DecisionTree::Options topt;
    topt.criterion = opt.criterion;
    topt.max_depth = opt.max_depth;
    topt.min_samples_leaf = opt.min_samples_leaf;
    topt.max_features = max_features;
    topt.seed = rng.raw();
    DecisionTree tree;
    tree.fit(x, yd, w, topt);
    trees_.push_back(std::move(tree));
  }
}

void RandomForestModel::restore(std::vector<DecisionTree> trees, int n_features) {
  trees_ = std::move(trees);
  n_features_ = n_features;
}

}  // namespace crashdet::learn
