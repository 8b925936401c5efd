#pragma once

#include "crashdet/learn/model.hpp"
#include "crashdet/learn/tree.hpp"

namespace crashdet::learn {

// AdaBoost.M1 with SAMME reweighting over shallow weighted-Gini trees.
class AdaBoostModel : public Classifier {
 public:
  struct Options {
    int n_learners = 80;
    int max_depth = 2;
    double learning_rate = 0.6;
  };

  void fit(const MatX& x, const VecXi& y, const Options& opt);

  double score(const VecX& x) const override {
    double pos = 0.0;
    for (std::size_t m = 0; m < trees_.size(); ++m) {
      if (trees_[m].predict(x) >= 0.5) pos += alphas_[m];
    }
    return alpha_sum_ > 0.0 ? pos / alpha_sum_ : 0.5;
  }
  int feature_count() const override { return n_features_; }

  const std::vector<DecisionTree>& trees() const { return trees_; }
  const std::vector<double>& alphas() const { return alphas_; }
  // per accepted round: weighted weak-learner error and the post-update
  // weight sum (a probability distribution, so 1 up to roundoff)
  const std::vector<double>& round_errors() const { return round_errors_; }
  const std::vector<double>& round_weight_sums() const { return round_weight_sums_; }
  const std::vector<double>& training_errors() const { return training_errors_; }

  void restore(std::vector<DecisionTree> trees, std::vector<double> alphas, int n_features);

 private:
  std::vector<DecisionTree> trees_;
  std::vector<double> alphas_;
  double alpha_sum_ = 0.0;
  int n_features_ = 0;
  std::vector<double> round_errors_, round_weight_sums_, training_errors_;
};

// Gradient boosting on the exponential loss (labels mapped to +/-1),
// regression trees on the negative gradient with Newton leaf updates.
class GradientBoostModel : public Classifier {
 public:
  struct Options {
    int n_learners = 80;
    int max_depth = 10;
    double learning_rate = 0.5;
    int min_samples_leaf = 1;
  };

  void fit(const MatX& x, const VecXi& y, const Options& opt);

  double raw_margin(const VecX& x) const {
    double f = f0_;
    for (const auto& t : trees_) f += lr_ * t.predict(x);
    return f;
  }
  double score(const VecX& x) const override {
    return 1.0 / (1.0 + std::exp(-2.0 * raw_margin(x)));
  }
  int feature_count() const override { return n_features_; }

  const std::vector<DecisionTree>& trees() const { return trees_; }
  const std::vector<double>& training_errors() const { return training_errors_; }
  double f0() const { return f0_; }
  double learning_rate() const { return lr_; }

  void restore(std::vector<DecisionTree> trees, double f0, double lr, int n_features);

 private:
  std::vector<DecisionTree> trees_;
  double f0_ = 0.0;
  double lr_ = 0.5;
  int n_features_ = 0;
  std::vector<double> training_errors_;
};

// Bagged entropy trees with per-node feature subsampling; scores are
// averaged leaf class shares.
class RandomForestModel : public Classifier {
 public:
  struct Options {
    int n_learners = 45;
    int max_depth = 17;
    DecisionTree::Criterion criterion = DecisionTree::Criterion::Entropy;
    bool bootstrap = true;
    int max_features = -2;  // -2: floor(sqrt(d)), -1: all
    int min_samples_leaf = 1;
    std::uint64_t seed = 0;
  };

  void fit(const MatX& x, const VecXi& y, const Options& opt);

  double score(const VecX& x) const override {
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(x);
    return trees_.empty() ? 0.5 : s / static_cast<double>(trees_.size());
  }
  int feature_count() const override { return n_features_; }

  const std::vector<DecisionTree>& trees() const { return trees_; }
  void restore(std::vector<DecisionTree> trees, int n_features);

 private:
  std::vector<DecisionTree> trees_;
  int n_features_ = 0;
};

}  // namespace crashdet::learn
