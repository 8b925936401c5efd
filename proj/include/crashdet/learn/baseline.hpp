#pragma once

#include "crashdet/learn/model.hpp"

namespace crashdet::learn {

// Threshold detector on a single front-hub accelerometer channel: fires when
// the magnitude exceeds the trained threshold. The threshold is the F1
// maximizer over the one-dimensional candidate grid of training magnitudes.
class BaselineModel : public Classifier {
 public:
  struct Options {
    int feature = 13;  // fs_lin_acc: front suspension accelerometer
  };

  void fit(const MatX& x, const VecXi& y, const Options& opt);

  double score(const VecX& x) const override {
    return std::abs(x[feature_]) >= threshold_ ? 1.0 : 0.0;
  }
  int feature_count() const override { return n_features_; }

  double threshold() const { return threshold_; }
  int feature() const { return feature_; }

  void restore(double threshold, int feature, int n_features) {
    threshold_ = threshold;
    feature_ = feature;
    n_features_ = n_features;
  }

 private:
  double threshold_ = 0.0;
  int feature_ = 13;
  int n_features_ = 0;
};

}  // namespace crashdet::learn
