#pragma once

#include "crashdet/learn/model.hpp"

namespace crashdet::learn {

// Soft-margin RBF support vector machine solved in the dual by SMO-style
// pairwise updates; scores are calibrated to [0,1] with a logistic fit on
// the decision values.
class SvmModel : public Classifier {
 public:
  struct Options {
    double c = 120.0;
    double gamma = -1.0;  // <= 0: "auto", i.e. 1 / n_features
    double tol = 1e-3;
    long max_steps = 2'000'000;  // pairwise update cap
    std::uint64_t seed = 0;
  };

  void fit(const MatX& x, const VecXi& y, const Options& opt);

  // signed decision value w.phi(x) + b
  double decision(const VecX& x) const {
    const VecX d2 = (sv_.rowwise() - x.transpose()).rowwise().squaredNorm();
    return ((-gamma_ * d2.array()).exp() * coef_.array()).sum() + bias_;
  }

  double score(const VecX& x) const override {
    return 1.0 / (1.0 + std::exp(platt_a_ * decision(x) + platt_b_));
  }
  int feature_count() const override { return n_features_; }

  Eigen::Index support_count() const { return sv_.rows(); }
  const MatX& support_vectors() const { return sv_; }
  const VecX& dual_coef() const { return coef_; }  // alpha_i * y_i
  double bias() const { return bias_; }
  double gamma() const { return gamma_; }
  double platt_a() const { return platt_a_; }
  double platt_b() const { return platt_b_; }
  double kkt_residual() const { return kkt_residual_; }
  long steps_used() const { return steps_; }

  void restore(MatX sv, VecX coef, double bias, double gamma, double platt_a, double platt_b,
               int n_features);

 private:
  MatX sv_;
  VecX coef_;
  double bias_ = 0.0;
  double gamma_ = 0.0;
  double platt_a_ = -1.0;
  double platt_b_ = 0.0;
  double kkt_residual_ = 0.0;
  long steps_ = 0;
  int n_features_ = 0;
};

}  // namespace crashdet::learn
