#pragma once

#include <vector>

#include "crashdet/learn/model.hpp"

namespace crashdet::learn {

// Single-hidden-layer ReLU network with one logistic output unit, trained by
// mini-batch Adam on the cross-entropy loss with scenario-grouped early
// stopping. Parameters live in one flat vector: [W1 (h x d, row-major),
// b1 (h), w2 (h), b2 (1)].
class MlpModel : public Classifier {
 public:
  struct Options {
    int hidden = 220;
    double learning_rate = 0.002;
    double tol = 3e-4;
    bool early_stopping = true;
    double validation_fraction = 0.1;  // share of training scenarios carved out
    int batch = 200;
    int max_epochs = 200;
    int patience = 10;
    std::uint64_t seed = 0;
  };

  // groups: per-row scenario index for the validation carve-out (may be
  // empty; rows are then grouped individually).
  void fit(const MatX& x, const VecXi& y, const std::vector<int>& groups, const Options& opt);

  double score(const VecX& x) const override;
  VecX score_all(const MatX& x) const override;
  int feature_count() const override { return d_; }

  int hidden_units() const { return h_; }
  const VecX& parameters() const { return params_; }
  int epochs_run() const { return epochs_run_; }

  void restore(VecX params, int d, int h);

  static Eigen::Index param_count(int d, int h) {
    return static_cast<Eigen::Index>(h) * d + h + h + 1;
  }

 private:
  VecX params_;
  int d_ = 0;
  int h_ = 0;
  int epochs_run_ = 0;
};

// Mean cross-entropy loss and its gradient for the flat parameter vector;
// this is the exact function the trainer descends (used directly by the
// finite-difference gradient check).
double mlp_loss_grad(const MatX& x, const VecXi& y, const VecX& params, int hidden, VecX* grad);

}  // namespace crashdet::learn
