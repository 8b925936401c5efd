#include "crashdet/learn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "crashdet/core/random.hpp"

namespace crashdet::learn {

namespace {

struct ParamView {
  Eigen::Map<const MatX> w1;
  Eigen::Map<const VecX> b1;
  Eigen::Map<const VecX> w2;
  double b2;
};

ParamView view(const VecX& p, int d, int h) {
  const double* base = p.data();
  return {Eigen::Map<const MatX>(base, h, d), Eigen::Map<const VecX>(base + h * d, h),
          Eigen::Map<const VecX>(base + h * d + h, h), p[h * d + 2 * h]};
}

double stable_bce(double z, double y) {
  // log(1 + e^z) - y z, computed without overflow
  return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

double mlp_loss_grad(const MatX& x, const VecXi& y, const VecX& params, int hidden, VecX* grad) {
  const int d = static_cast<int>(x.cols());
  const int h = hidden;
  const Eigen::Index n = x.rows();
  const ParamView p = view(params, d, h);

  MatX z1 = x * p.w1.transpose();
  z1.rowwise() += p.b1.transpose();
  const MatX hact = z1.cwiseMax(0.0);
  VecX z2 = hact * p.w2;
  z2.array() += p.b2;

  double loss = 0.0;
  VecX dz2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double yi = y[i] != 0 ? 1.0 : 0.0;
    loss += stable_bce(z2[i], yi);
    const double pi = 1.0 / (1.0 + std::exp(-z2[i]));
    dz2[i] = (pi - yi) / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);

  if (grad) {
    grad->resize(params.size());
    MatX dh = dz2 * p.w2.transpose();          // n x h
    dh = (z1.array() > 0.0).select(dh, 0.0);   // ReLU mask
    Eigen::Map<MatX>(grad->data(), h, d) = dh.transpose() * x;
    Eigen::Map<VecX>(grad->data() + h * d, h) = dh.colwise().sum().transpose();
    Eigen::Map<VecX>(grad->data() + h * d + h, h) = hact.transpose() * dz2;
    (*grad)[h * d + 2 * h] = dz2.sum();
  }
  return loss;
}

void MlpModel::fit(const MatX& x, const VecXi& y, const std::vector<int>& groups,
                   const Options& opt) {
  require_two_classes(y);
  const Eigen::Index n = x.rows();
  d_ = static_cast<int>(x.cols());
  h_ = opt.hidden;
  Rng rng(opt.seed);

  // Glorot-uniform layer init
  params_.resize(param_count(d_, h_));
  const double lim1 = std::sqrt(6.0 / static_cast<double>(d_ + h_));
  const double lim2 = std::sqrt(6.0 / static_cast<double>(h_ + 1));
  for (Eigen::Index i = 0; i < h_ * d_; ++i) params_[i] = rng.uniform(-lim1, lim1);
  for (Eigen::Index i = h_ * d_; i < h_ * d_ + h_; ++i) params_[i] = 0.0;
  for (Eigen::Index i = h_ * d_ + h_; i < params_.size() - 1; ++i) {
    params_[i] = rng.uniform(-lim2, lim2);
  }
  params_[params_.size() - 1] = 0.0;

  // scenario-grouped validation carve-out
  std::vector<Eigen::Index> train_rows, val_rows;
  if (opt.early_stopping) {
    std::vector<int> row_group(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      row_group[static_cast<std::size_t>(i)] =
          groups.empty() ? static_cast<int>(i) : groups[static_cast<std::size_t>(i)];
    }
    std::vector<int> distinct(row_group.begin(), row_group.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    rng.shuffle(distinct);
    const std::size_t n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(opt.validation_fraction * static_cast<double>(distinct.size())));
    std::set<int> val_groups(distinct.begin(), distinct.begin() + static_cast<long>(n_val));
    for (Eigen::Index i = 0; i < n; ++i) {
      (val_groups.count(row_group[static_cast<std::size_t>(i)]) ? val_rows : train_rows).push_back(i);
    }
    auto single_class = [&](const std::vector<Eigen::Index>& rows) {
      bool h0 = false, h1 = false;
      for (Eigen::Index i : rows) (y[i] != 0 ? h1 : h0) = true;
      return !(h0 && h1);
    };
    if (train_rows.empty() || val_rows.empty() || single_class(train_rows)) {
      // group structure too coarse: stratified row-level carve instead
      train_rows.clear();
      val_rows.clear();
      std::vector<Eigen::Index> by_class[2];
      for (Eigen::Index i = 0; i < n; ++i) by_class[y[i] != 0 ? 1 : 0].push_back(i);
      for (auto& rows : by_class) {
        rng.shuffle(rows);
        const std::size_t nv = std::max<std::size_t>(
            1, static_cast<std::size_t>(opt.validation_fraction * static_cast<double>(rows.size())));
        for (std::size_t k = 0; k < rows.size(); ++k) {
          (k < nv ? val_rows : train_rows).push_back(rows[k]);
        }
      }
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) train_rows.push_back(i);
  }

  MatX x_train(static_cast<Eigen::Index>(train_rows.size()), d_);
  VecXi y_train(static_cast<Eigen::Index>(train_rows.size()));
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    x_train.row(static_cast<Eigen::Index>(i)) = x.row(train_rows[i]);
    y_train[static_cast<Eigen::Index>(i)] = y[train_rows[i]];
  }
  MatX x_val(static_cast<Eigen::Index>(val_rows.size()), d_);
  VecXi y_val(static_cast<Eigen::Index>(val_rows.size()));
  for (std::size_t i = 0; i < val_rows.size(); ++i) {
    x_val.row(static_cast<Eigen::Index>(i)) = x.row(val_rows[i]);
    y_val[static_cast<Eigen::Index>(i)] = y[val_rows[i]];
  }

  // Adam state
  VecX m = VecX::Zero(params_.size());
  VecX v = VecX::Zero(params_.size());
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  long step = 0;

  const Eigen::Index nt = x_train.rows();
  const int batch = std::max(1, std::min<int>(opt.batch, static_cast<int>(nt)));
  std::vector<std::size_t> order(static_cast<std::size_t>(nt));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto val_accuracy = [&]() {
    if (x_val.rows() == 0) return 0.0;
    const VecX s = score_all(x_val);
    Eigen::Index ok = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if ((s[i] >= 0.5 ? 1 : 0) == y_val[i]) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(s.size());
  };

  VecX best_params = params_;
  double best_score = -1.0;
  int stall = 0;
  MatX xb;
  VecXi yb;
  VecX grad;

  epochs_run_ = 0;
  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (Eigen::Index start = 0; start < nt; start += batch) {
      const Eigen::Index bs = std::min<Eigen::Index>(batch, nt - start);
      xb.resize(bs, d_);
      yb.resize(bs);
      for (Eigen::Index k = 0; k < bs; ++k) {
        xb.row(k) = x_train.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + k)]));
        yb[k] = y_train[static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + k)])];
      }
      mlp_loss_grad(xb, yb, params_, h_, &grad);
      ++step;
      m = beta1 * m + (1.0 - beta1) * grad;
      v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
      const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      params_ -= (opt.learning_rate / bc1) *
                 (m.array() / ((v.array() / bc2).sqrt() + adam_eps)).matrix();
    }
    ++epochs_run_;

    if (opt.early_stopping && x_val.rows() > 0) {
      const double acc = val_accuracy();
      if (acc > best_score + opt.tol) {
        best_score = acc;
        best_params = params_;
        stall = 0;
      } else if (++stall >= opt.patience) {
        break;
      }
    }
  }
  if (opt.early_stopping && best_score >= 0.0) params_ = best_params;
}

double MlpModel::score(const VecX& x) const {
  const ParamView p = view(params_, d_, h_);
  const VecX h = (p.w1 * x + p.b1).cwiseMax(0.0);
  const double z = p.w2.dot(h) + p.b2;
  return 1.0 / (1.0 + std::exp(-z));
}

VecX MlpModel::score_all(const MatX& x) const {
  const ParamView p = view(params_, d_, h_);
  MatX z1 = x * p.w1.transpose();
  z1.rowwise() += p.b1.transpose();
  VecX z2 = z1.cwiseMax(0.0) * p.w2;
  z2.array() += p.b2;
  return (1.0 / (1.0 + (-z2.array()).exp())).matrix();
}

void MlpModel::restore(VecX params, int d, int h) {
  if (params.size() != param_count(d, h)) {
    throw ValidationError("mlp parameter vector size mismatch");
  }
  params_ = std::move(params);
  d_ = d;
  h_ = h;
}

}  // namespace crashdet::learn
