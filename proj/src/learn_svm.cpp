#include "crashdet/learn/svm.hpp"

#include <cmath>
#include <unordered_map>

#include "crashdet/core/random.hpp"

namespace crashdet::learn {

namespace {

// On-demand RBF kernel rows with a bounded cache.
class KernelCache {
 public:
  KernelCache(const MatX& x, double gamma, std::size_t max_rows)
      : x_(x), gamma_(gamma), max_rows_(max_rows) {
    sq_ = x.rowwise().squaredNorm();
  }

  const VecX& row(Eigen::Index i) {
    auto it = cache_.find(i);
    if (it != cache_.end()) return it->second;
    if (cache_.size() >= max_rows_) {
      cache_.erase(cache_.begin());  // arbitrary eviction; reuse is local anyway
    }
    VecX k = (-(gamma_ * (sq_.array() - 2.0 * (x_ * x_.row(i).transpose()).array() + sq_[i])))
                 .exp()
                 .matrix();
    return cache_.emplace(i, std::move(k)).first->second;
  }

 private:
  const MatX& x_;
  double gamma_;
  std::size_t max_rows_;
  VecX sq_;
  std::unordered_map<Eigen::Index, VecX> cache_;
};

}  // namespace

void SvmModel::fit(const MatX& x, const VecXi& y01, const Options& opt) {
  require_two_classes(y01);
  const Eigen::Index n = x.rows();
  n_features_ = static_cast<int>(x.cols());
  gamma_ = opt.gamma > 0.0 ? opt.gamma : 1.0 / static_cast<double>(x.cols());
  const double c = opt.c;
  const double tol = opt.tol;
  const double eps = 1e-12;

  VecX y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = y01[i] != 0 ? 1.0 : -1.0;

  VecX alpha = VecX::Zero(n);
  VecX err = -y;  // E_i = f(x_i) - y_i with f = 0 initially
  double b = 0.0;

  const std::size_t cache_rows =
      std::min<std::size_t>(static_cast<std::size_t>(n), 100'000'000 / (static_cast<std::size_t>(n) * 8) + 8);
  KernelCache kernel(x, gamma_, cache_rows);
  Rng rng(opt.seed);
  steps_ = 0;

  auto take_step = [&](Eigen::Index i1, Eigen::Index i2) -> bool {
    if (i1 == i2) return false;
    const double a1_old = alpha[i1], a2_old = alpha[i2];
    const double y1 = y[i1], y2 = y[i2];
    const double e1 = err[i1], e2 = err[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (s < 0.0) {
      lo = std::max(0.0, a2_old - a1_old);
      hi = std::min(c, c + a2_old - a1_old);
    } else {
      lo = std::max(0.0, a1_old + a2_old - c);
      hi = std::min(c, a1_old + a2_old);
    }
    if (lo >= hi) return false;

    const VecX& k1 = kernel.row(i1);
    const VecX& k2 = kernel.row(i2);
    const double eta = k1[i1] + k2[i2] - 2.0 * k1[i2];
    if (eta <= 0.0) return false;  // RBF gram is PSD; this is a duplicate point

    double a2 = a2_old + y2 * (e1 - e2) / eta;
    a2 = std::clamp(a2, lo, hi);
    if (std::abs(a2 - a2_old) < eps * (a2 + a2_old + eps)) return false;
    const double a1 = a1_old + s * (a2_old - a2);

    const double d1 = y1 * (a1 - a1_old);
    const double d2 = y2 * (a2 - a2_old);
    const double b1 = e1 + d1 * k1[i1] + d2 * k1[i2] + b;
    const double b2 = e2 + d1 * k1[i2] + d2 * k2[i2] + b;
    double b_new;
    if (a1 > eps && a1 < c - eps) {
      b_new = b1;
    } else if (a2 > eps && a2 < c - eps) {
      b_new = b2;
    } else {
      b_new = 0.5 * (b1 + b2);
    }

    err += d1 * k1 + d2 * k2;
    err.array() += b - b_new;  // f subtracts the threshold
    // free updated multipliers sit exactly on the margin
    if (a1 > eps && a1 < c - eps) err[i1] = 0.0;
    if (a2 > eps && a2 < c - eps) err[i2] = 0.0;
    alpha[i1] = a1;
    alpha[i2] = a2;
    b = b_new;
    ++steps_;
    return true;
  };

  auto examine = [&](Eigen::Index i2) -> bool {
    const double y2 = y[i2], a2 = alpha[i2], e2 = err[i2];
    const double r2 = e2 * y2;
    if (!((r2 < -tol && a2 < c - eps) || (r2 > tol && a2 > eps))) return false;

    // heuristic 1: maximal |E1 - E2| over free multipliers
    Eigen::Index best = -1;
    double best_gap = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (alpha[i] > eps && alpha[i] < c - eps) {
        const double gap = std::abs(err[i] - e2);
        if (gap > best_gap) {
          best_gap = gap;
          best = i;
        }
      }
    }
    if (best >= 0 && take_step(best, i2)) return true;

    // heuristic 2: sweep free multipliers from a random start
    const Eigen::Index start = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(n)));
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index i = (start + k) % n;
      if (alpha[i] > eps && alpha[i] < c - eps && take_step(i, i2)) return true;
    }
    // heuristic 3: sweep everything
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index i = (start + k) % n;
      if (take_step(i, i2)) return true;
    }
    return false;
  };

  bool examine_all = true;
  int changed = 0;
  while (changed > 0 || examine_all) {
    changed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!examine_all && !(alpha[i] > eps && alpha[i] < c - eps)) continue;
      if (examine(i)) ++changed;
      if (steps_ > opt.max_steps) {
        throw TrainingError("svm did not converge within " + std::to_string(opt.max_steps) +
                            " pairwise updates (n=" + std::to_string(n) + ")");
      }
    }
    examine_all = examine_all ? false : changed == 0;
  }

  // KKT residual on the maintained decision values
  kkt_residual_ = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double margin = y[i] * (err[i] + y[i]);  // y_i * f(x_i)
    double viol;
    if (alpha[i] <= eps) {
      viol = std::max(0.0, 1.0 - margin);
    } else if (alpha[i] >= c - eps) {
      viol = std::max(0.0, margin - 1.0);
    } else {
      viol = std::abs(margin - 1.0);
    }
    kkt_residual_ = std::max(kkt_residual_, viol);
  }

  // collect support vectors
  std::vector<Eigen::Index> sv_idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (alpha[i] > 1e-10) sv_idx.push_back(i);
  }
  sv_.resize(static_cast<Eigen::Index>(sv_idx.size()), x.cols());
  coef_.resize(static_cast<Eigen::Index>(sv_idx.size()));
  for (std::size_t k = 0; k < sv_idx.size(); ++k) {
    sv_.row(static_cast<Eigen::Index>(k)) = x.row(sv_idx[k]);
    coef_[static_cast<Eigen::Index>(k)] = alpha[sv_idx[k]] * y[sv_idx[k]];
  }
  bias_ = -b;  // f(x) = sum coef K(sv, x) - b

  // Platt calibration of decision values to probabilities
  {
    VecX dec(n);
    for (Eigen::Index i = 0; i < n; ++i) dec[i] = err[i] + y[i];
    double n_pos = 0.0, n_neg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) (y[i] > 0 ? n_pos : n_neg) += 1.0;
    const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
    const double t_neg = 1.0 / (n_neg + 2.0);

    double a_fit = 0.0, b_fit = std::log((n_neg + 1.0) / (n_pos + 1.0));
    for (int it = 0; it < 100; ++it) {
      double g_a = 0.0, g_b = 0.0, h_aa = 1e-12, h_ab = 0.0, h_bb = 1e-12;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double t = y[i] > 0 ? t_pos : t_neg;
        const double z = a_fit * dec[i] + b_fit;
        const double p = 1.0 / (1.0 + std::exp(z));
        const double d = t - p;  // dL/dz (cross-entropy on p)
        g_a += d * dec[i];
        g_b += d;
        const double w = p * (1.0 - p);
        h_aa += w * dec[i] * dec[i];
        h_ab += w * dec[i];
        h_bb += w;
      }
      const double det = h_aa * h_bb - h_ab * h_ab;
      const double da = (h_bb * g_a - h_ab * g_b) / det;
      const double db = (h_aa * g_b - h_ab * g_a) / det;
      a_fit -= da;
      b_fit -= db;
      if (std::abs(da) + std::abs(db) < 1e-10) break;
    }
    platt_a_ = a_fit;
    platt_b_ = b_fit;
  }
}

void SvmModel::restore(MatX sv, VecX coef, double bias, double gamma, double platt_a,
                       double platt_b, int n_features) {
  sv_ = std::move(sv);
  coef_ = std::move(coef);
  bias_ = bias;
  gamma_ = gamma;
  platt_a_ = platt_a;
  platt_b_ = platt_b;
  n_features_ = n_features;
}

}  // namespace crashdet::learn
