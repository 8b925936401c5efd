#include "crashdet/learn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "crashdet/core/random.hpp"
#include "crashdet/learn/baseline.hpp"
#include "crashdet/learn/ensembles.hpp"
#include "crashdet/learn/mlp.hpp"
#include "crashdet/learn/svm.hpp"

namespace crashdet::learn {

void BaselineModel::fit(const MatX& x, const VecXi& y, const Options& opt) {
  require_two_classes(y);
  if (opt.feature < 0 || opt.feature >= x.cols()) {
    throw ValidationError("baseline feature index out of range");
  }
  feature_ = opt.feature;
  n_features_ = static_cast<int>(x.cols());

  const Eigen::Index n = x.rows();
  std::vector<std::pair<double, int>> mag(static_cast<std::size_t>(n));
  double total_pos = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mag[static_cast<std::size_t>(i)] = {std::abs(x(i, feature_)), y[i]};
    total_pos += y[i];
  }
  std::sort(mag.begin(), mag.end(), std::greater<>());

  // sweep the 1-D threshold grid (midpoints between distinct magnitudes)
  double best_f1 = -1.0, best_thr = mag.front().first + 1.0;
  double tp = 0.0, fp = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    tp += mag[k].second;
    fp += 1.0 - mag[k].second;
    if (k + 1 < mag.size() && mag[k + 1].first == mag[k].first) continue;
    const double fn = total_pos - tp;
    const double f1 = 2.0 * tp / std::max(2.0 * tp + fp + fn, 1e-12);
    if (f1 > best_f1) {
      best_f1 = f1;
      best_thr = k + 1 < mag.size() ? 0.5 * (mag[k].first + mag[k + 1].first) : mag[k].first;
    }
  }
  threshold_ = best_thr;
}

std::optional<ModelKind> parse_kind(const std::string& name) {
  for (ModelKind k : {ModelKind::Baseline, ModelKind::AdaBoost, ModelKind::GradientBoost,
                      ModelKind::RandomForest, ModelKind::Svm, ModelKind::Mlp}) {
    if (name == kind_name(k)) return k;
  }
  return std::nullopt;
}

ModelSpec default_spec(ModelKind kind, std::uint64_t seed) {
  ModelSpec s;
  s.kind = kind;
  s.seed = seed;
  switch (kind) {
    case ModelKind::Baseline:
      s.hyper["feature"] = 13;  // fs_lin_acc
      break;
    case ModelKind::AdaBoost:
      s.hyper["n_learners"] = 80;
      s.hyper["max_depth"] = 2;
      s.hyper["learning_rate"] = 0.6;
      s.choices["algorithm"] = "SAMME";
      break;
    case ModelKind::GradientBoost:
      s.hyper["n_learners"] = 80;
      s.hyper["max_depth"] = 10;
      s.hyper["learning_rate"] = 0.5;
      s.hyper["min_samples_leaf"] = 8;
      s.choices["loss"] = "exponential";
      break;
    case ModelKind::RandomForest:
      s.hyper["n_learners"] = 45;
      s.hyper["max_depth"] = 17;
      s.hyper["min_samples_leaf"] = 1;
      s.choices["criterion"] = "entropy";
      break;
    case ModelKind::Svm:
      s.hyper["C"] = 120.0;
      s.hyper["tol"] = 1e-3;
      s.hyper["max_train_samples"] = 20000;
      s.choices["gamma"] = "auto";
      break;
    case ModelKind::Mlp:
      s.hyper["hidden"] = 220;
      s.hyper["learning_rate"] = 0.002;
      s.hyper["tol"] = 3e-4;
      s.hyper["early_stopping"] = 1;
      s.hyper["batch"] = 200;
      s.hyper["max_epochs"] = 200;
      break;
  }
  return s;
}

void ModelSpec::validate() const {
  std::string bad;
  auto positive = [&](const char* name) {
    auto it = hyper.find(name);
    if (it != hyper.end() && !(it->second > 0.0)) {
      bad += std::string(name) + " must be > 0; ";
    }
  };
  switch (kind) {
    case ModelKind::AdaBoost:
    case ModelKind::GradientBoost:
      positive("n_learners");
      positive("max_depth");
      positive("learning_rate");
      break;
    case ModelKind::RandomForest:
      positive("n_learners");
      positive("max_depth");
      break;
    case ModelKind::Svm:
      positive("C");
      positive("tol");
      break;
    case ModelKind::Mlp:
      positive("hidden");
      positive("learning_rate");
      positive("tol");
      break;
    case ModelKind::Baseline:
      break;
  }
  if (!bad.empty()) {
    throw ValidationError(std::string("model spec (") + kind_name(kind) + "): " + bad);
  }
}

std::string dataset_hash(const MatX& x, const VecXi& y) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  mix(static_cast<std::uint64_t>(x.rows()));
  mix(static_cast<std::uint64_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::uint64_t bits;
    const double v = x.data()[i];
    std::memcpy(&bits, &v, sizeof(bits));
    mix(bits);
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) mix(static_cast<std::uint64_t>(y[i]));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelArtifact train_on_frames(const ModelSpec& spec, const MatX& x, const VecXi& y,
                              const std::vector<int>& groups) {
  spec.validate();
  require_two_classes(y);
  const auto t0 = std::chrono::steady_clock::now();

  ModelArtifact art;
  art.spec = spec;
  art.standardizer.fit(x);
  art.data_hash = dataset_hash(x, y);

  switch (spec.kind) {
    case ModelKind::Baseline: {
      auto m = std::make_shared<BaselineModel>();
      BaselineModel::Options o;
      o.feature = static_cast<int>(spec.hyper_or("feature", 13));
      m->fit(x, y, o);
      art.model = std::move(m);
      break;
    }
    case ModelKind::AdaBoost: {
      auto m = std::make_shared<AdaBoostModel>();
      AdaBoostModel::Options o;
      o.n_learners = static_cast<int>(spec.hyper_or("n_learners", 80));
      o.max_depth = static_cast<int>(spec.hyper_or("max_depth", 2));
      o.learning_rate = spec.hyper_or("learning_rate", 0.6);
      m->fit(x, y, o);
      art.model = std::move(m);
      break;
    }
    case ModelKind::GradientBoost: {
      auto m = std::make_shared<GradientBoostModel>();
      GradientBoostModel::Options o;
      o.n_learners = static_cast<int>(spec.hyper_or("n_learners", 80));
      o.max_depth = static_cast<int>(spec.hyper_or("max_depth", 10));
      o.learning_rate = spec.hyper_or("learning_rate", 0.5);
      o.min_samples_leaf = static_cast<int>(spec.hyper_or("min_samples_leaf", 1));
      if (spec.choice_or("loss", "exponential") != "exponential") {
        throw ValidationError("gboost: only the exponential loss is implemented");
      }
      m->fit(x, y, o);
      art.model = std::move(m);
      break;
    }
    case ModelKind::RandomForest: {
      auto m = std::make_shared<RandomForestModel>();
      RandomForestModel::Options o;
      o.n_learners = static_cast<int>(spec.hyper_or("n_learners", 45));
      o.max_depth = static_cast<int>(spec.hyper_or("max_depth", 17));
      o.min_samples_leaf = static_cast<int>(spec.hyper_or("min_samples_leaf", 1));
      o.bootstrap = spec.hyper_or("bootstrap", 1) != 0;
      o.max_features = static_cast<int>(spec.hyper_or("max_features", -2));
      o.criterion = spec.choice_or("criterion", "entropy") == "gini"
                        ? DecisionTree::Criterion::Gini
                        : DecisionTree::Criterion::Entropy;
      o.seed = spec.seed;
      m->fit(x, y, o);
      art.model = std::move(m);
      break;
    }
    case ModelKind::Svm: {
      auto m = std::make_shared<SvmModel>();
      SvmModel::Options o;
      o.c = spec.hyper_or("C", 120.0);
      o.tol = spec.hyper_or("tol", 1e-3);
      o.gamma = spec.choice_or("gamma", "auto") == "auto" ? -1.0 : spec.hyper_or("gamma", -1.0);
      o.seed = spec.seed;

      const MatX xs = art.standardizer.apply(x);
      const auto cap = static_cast<Eigen::Index>(spec.hyper_or("max_train_samples", 0));
      if (cap > 0 && x.rows() > cap) {
        // deterministic stratified thinning to keep the dual tractable
        Rng rng(derive_seed(spec.seed, fnv1a64("svm-subsample")));
        std::vector<std::size_t> idx = rng.permutation(static_cast<std::size_t>(x.rows()));
        idx.resize(static_cast<std::size_t>(cap));
        std::sort(idx.begin(), idx.end());
        MatX xsub(cap, x.cols());
        VecXi ysub(cap);
        for (Eigen::Index i = 0; i < cap; ++i) {
          xsub.row(i) = xs.row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]));
          ysub[i] = y[static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)])];
        }
        m->fit(xsub, ysub, o);
      } else {
        m->fit(xs, y, o);
      }
      art.model = std::move(m);
      art.standardize_inputs = true;
      break;
    }
    case ModelKind::Mlp: {
      auto m = std::make_shared<MlpModel>();
      MlpModel::Options o;
      o.hidden = static_cast<int>(spec.hyper_or("hidden", 220));
      o.learning_rate = spec.hyper_or("learning_rate", 0.002);
      o.tol = spec.hyper_or("tol", 3e-4);
      o.early_stopping = spec.hyper_or("early_stopping", 1) != 0;
      o.batch = static_cast<int>(spec.hyper_or("batch", 200));
      o.max_epochs = static_cast<int>(spec.hyper_or("max_epochs", 200));
      o.patience = static_cast<int>(spec.hyper_or("patience", 10));
      o.seed = spec.seed;
      m->fit(art.standardizer.apply(x), y, groups, o);
      art.model = std::move(m);
      art.standardize_inputs = true;
      break;
    }
  }

  art.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return art;
}

ModelArtifact train(const ModelSpec& spec, const telemetry::SignalDataset& train_ds) {
  const telemetry::FrameMatrix fm = flatten(train_ds);
  std::vector<int> groups(fm.scenario_of.size());
  {
    std::map<std::string, int> ids;
    for (std::size_t i = 0; i < fm.scenario_of.size(); ++i) {
      auto [it, inserted] = ids.emplace(fm.scenario_of[i], static_cast<int>(ids.size()));
      groups[i] = it->second;
    }
  }
  return train_on_frames(spec, fm.x, fm.y, groups);
}

}  // namespace crashdet::learn
