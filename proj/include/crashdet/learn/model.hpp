#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/types.hpp"
#include "crashdet/dataprep/dataprep.hpp"

namespace crashdet::learn {

enum class ModelKind { Baseline, AdaBoost, GradientBoost, RandomForest, Svm, Mlp };

inline const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Baseline: return "baseline";
    case ModelKind::AdaBoost: return "adaboost";
    case ModelKind::GradientBoost: return "gboost";
    case ModelKind::RandomForest: return "rforest";
    case ModelKind::Svm: return "svm";
    case ModelKind::Mlp: return "mlp";
  }
  return "?";
}

std::optional<ModelKind> parse_kind(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::Baseline;
  std::map<std::string, double> hyper;
  std::map<std::string, std::string> choices;  // non-numeric knobs
  std::uint64_t seed = 0;

  double hyper_or(const std::string& name, double fallback) const {
    auto it = hyper.find(name);
    return it == hyper.end() ? fallback : it->second;
  }
  std::string choice_or(const std::string& name, const std::string& fallback) const {
    auto it = choices.find(name);
    return it == choices.end() ? fallback : it->second;
  }
  void validate() const;
};

// Table-of-record hyperparameters per kind.
ModelSpec default_spec(ModelKind kind, std::uint64_t seed = 0);

inline void require_two_classes(const VecXi& y) {
  bool has0 = false, has1 = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    (y[i] != 0 ? has1 : has0) = true;
  }
  if (!has0 || !has1) throw TrainingError("training data contains a single class");
}

// Frame classifier: monotone crash confidence in [0, 1].
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual double score(const VecX& x) const = 0;
  virtual int feature_count() const = 0;

  virtual VecX score_all(const MatX& x) const {
    VecX s(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) s[i] = score(x.row(i).transpose());
    return s;
  }
};

// A trained model plus everything inference needs: the fitted parameters and
// the standardizer the training run produced.
struct ModelArtifact {
  ModelSpec spec;
  std::shared_ptr<const Classifier> model;
  dataprep::Standardizer standardizer;
  bool standardize_inputs = false;  // svm/mlp operate on standardized features
  std::string data_hash;
  std::string config_hash;
  double train_seconds = 0.0;

  double score(const VecX& raw) const {
    if (!model) throw ValidationError("artifact has no trained model");
    if (raw.size() != model->feature_count()) {
      throw ValidationError("frame has " + std::to_string(raw.size()) + " features, model expects " +
                            std::to_string(model->feature_count()));
    }
    return model->score(standardize_inputs ? standardizer.apply_row(raw) : raw);
  }

  VecX score_all(const MatX& raw) const {
    if (!model) throw ValidationError("artifact has no trained model");
    if (raw.cols() != model->feature_count()) {
      throw ValidationError("frames have " + std::to_string(raw.cols()) +
                            " features, model expects " + std::to_string(model->feature_count()));
    }
    return model->score_all(standardize_inputs ? standardizer.apply(raw) : raw);
  }

  // ties go positive
  int classify(const VecX& raw, double cutoff = 0.5) const {
    return score(raw) >= cutoff ? 1 : 0;
  }
};

}  // namespace crashdet::learn
