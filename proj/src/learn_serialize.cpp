#include "crashdet/learn/serialize.hpp"

#include <fstream>

#include <json.hpp>

#include "crashdet/learn/baseline.hpp"
#include "crashdet/learn/ensembles.hpp"
#include "crashdet/learn/mlp.hpp"
#include "crashdet/learn/svm.hpp"
#include "crashdet/learn/train.hpp"

namespace crashdet::learn {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json vec_to_json(const VecX& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

VecX vec_from_json(const json& a) {
  VecX v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json mat_to_json(const MatX& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(vec_to_json(m.row(i).transpose()));
  }
  return rows;
}

MatX mat_from_json(const json& rows, Eigen::Index cols_hint = 0) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  if (r == 0) return MatX(0, cols_hint);
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  MatX m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

json tree_to_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes()) {
    nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
  }
  return nodes;
}

DecisionTree tree_from_json(const json& nodes, int n_features) {
  std::vector<TreeNode> v;
  v.reserve(nodes.size());
  for (const auto& jn : nodes) {
    TreeNode n;
    n.feature = jn[0].get<int>();
    n.threshold = jn[1].get<double>();
    n.left = jn[2].get<int>();
    n.right = jn[3].get<int>();
    n.value = jn[4].get<double>();
    v.push_back(n);
  }
  DecisionTree t;
  t.set_nodes(std::move(v), n_features);
  return t;
}

json trees_to_json(const std::vector<DecisionTree>& trees) {
  json a = json::array();
  for (const auto& t : trees) a.push_back(tree_to_json(t));
  return a;
}

std::vector<DecisionTree> trees_from_json(const json& a, int n_features) {
  std::vector<DecisionTree> v;
  v.reserve(a.size());
  for (const auto& jt : a) v.push_back(tree_from_json(jt, n_features));
  return v;
}

}  // namespace

void save_artifact(const ModelArtifact& art, const std::filesystem::path& file) {
  if (!art.model) throw ValidationError("cannot save an artifact without a trained model");
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind_name(art.spec.kind);
  j["seed"] = art.spec.seed;
  j["hyper"] = art.spec.hyper;
  j["choices"] = art.spec.choices;
  j["standardize_inputs"] = art.standardize_inputs;
  j["data_hash"] = art.data_hash;
  j["config_hash"] = art.config_hash;
  j["train_seconds"] = art.train_seconds;
  j["n_features"] = art.model->feature_count();
  if (art.standardizer.fitted()) {
    j["standardizer"] = {{"mean", vec_to_json(art.standardizer.mean())},
                         {"sigma", vec_to_json(art.standardizer.sigma())}};
  }

  json p;
  switch (art.spec.kind) {
    case ModelKind::Baseline: {
      const auto& m = dynamic_cast<const BaselineModel&>(*art.model);
      p["threshold"] = m.threshold();
      p["feature"] = m.feature();
      break;
    }
    case ModelKind::AdaBoost: {
      const auto& m = dynamic_cast<const AdaBoostModel&>(*art.model);
      p["trees"] = trees_to_json(m.trees());
      json alphas = json::array();
      for (double a : m.alphas()) alphas.push_back(a);
      p["alphas"] = alphas;
      break;
    }
    case ModelKind::GradientBoost: {
      const auto& m = dynamic_cast<const GradientBoostModel&>(*art.model);
      p["trees"] = trees_to_json(m.trees());
      p["f0"] = m.f0();
      p["learning_rate"] = m.learning_rate();
      break;
    }
    case ModelKind::RandomForest: {
      const auto& m = dynamic_cast<const RandomForestModel&>(*art.model);
      p["trees"] = trees_to_json(m.trees());
      break;
    }
    case ModelKind::Svm: {
      const auto& m = dynamic_cast<const SvmModel&>(*art.model);
      p["support_vectors"] = mat_to_json(m.support_vectors());
      p["dual_coef"] = vec_to_json(m.dual_coef());
      p["bias"] = m.bias();
      p["gamma"] = m.gamma();
      p["platt_a"] = m.platt_a();
      p["platt_b"] = m.platt_b();
      break;
    }
    case ModelKind::Mlp: {
      const auto& m = dynamic_cast<const MlpModel&>(*art.model);
      p["hidden"] = m.hidden_units();
      p["params"] = vec_to_json(m.parameters());
      break;
    }
  }
  j["params"] = std::move(p);

  std::ofstream out(file);
  if (!out) throw ValidationError("cannot open artifact file for writing: " + file.string());
  out << j.dump();
}

ModelArtifact load_artifact(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open artifact file: " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("artifact " + file.string() + ": " + e.what());
  }
  if (j.value("format_version", -1) != kFormatVersion) {
    throw ParseError("artifact " + file.string() + ": unsupported format version");
  }

  ModelArtifact art;
  const auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw ParseError("artifact " + file.string() + ": unknown model kind");
  art.spec.kind = *kind;
  art.spec.seed = j.value("seed", 0ull);
  art.spec.hyper = j.value("hyper", std::map<std::string, double>{});
  art.spec.choices = j.value("choices", std::map<std::string, std::string>{});
  art.standardize_inputs = j.value("standardize_inputs", false);
  art.data_hash = j.value("data_hash", "");
  art.config_hash = j.value("config_hash", "");
  art.train_seconds = j.value("train_seconds", 0.0);
  const int n_features = j.at("n_features").get<int>();
  if (j.contains("standardizer")) {
    art.standardizer.set(vec_from_json(j["standardizer"]["mean"]),
                         vec_from_json(j["standardizer"]["sigma"]));
  }

  const json& p = j.at("params");
  switch (*kind) {
    case ModelKind::Baseline: {
      auto m = std::make_shared<BaselineModel>();
      m->restore(p.at("threshold").get<double>(), p.at("feature").get<int>(), n_features);
      art.model = std::move(m);
      break;
    }
    case ModelKind::AdaBoost: {
      auto m = std::make_shared<AdaBoostModel>();
      std::vector<double> alphas;
      for (const auto& a : p.at("alphas")) alphas.push_back(a.get<double>());
      m->restore(trees_from_json(p.at("trees"), n_features), std::move(alphas), n_features);
      art.model = std::move(m);
      break;
    }
    case ModelKind::GradientBoost: {
      auto m = std::make_shared<GradientBoostModel>();
      m->restore(trees_from_json(p.at("trees"), n_features), p.at("f0").get<double>(),
                 p.at("learning_rate").get<double>(), n_features);
      art.model = std::move(m);
      break;
    }
    case ModelKind::RandomForest: {
      auto m = std::make_shared<RandomForestModel>();
      m->restore(trees_from_json(p.at("trees"), n_features), n_features);
      art.model = std::move(m);
      break;
    }
    case ModelKind::Svm: {
      auto m = std::make_shared<SvmModel>();
      m->restore(mat_from_json(p.at("support_vectors"), n_features),
                 vec_from_json(p.at("dual_coef")), p.at("bias").get<double>(),
                 p.at("gamma").get<double>(), p.at("platt_a").get<double>(),
                 p.at("platt_b").get<double>(), n_features);
      art.model = std::move(m);
      break;
    }
    case ModelKind::Mlp: {
      auto m = std::make_shared<MlpModel>();
      m->restore(vec_from_json(p.at("params")), n_features, p.at("hidden").get<int>());
      art.model = std::move(m);
      break;
    }
  }
  return art;
}

}  // namespace crashdet::learn
