#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "crashdet/core/random.hpp"
#include "crashdet/learn/baseline.hpp"
#include "crashdet/learn/serialize.hpp"
#include "crashdet/learn/train.hpp"

using namespace crashdet;
using namespace crashdet::learn;

namespace {

constexpr ModelKind kAllKinds[] = {ModelKind::Baseline,     ModelKind::AdaBoost,
                                   ModelKind::GradientBoost, ModelKind::RandomForest,
                                   ModelKind::Svm,           ModelKind::Mlp};

// tiny SignalDataset with a crash signature on a couple of channels
telemetry::SignalDataset toy_dataset(int n_scenarios, int frames_per, std::uint64_t seed) {
  telemetry::SignalDataset ds;
  Rng rng(seed);
  for (int s = 0; s < n_scenarios; ++s) {
    telemetry::ScenarioFrames f;
    const bool crash = s % 2 == 1;
    f.scenario_id = (crash ? "B1-" : "A1-") + std::to_string(s);
    f.set_id = crash ? "B.1" : "A.1";
    f.time.resize(frames_per);
    f.features = MatX::Zero(frames_per, telemetry::kNumChannels);
    f.labels = VecXi::Zero(frames_per);
    const int flip = frames_per / 2;
    for (int i = 0; i < frames_per; ++i) {
      f.time[i] = i / 2000.0;
      for (int c = 0; c < telemetry::kNumChannels - 2; ++c) {
        f.features(i, c) = 0.3 * rng.normal();
      }
      if (crash && i >= flip) {
        f.labels[i] = 1;
        f.features(i, 1) -= 80.0 + 10.0 * rng.normal();   // body decel
        f.features(i, 13) += 60.0 + 10.0 * rng.normal();  // fork acc
        f.features(i, 17) += 3000.0;                      // front wheel force
      }
    }
    ds.scenarios.push_back(std::move(f));
  }
  return ds;
}

// 2-feature toys embedded into the 23-channel frame layout
telemetry::SignalDataset embed_2d(const MatX& x, const VecXi& y) {
  telemetry::SignalDataset ds;
  telemetry::ScenarioFrames pos, neg;
  pos.scenario_id = "B1-x";
  pos.set_id = "B.1";
  neg.scenario_id = "A1-x";
  neg.set_id = "A.1";
  std::vector<int> pos_rows, neg_rows;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    (y[i] ? pos_rows : neg_rows).push_back(static_cast<int>(i));
  }
  auto fill = [&](telemetry::ScenarioFrames& f, const std::vector<int>& rows, int label) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    f.time.resize(n);
    f.features = MatX::Zero(n, telemetry::kNumChannels);
    f.labels = VecXi::Constant(n, label);
    for (Eigen::Index k = 0; k < n; ++k) {
      f.time[k] = static_cast<double>(k) / 2000.0;
      f.features(k, 0) = x(rows[static_cast<std::size_t>(k)], 0);
      f.features(k, 1) = x(rows[static_cast<std::size_t>(k)], 1);
    }
  };
  fill(pos, pos_rows, 1);
  fill(neg, neg_rows, 0);
  ds.scenarios.push_back(std::move(neg));
  ds.scenarios.push_back(std::move(pos));
  return ds;
}

double train_accuracy(const ModelArtifact& art, const telemetry::SignalDataset& ds) {
  Eigen::Index ok = 0, total = 0;
  for (const auto& s : ds.scenarios) {
    const VecX scores = art.score_all(s.features);
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
      if ((scores[i] >= 0.5 ? 1 : 0) == s.labels[i]) ++ok;
      ++total;
    }
  }
  return static_cast<double>(ok) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("documented default hyperparameters per kind") {
  const auto ada = default_spec(ModelKind::AdaBoost);
  CHECK(ada.hyper.at("n_learners") == 80);
  CHECK(ada.hyper.at("max_depth") == 2);
  CHECK(ada.hyper.at("learning_rate") == 0.6);
  CHECK(ada.choices.at("algorithm") == "SAMME");

  const auto gb = default_spec(ModelKind::GradientBoost);
  CHECK(gb.hyper.at("n_learners") == 80);
  CHECK(gb.hyper.at("max_depth") == 10);
  CHECK(gb.hyper.at("learning_rate") == 0.5);
  CHECK(gb.choices.at("loss") == "exponential");

  const auto rf = default_spec(ModelKind::RandomForest);
  CHECK(rf.hyper.at("n_learners") == 45);
  CHECK(rf.hyper.at("max_depth") == 17);
  CHECK(rf.choices.at("criterion") == "entropy");

  const auto svm = default_spec(ModelKind::Svm);
  CHECK(svm.hyper.at("C") == 120.0);
  CHECK(svm.choices.at("gamma") == "auto");

  const auto mlp = default_spec(ModelKind::Mlp);
  CHECK(mlp.hyper.at("hidden") == 220);
  CHECK(mlp.hyper.at("learning_rate") == 0.002);
  CHECK(mlp.hyper.at("tol") == 3e-4);
  CHECK(mlp.hyper.at("early_stopping") == 1);
}

TEST_CASE("invalid hyperparameters are rejected") {
  auto spec = default_spec(ModelKind::GradientBoost);
  spec.hyper["learning_rate"] = -0.1;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("every kind reaches full training accuracy on separable toy data") {
  Rng rng(77);
  MatX x(300, 2);
  VecXi y(300);
  for (int i = 0; i < 300; ++i) {
    const bool pos = i % 2 == 0;
    // feature 0 separates by magnitude (the baseline thresholds on |value|),
    // feature 1 by sign
    x(i, 0) = pos ? (i % 4 == 0 ? 5.0 : -5.0) + 0.3 * rng.normal() : 0.2 * rng.normal();
    x(i, 1) = (pos ? 2.0 : -2.0) + 0.3 * rng.normal();
    y[i] = pos;
  }
  auto ds = embed_2d(x, y);

  for (ModelKind kind : kAllKinds) {
    ModelSpec spec = default_spec(kind, 5);
    // toy scale: few rows per epoch, so smaller batches and a hotter rate
    if (kind == ModelKind::Mlp) {
      spec.hyper["hidden"] = 12;
      spec.hyper["max_epochs"] = 200;
      spec.hyper["batch"] = 32;
      spec.hyper["learning_rate"] = 0.01;
    }
    if (kind == ModelKind::Baseline) spec.hyper["feature"] = 0;
    const auto art = train(spec, ds);
    CHECK_MESSAGE(train_accuracy(art, ds) == doctest::Approx(1.0), kind_name(kind));
  }
}

TEST_CASE("xor: single-threshold models fail, flexible models succeed") {
  Rng rng(3);
  MatX x(400, 2);
  VecXi y(400);
  for (int i = 0; i < 400; ++i) {
    const int ax = i % 2, bx = (i / 2) % 2;
    x(i, 0) = ax + 0.08 * rng.normal();
    x(i, 1) = bx + 0.08 * rng.normal();
    y[i] = ax ^ bx;
  }
  auto ds = embed_2d(x, y);

  ModelSpec base = default_spec(ModelKind::Baseline);
  base.hyper["feature"] = 0;
  CHECK(train_accuracy(train(base, ds), ds) < 0.75);

  for (ModelKind kind : {ModelKind::Mlp, ModelKind::GradientBoost, ModelKind::RandomForest}) {
    ModelSpec spec = default_spec(kind, 2);
    if (kind == ModelKind::Mlp) {
      spec.hyper["hidden"] = 32;
      spec.hyper["max_epochs"] = 400;
      spec.hyper["batch"] = 32;
      spec.hyper["learning_rate"] = 0.01;
      spec.hyper["patience"] = 40;
    }
    if (kind == ModelKind::RandomForest) {
      // the toy embeds 2 live channels among 21 dead ones; per-node sqrt
      // sampling would mostly draw dead columns
      spec.hyper["max_features"] = -1;
    }
    CHECK_MESSAGE(train_accuracy(train(spec, ds), ds) > 0.95, kind_name(kind));
  }
}

TEST_CASE("baseline finds a threshold between separable classes") {
  MatX x(6, 1);
  x << 0.1, 0.2, 0.3, 5.0, 6.0, 7.0;
  VecXi y(6);
  y << 0, 0, 0, 1, 1, 1;
  BaselineModel m;
  BaselineModel::Options opt;
  opt.feature = 0;
  m.fit(x, y, opt);
  CHECK(m.threshold() > 0.3);
  CHECK(m.threshold() <= 5.0);
  VecX probe(1);
  probe << 0.25;
  CHECK(m.score(probe) == 0.0);
  probe << 5.5;
  CHECK(m.score(probe) == 1.0);
}

TEST_CASE("classify: tie goes positive, cutoff 1.0 needs a full score") {
  auto ds = toy_dataset(4, 40, 1);
  ModelSpec spec = default_spec(ModelKind::Baseline, 1);
  const auto art = train(spec, ds);

  // baseline scores are exactly 0 or 1
  VecX frame = VecX::Zero(telemetry::kNumChannels);
  frame[13] = 1e9;
  CHECK(art.classify(frame, 0.5) == 1);
  CHECK(art.classify(frame, 1.0) == 1);
  frame[13] = 0.0;
  CHECK(art.classify(frame, 1.0) == 0);
}

TEST_CASE("wrong feature count raises a schema error") {
  auto ds = toy_dataset(4, 40, 2);
  const auto art = train(default_spec(ModelKind::Baseline, 1), ds);
  CHECK_THROWS_AS(static_cast<void>(art.score(VecX::Zero(22))), ValidationError);
}

TEST_CASE("single-class dataset raises a training error") {
  telemetry::SignalDataset ds;
  auto all = toy_dataset(4, 30, 3);
  for (auto& s : all.scenarios) {
    if (s.set_id == "A.1") ds.scenarios.push_back(s);
  }
  CHECK_THROWS_AS(static_cast<void>(train(default_spec(ModelKind::RandomForest, 1), ds)),
                  TrainingError);
}

TEST_CASE("mlp artifact scoring is deterministic across training runs") {
  auto ds = toy_dataset(6, 60, 4);
  ModelSpec spec = default_spec(ModelKind::Mlp, 9);
  spec.hyper["hidden"] = 10;
  spec.hyper["max_epochs"] = 30;
  const auto a = train(spec, ds);
  const auto b = train(spec, ds);
  VecX frame = VecX::Zero(telemetry::kNumChannels);
  CHECK(a.score(frame) == b.score(frame));
}

TEST_CASE("artifacts round-trip through the serialized file") {
  auto ds = toy_dataset(6, 50, 5);
  const auto dir = std::filesystem::temp_directory_path() / "crashdet_artifact_test";
  std::filesystem::create_directories(dir);

  Rng rng(31);
  for (ModelKind kind : kAllKinds) {
    ModelSpec spec = default_spec(kind, 11);
    if (kind == ModelKind::Mlp) {
      spec.hyper["hidden"] = 8;
      spec.hyper["max_epochs"] = 20;
    }
    if (kind == ModelKind::AdaBoost || kind == ModelKind::GradientBoost ||
        kind == ModelKind::RandomForest) {
      spec.hyper["n_learners"] = 10;
    }
    ModelArtifact art = train(spec, ds);
    art.config_hash = "cfg123";
    const auto file = dir / (std::string(kind_name(kind)) + ".json");
    save_artifact(art, file);
    const ModelArtifact back = load_artifact(file);

    CHECK(back.spec.kind == kind);
    CHECK(back.config_hash == "cfg123");
    CHECK(back.data_hash == art.data_hash);
    for (int t = 0; t < 20; ++t) {
      VecX frame(telemetry::kNumChannels);
      for (Eigen::Index c = 0; c < frame.size(); ++c) frame[c] = 5.0 * rng.normal();
      CHECK(back.score(frame) == art.score(frame));
    }
  }
  std::filesystem::remove_all(dir);
}
