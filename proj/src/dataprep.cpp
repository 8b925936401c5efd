#include "crashdet/dataprep/dataprep.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/random.hpp"

namespace crashdet::dataprep {

using telemetry::kNumChannels;
using telemetry::ScenarioFrames;
using telemetry::SignalDataset;

void Standardizer::fit(const MatX& x) {
  if (x.rows() == 0) throw ValidationError("cannot fit a standardizer on an empty matrix");
  const double n = static_cast<double>(x.rows());
  mean_ = x.colwise().mean();
  MatX centered = x.rowwise() - mean_.transpose();
  sigma_ = (centered.array().square().colwise().sum() / n).sqrt();
  constant_.clear();
  for (Eigen::Index c = 0; c < sigma_.size(); ++c) {
    if (sigma_[c] == 0.0) constant_.push_back(static_cast<int>(c));
  }
  fitted_ = true;
}

void Standardizer::set(VecX mean, VecX sigma) {
  mean_ = std::move(mean);
  sigma_ = std::move(sigma);
  constant_.clear();
  for (Eigen::Index c = 0; c < sigma_.size(); ++c) {
    if (sigma_[c] == 0.0) constant_.push_back(static_cast<int>(c));
  }
  fitted_ = true;
}

MatX Standardizer::apply(const MatX& x) const {
  if (!fitted_) throw ValidationError("standardizer used before fitting");
  if (x.cols() != mean_.size()) throw ValidationError("standardizer feature count mismatch");
  MatX out = x.rowwise() - mean_.transpose();
  for (Eigen::Index c = 0; c < sigma_.size(); ++c) {
    if (sigma_[c] == 0.0) {
      out.col(c).setZero();
    } else {
      out.col(c) /= sigma_[c];
    }
  }
  return out;
}

VecX Standardizer::apply_row(const VecX& row) const {
  if (!fitted_) throw ValidationError("standardizer used before fitting");
  VecX out = row - mean_;
  for (Eigen::Index c = 0; c < sigma_.size(); ++c) {
    out[c] = sigma_[c] == 0.0 ? 0.0 : out[c] / sigma_[c];
  }
  return out;
}

void Standardizer::apply_in_place(SignalDataset& ds) const {
  for (auto& s : ds.scenarios) s.features = apply(s.features);
}

DatasetSplit split_by_simulation(const SignalDataset& ds, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_family;
  for (std::size_t i = 0; i < ds.scenarios.size(); ++i) {
    by_family[ds.scenarios[i].set_id].push_back(i);
  }

  DatasetSplit split;
  split.seed = seed;
  Rng rng(derive_seed(seed, fnv1a64("split")));
  for (auto& [family, idx] : by_family) {
    if (family == "B.3") {
      for (auto i : idx) split.test.scenarios.push_back(ds.scenarios[i]);
      continue;
    }
    rng.shuffle(idx);
    const std::size_t n_train = idx.size() / 2;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      auto& dst = k < n_train ? split.train : split.test;
      dst.scenarios.push_back(ds.scenarios[idx[k]]);
    }
  }
  auto by_id = [](const ScenarioFrames& a, const ScenarioFrames& b) {
    return a.scenario_id < b.scenario_id;
  };
  std::sort(split.train.scenarios.begin(), split.train.scenarios.end(), by_id);
  std::sort(split.test.scenarios.begin(), split.test.scenarios.end(), by_id);
  split.train_counts = split.train.class_counts();
  split.test_counts = split.test.class_counts();
  validate_split(split);
  return split;
}

void validate_split(const DatasetSplit& split) {
  for (const auto& s : split.train.scenarios) {
    if (s.set_id == "B.3") {
      throw ValidationError("B.3 scenario '" + s.scenario_id +
                            "' may not be used for training");
    }
    if (split.test.find(s.scenario_id) != nullptr) {
      throw ValidationError("scenario '" + s.scenario_id + "' appears in both split halves");
    }
  }
}

SignalDataset subsample_noncrash(const SignalDataset& ds, int rate) {
  if (rate < 1) throw ValidationError("subsample rate must be >= 1");
  if (rate == 1) return ds;

  SignalDataset out;
  out.scenarios.reserve(ds.scenarios.size());
  for (const auto& s : ds.scenarios) {
    std::vector<Eigen::Index> keep;
    Eigen::Index noncrash_ordinal = 0;
    for (Eigen::Index i = 0; i < s.time.size(); ++i) {
      if (s.labels[i] != 0) {
        keep.push_back(i);
      } else {
        if (noncrash_ordinal % rate == 0) keep.push_back(i);
        ++noncrash_ordinal;
      }
    }
    ScenarioFrames r;
    r.scenario_id = s.scenario_id;
    r.set_id = s.set_id;
    const auto n = static_cast<Eigen::Index>(keep.size());
    r.time.resize(n);
    r.features.resize(n, s.features.cols());
    r.labels.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      r.time[k] = s.time[keep[static_cast<std::size_t>(k)]];
      r.features.row(k) = s.features.row(keep[static_cast<std::size_t>(k)]);
      r.labels[k] = s.labels[keep[static_cast<std::size_t>(k)]];
    }
    out.scenarios.push_back(std::move(r));
  }
  return out;
}

ScenarioFrames resample_2khz(const ScenarioFrames& s) {
  const Eigen::Index n = s.time.size();
  if (n < 2) return s;
  const double dt_in = s.time[1] - s.time[0];
  if (!(dt_in > 0.0)) throw ValidationError("resample input time is not strictly increasing");
  for (Eigen::Index i = 1; i < n; ++i) {
    const double d = s.time[i] - s.time[i - 1];
    if (!(d > 0.0)) throw ValidationError("resample input time is not strictly increasing");
    if (std::abs(d - dt_in) > 1e-9) {
      throw ValidationError("resample input time base is not uniform");
    }
  }

  const double t0 = s.time[0];
  const double duration = s.time[n - 1] - t0;
  const auto m = static_cast<Eigen::Index>(std::floor(duration * telemetry::kSampleRate)) + 1;

  // latch time: first input frame labeled 1
  double latch = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.labels[i] != 0) {
      latch = s.time[i];
      break;
    }
  }

  ScenarioFrames out;
  out.scenario_id = s.scenario_id;
  out.set_id = s.set_id;
  out.time.resize(m);
  out.features.resize(m, s.features.cols());
  out.labels.resize(m);

  const int left_idx = telemetry::channel_index("cnt_sensor_left");
  const int right_idx = telemetry::channel_index("cnt_sensor_right");

  for (Eigen::Index k = 0; k < m; ++k) {
    const double t = t0 + static_cast<double>(k) / telemetry::kSampleRate;
    const double u = (t - t0) / dt_in;
    const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), n - 2);
    const double w = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
    out.time[k] = t;
    out.features.row(k) = (1.0 - w) * s.features.row(i) + w * s.features.row(i + 1);
    out.labels[k] = t >= latch - 1e-12 ? 1 : 0;
  }
  // contact sensors are boolean: re-binarize after interpolation
  for (int c : {left_idx, right_idx}) {
    if (c >= 0 && c < out.features.cols()) {
      out.features.col(c) = (out.features.col(c).array() >= 0.5).cast<double>();
    }
  }
  return out;
}

SignalDataset resample_2khz(const SignalDataset& ds) {
  SignalDataset out;
  out.scenarios.reserve(ds.scenarios.size());
  for (const auto& s : ds.scenarios) out.scenarios.push_back(resample_2khz(s));
  return out;
}

}  // namespace crashdet::dataprep
