#pragma once

#include <array>
#include <string>
#include <vector>

#include "crashdet/core/types.hpp"
#include "crashdet/telemetry/channels.hpp"

namespace crashdet::telemetry {

// One sample: the 23 feature channels plus the latched crash label.
struct FrameRecord {
  double time = 0.0;
  Eigen::Matrix<double, kNumChannels, 1> features;
  int label = 0;
  std::string scenario_id;
};

// All frames of one scenario, time strictly increasing.
struct ScenarioFrames {
  std::string scenario_id;
  std::string set_id;
  VecX time;      // n
  MatX features;  // n x 23
  VecXi labels;   // n, in {0, 1}

  std::size_t size() const { return static_cast<std::size_t>(time.size()); }

  FrameRecord frame(std::size_t i) const {
    FrameRecord f;
    f.time = time[static_cast<Eigen::Index>(i)];
    f.features = features.row(static_cast<Eigen::Index>(i)).transpose();
    f.label = labels[static_cast<Eigen::Index>(i)];
    f.scenario_id = scenario_id;
    return f;
  }

  bool crash_class() const { return !set_id.empty() && set_id[0] == 'B'; }
};

struct SignalDataset {
  std::vector<ScenarioFrames> scenarios;

  std::size_t total_frames() const {
    std::size_t n = 0;
    for (const auto& s : scenarios) n += s.size();
    return n;
  }

  // [non-crash, crash] frame counts by label
  std::array<std::size_t, 2> class_counts() const {
    std::array<std::size_t, 2> c{0, 0};
    for (const auto& s : scenarios) {
      for (Eigen::Index i = 0; i < s.labels.size(); ++i) {
        ++c[static_cast<std::size_t>(s.labels[i] != 0)];
      }
    }
    return c;
  }

  const ScenarioFrames* find(const std::string& id) const {
    for (const auto& s : scenarios) {
      if (s.scenario_id == id) return &s;
    }
    return nullptr;
  }
};

// Flattened training view: one row per frame.
struct FrameMatrix {
  MatX x;                                // n x 23
  VecXi y;                               // n
  std::vector<std::string> scenario_of;  // n
};

inline FrameMatrix flatten(const SignalDataset& ds) {
  FrameMatrix fm;
  const auto n = static_cast<Eigen::Index>(ds.total_frames());
  fm.x.resize(n, kNumChannels);
  fm.y.resize(n);
  fm.scenario_of.resize(static_cast<std::size_t>(n));
  Eigen::Index r = 0;
  for (const auto& s : ds.scenarios) {
    for (Eigen::Index i = 0; i < s.time.size(); ++i, ++r) {
      fm.x.row(r) = s.features.row(i);
      fm.y[r] = s.labels[i];
      fm.scenario_of[static_cast<std::size_t>(r)] = s.scenario_id;
    }
  }
  return fm;
}

}  // namespace crashdet::telemetry
