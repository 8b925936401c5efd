#pragma once

#include <cstdint>
#include <vector>

#include "crashdet/telemetry/dataset.hpp"

namespace crashdet::dataprep {

// Per-feature zero-mean unit-variance transform, fitted on training data
// only (population standard deviation). Constant features are mapped to 0.
class Standardizer {
 public:
  void fit(const MatX& x);
  bool fitted() const { return fitted_; }

  const VecX& mean() const { return mean_; }
  const VecX& sigma() const { return sigma_; }
  const std::vector<int>& constant_features() const { return constant_; }

  MatX apply(const MatX& x) const;
  VecX apply_row(const VecX& row) const;
  void apply_in_place(telemetry::SignalDataset& ds) const;

  void set(VecX mean, VecX sigma);  // for deserialization

 private:
  VecX mean_, sigma_;
  std::vector<int> constant_;
  bool fitted_ = false;
};

struct DatasetSplit {
  telemetry::SignalDataset train;
  telemetry::SignalDataset test;
  std::uint64_t seed = 0;
  std::array<std::size_t, 2> train_counts{0, 0};  // [non-crash, crash] frames
  std::array<std::size_t, 2> test_counts{0, 0};
};

// 50/50 split on whole scenarios, stratified per set family; all B.3
// scenarios land in the test half.
DatasetSplit split_by_simulation(const telemetry::SignalDataset& ds, std::uint64_t seed);

// Throws ValidationError if a B.3 scenario sits in the training half or a
// scenario id appears in both halves.
void validate_split(const DatasetSplit& split);

// Keeps every rate-th non-crash frame per scenario; crash frames untouched.
telemetry::SignalDataset subsample_noncrash(const telemetry::SignalDataset& ds, int rate);

// Linear interpolation of a uniformly sampled scenario onto the 2 kHz grid;
// the label is latched, boolean contact channels are re-binarized.
telemetry::ScenarioFrames resample_2khz(const telemetry::ScenarioFrames& frames);
telemetry::SignalDataset resample_2khz(const telemetry::SignalDataset& ds);

}  // namespace crashdet::dataprep
