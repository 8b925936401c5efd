#pragma once

#include "crashdet/learn/model.hpp"
#include "crashdet/telemetry/dataset.hpp"

namespace crashdet::learn {

// Trains one model of the requested kind on the (raw-feature) training set.
// The standardizer is always fitted on the training frames and bundled; svm
// and mlp train and infer on standardized features.
ModelArtifact train(const ModelSpec& spec, const telemetry::SignalDataset& train_ds);

// Flat-matrix entry point used by the tuner (groups index frames by
// scenario for the mlp validation carve-out).
ModelArtifact train_on_frames(const ModelSpec& spec, const MatX& x, const VecXi& y,
                              const std::vector<int>& groups);

std::string dataset_hash(const MatX& x, const VecXi& y);

}  // namespace crashdet::learn
