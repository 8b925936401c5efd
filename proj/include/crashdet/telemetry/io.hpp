#pragma once

#include <filesystem>

#include "crashdet/telemetry/dataset.hpp"

namespace crashdet::telemetry {

// CSV schema (one file per scenario):
//   time,<23 channel names>,label,scenario_id,set_id
// Values are written with full binary64 round-trip precision.
void write_scenario_csv(const ScenarioFrames& frames, const std::filesystem::path& file);
ScenarioFrames read_scenario_csv(const std::filesystem::path& file);

// A dataset is a directory of per-scenario CSV files. Reading a single .csv
// file yields a one-scenario dataset.
void write_dataset(const SignalDataset& ds, const std::filesystem::path& dir);
SignalDataset read_dataset(const std::filesystem::path& path);

}  // namespace crashdet::telemetry
