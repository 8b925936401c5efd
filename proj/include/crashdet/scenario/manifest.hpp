#pragma once

#include <filesystem>
#include <vector>

#include "crashdet/scenario/spec.hpp"

namespace crashdet::scenario {

// Line-delimited manifest: one JSON object per scenario per line.
void write_manifest(const std::vector<ScenarioSpec>& specs, const std::filesystem::path& path,
                    const std::string& config_hash = "");

struct Manifest {
  std::vector<ScenarioSpec> specs;
  std::string config_hash;
};

Manifest read_manifest(const std::filesystem::path& path);

}  // namespace crashdet::scenario
