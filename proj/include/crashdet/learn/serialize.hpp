#pragma once

#include <filesystem>

#include "crashdet/learn/model.hpp"

namespace crashdet::learn {

// Versioned single-file artifact (JSON): spec, fitted parameters and the
// bundled standardizer.
void save_artifact(const ModelArtifact& artifact, const std::filesystem::path& file);
ModelArtifact load_artifact(const std::filesystem::path& file);

}  // namespace crashdet::learn
