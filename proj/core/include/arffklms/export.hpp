#pragma once

#include <filesystem>
#include <vector>

#include "arffklms/experiment.hpp"

namespace arffklms {

/// Writes emse.csv, summary.csv, omega_snapshots.csv and manifest.json into
/// `out_dir` (created if needed) and returns their paths.
///
/// emse.csv     n, <label>_emse_db per filter, <label>_model_size per filter
/// summary.csv  filter, steady_state_emse, steady_state_emse_db, final_model_size
/// omega_snapshots.csv  filter, stage, feature, omega_1..omega_L
///
/// Throws IoError naming the path on failure.
std::vector<std::filesystem::path> export_artifacts(const RunArtifacts& art,
                                                    const std::filesystem::path& out_dir);

}  // namespace arffklms
