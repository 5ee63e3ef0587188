#pragma once

#include <filesystem>

#include "mfst/model/frame_scorer.hpp"

namespace mfst {

/// Checkpoint layout:
///
///   MFSTCKPT 1\n
///   <one-line JSON header: model config, modality dims, audio flag, and the
///    ordered parameter table [{name, rows, cols}]>\n
///   <each parameter's values as little-endian float64, row-major, in table order>
///
/// Save followed by load reproduces every parameter bit-exactly.
void save_checkpoint(const std::filesystem::path& path, FrameScoringModel& model);
FrameScoringModel load_checkpoint(const std::filesystem::path& path);

}  // namespace mfst
