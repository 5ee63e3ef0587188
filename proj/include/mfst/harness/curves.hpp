#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mfst/data/records.hpp"
#include "mfst/eval/protocol.hpp"
#include "mfst/model/frame_scorer.hpp"

namespace mfst {

/// One CSV per video, `<id>.csv` with columns frame,predicted,gt,summary.
/// Scores use 9 significant digits; summary is the model's knapsack mask bit.
/// Returns the written file names.
std::vector<std::string> emit_curves(FrameScoringModel& model, std::span<const VideoRecord> records,
                                     const std::filesystem::path& directory,
                                     const ProtocolConfig& protocol = {});

}  // namespace mfst
