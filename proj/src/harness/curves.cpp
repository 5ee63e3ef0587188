#include "mfst/harness/curves.hpp"

#include <cstdio>
#include <fstream>

#include "mfst/error.hpp"
#include "mfst/eval/knapsack.hpp"

namespace mfst {

std::vector<std::string> emit_curves(FrameScoringModel& model, std::span<const VideoRecord> records,
                                     const std::filesystem::path& directory,
                                     const ProtocolConfig& protocol) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());

  std::vector<std::string> files;
  for (const VideoRecord& record : records) {
    const ScoreVector predicted = forward(model, record.features);
    const SummarySelection summary =
        summarize(predicted, record.segments, protocol.budget_fraction);
    const std::string name = record.id() + ".csv";
    std::ofstream out(directory / name, std::ios::trunc);
    if (!out) throw IoError("cannot write " + (directory / name).string());
    out << "frame,predicted,gt,summary\n";
    char line[128];
    for (std::size_t f = 0; f < predicted.size(); ++f) {
      std::snprintf(line, sizeof line, "%zu,%.9g,%.9g,%d\n", f, predicted[f], record.gt_scores[f],
                    summary.mask[f] ? 1 : 0);
      out << line;
    }
    if (!out) throw IoError("write failed for " + (directory / name).string());
    files.push_back(name);
  }
  return files;
}

}  // namespace mfst
