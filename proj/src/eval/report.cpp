#include "mfst/eval/report.hpp"

#include <cstdio>

namespace mfst {

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value == 0.0 ? 0.0 : value);
  return buf;
}

namespace {

std::string precise(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

void write_text_report(std::ostream& out, const EvalReport& report) {
  out << "protocol: budget_fraction=" << format_fixed(report.protocol.budget_fraction, 4)
      << " aggregation=" << to_string(report.protocol.aggregation) << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %7s %9s %9s %9s %9s %9s\n", "video", "frames", "f_score",
                "precision", "recall", "tau", "rho");
  out << line;
  for (const VideoMetrics& m : report.videos) {
    std::snprintf(line, sizeof line, "%-24s %7zu %9s %9s %9s %9s %9s\n", m.video_id.c_str(),
                  m.frames, format_fixed(m.f_score).c_str(), format_fixed(m.precision).c_str(),
                  format_fixed(m.recall).c_str(), format_fixed(m.kendall_tau).c_str(),
                  format_fixed(m.spearman_rho).c_str());
    out << line;
  }
  std::snprintf(line, sizeof line, "%-24s %7zu %9s %9s %9s %9s %9s\n", "mean", report.videos.size(),
                format_fixed(report.f_score).c_str(), format_fixed(report.precision).c_str(),
                format_fixed(report.recall).c_str(), format_fixed(report.kendall_tau).c_str(),
                format_fixed(report.spearman_rho).c_str());
  out << line;
}

void write_csv_report(std::ostream& out, const EvalReport& report) {
  out << "video,frames,f_score,precision,recall,kendall_tau,spearman_rho\n";
  for (const VideoMetrics& m : report.videos) {
    out << m.video_id << ',' << m.frames << ',' << precise(m.f_score) << ','
        << precise(m.precision) << ',' << precise(m.recall) << ',' << precise(m.kendall_tau) << ','
        << precise(m.spearman_rho) << '\n';
  }
  out << "mean," << report.videos.size() << ',' << precise(report.f_score) << ','
      << precise(report.precision) << ',' << precise(report.recall) << ','
      << precise(report.kendall_tau) << ',' << precise(report.spearman_rho) << '\n';
}

}  // namespace mfst
