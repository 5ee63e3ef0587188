#pragma once

#include <ostream>
#include <string>

#include "mfst/eval/protocol.hpp"

namespace mfst {

/// Fixed-notation formatting used by every report, so identical values always
/// produce identical bytes.
std::string format_fixed(double value, int digits = 6);

/// Human-readable table: protocol line, one row per video, a mean row.
void write_text_report(std::ostream& out, const EvalReport& report);

/// Comma-separated: header, one row per video, then a row with id "mean".
/// Values are printed with 17 significant digits.
void write_csv_report(std::ostream& out, const EvalReport& report);

}  // namespace mfst
