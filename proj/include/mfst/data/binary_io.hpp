#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace mfst {

/// Reads a headerless little-endian float32 payload and widens it to double.
/// The file must hold exactly `expected_count` values.
std::vector<double> read_f32_file(const std::filesystem::path& path, std::size_t expected_count);

/// Writes values narrowed to little-endian float32.
void write_f32_file(const std::filesystem::path& path, std::span<const double> values);

/// Rounds through float32, matching what a write/read round-trip produces.
double round_to_f32(double value);

void write_f64_values(std::ostream& out, std::span<const double> values);
void read_f64_values(std::istream& in, std::span<double> values);

}  // namespace mfst
