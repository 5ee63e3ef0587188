#include "mfst/data/binary_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "mfst/error.hpp"

namespace mfst {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    U out = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out = static_cast<U>((out << 8) | ((v >> (8 * i)) & 0xFF));
    }
    return out;
  }
}

}  // namespace

double round_to_f32(double value) { return static_cast<double>(static_cast<float>(value)); }

std::vector<double> read_f32_file(const std::filesystem::path& path, std::size_t expected_count) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError("missing payload file: " + path.string());
  }
  const auto actual_bytes = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string() + ": " + ec.message());
  const std::uintmax_t expected_bytes = expected_count * sizeof(float);
  if (actual_bytes != expected_bytes) {
    throw FormatError("size mismatch in " + path.string() + ": expected " +
                      std::to_string(expected_bytes) + " bytes (" +
                      std::to_string(expected_count) + " float32), got " +
                      std::to_string(actual_bytes) + " bytes");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint32_t> raw(expected_count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(expected_bytes));
  if (!in) throw IoError("short read from " + path.string());
  std::vector<double> out(expected_count);
  for (std::size_t i = 0; i < expected_count; ++i) {
    out[i] = static_cast<double>(std::bit_cast<float>(to_little(raw[i])));
  }
  return out;
}

void write_f32_file(const std::filesystem::path& path, std::span<const double> values) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  std::vector<std::uint32_t> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    raw[i] = to_little(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
  if (!out) throw IoError("write failed for " + path.string());
}

void write_f64_values(std::ostream& out, std::span<const double> values) {
  for (double v : values) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
  }
  if (!out) throw IoError("write failed");
}

void read_f64_values(std::istream& in, std::span<double> values) {
  for (double& v : values) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), sizeof(bits));
    if (!in) throw FormatError("truncated float64 payload");
    v = std::bit_cast<double>(to_little(bits));
  }
}

}  // namespace mfst
