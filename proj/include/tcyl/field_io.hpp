#pragma once

// FieldConfig serialization.
//
// Binary record layout (all little-endian):
//   int32 n_t, int32 n_x, 4-byte magic "TCFG", uint32 version,
//   followed by n_t * n_x float64 values in row-major (t, x) order.
// A sample file is a plain concatenation of records.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tcyl/lattice.hpp"

namespace tcyl {

inline constexpr std::uint32_t kFieldFormatVersion = 1;
inline constexpr char kFieldMagic[4] = {'T', 'C', 'F', 'G'};

void write_field(std::ostream& os, const FieldConfig& cfg);
/// Returns false at clean end of stream; throws FormatError on a malformed record.
bool read_field(std::istream& is, FieldConfig& cfg);

void write_fields(const std::filesystem::path& path, std::span<const FieldConfig> cfgs);
std::vector<FieldConfig> read_fields(const std::filesystem::path& path);

/// Whole file contents as the binary record stream (for hashing or in-memory use).
std::string encode_fields(std::span<const FieldConfig> cfgs);

/// `t,x,value` with 17 significant digits.
void write_field_csv(std::ostream& os, const FieldConfig& cfg);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace tcyl
