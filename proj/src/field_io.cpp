#include "tcyl/field_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tcyl/errors.hpp"

namespace tcyl {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  os.write(b.data(), 4);
}

void put_f64(std::ostream& os, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xFFu);
  os.write(b.data(), 8);
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

}  // namespace

void write_field(std::ostream& os, const FieldConfig& cfg) {
  if (cfg.values.size() != static_cast<std::size_t>(cfg.n_t) * static_cast<std::size_t>(cfg.n_x)) {
    throw DimensionError("write_field: value count does not match shape");
  }
  put_u32(os, static_cast<std::uint32_t>(cfg.n_t));
  put_u32(os, static_cast<std::uint32_t>(cfg.n_x));
  os.write(kFieldMagic, 4);
  put_u32(os, kFieldFormatVersion);
  for (double v : cfg.values) put_f64(os, v);
}

bool read_field(std::istream& is, FieldConfig& cfg) {
  std::array<unsigned char, 16> header{};
  is.read(reinterpret_cast<char*>(header.data()), header.size());
  if (is.gcount() == 0) return false;
  if (is.gcount() != static_cast<std::streamsize>(header.size())) {
    throw FormatError("field record: truncated header");
  }
  if (std::memcmp(header.data() + 8, kFieldMagic, 4) != 0) throw FormatError("field record: bad magic");
  if (get_u32(header.data() + 12) != kFieldFormatVersion) {
    throw FormatError("field record: unsupported version");
  }
  const auto n_t = static_cast<std::int32_t>(get_u32(header.data()));
  const auto n_x = static_cast<std::int32_t>(get_u32(header.data() + 4));
  if (n_t < 1 || n_x < 1) throw FormatError("field record: bad shape");
  const std::size_t count = static_cast<std::size_t>(n_t) * static_cast<std::size_t>(n_x);
  std::vector<unsigned char> payload(count * 8);
  is.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (is.gcount() != static_cast<std::streamsize>(payload.size())) {
    throw FormatError("field record: truncated payload");
  }
  cfg.n_t = n_t;
  cfg.n_x = n_x;
  cfg.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) cfg.values[i] = get_f64(payload.data() + 8 * i);
  return true;
}

std::string encode_fields(std::span<const FieldConfig> cfgs) {
  std::ostringstream os(std::ios::binary);
  for (const auto& c : cfgs) write_field(os, c);
  return os.str();
}

void write_fields(const std::filesystem::path& path, std::span<const FieldConfig> cfgs) {
  write_file_atomic(path, encode_fields(cfgs));
}

std::vector<FieldConfig> read_fields(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  std::vector<FieldConfig> out;
  FieldConfig cfg;
  while (read_field(is, cfg)) out.push_back(cfg);
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw FormatError("format_double: conversion failed");
  return {buf.data(), end};
}

void write_field_csv(std::ostream& os, const FieldConfig& cfg) {
  os << "t,x,value\n";
  for (int t = 0; t < cfg.n_t; ++t) {
    for (int x = 0; x < cfg.n_x; ++x) os << t << ',' << x << ',' << format_double(cfg(t, x)) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("cannot write " + tmp.string());
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) throw FormatError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tcyl
