#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "imh/errors.hpp"

// Little-endian primitive IO shared by the model, code and baseline file
// formats. Readers throw FormatError naming the field that was truncated.

namespace imh::bytes {

inline void write_u8(std::ostream& out, std::uint8_t v) {
  out.put(static_cast<char>(v));
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline void write_f64(std::ostream& out, double v) {
  write_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void read_exact(std::istream& in, char* buf, std::size_t n,
                       const char* field) {
  in.read(buf, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw FormatError(std::string("truncated file while reading ") + field);
}

inline std::uint8_t read_u8(std::istream& in, const char* field) {
  char b;
  read_exact(in, &b, 1, field);
  return static_cast<std::uint8_t>(b);
}

inline std::uint32_t read_u32(std::istream& in, const char* field) {
  char b[4];
  read_exact(in, b, 4, field);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& in, const char* field) {
  char b[8];
  read_exact(in, b, 8, field);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

inline double read_f64(std::istream& in, const char* field) {
  return std::bit_cast<double>(read_u64(in, field));
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

inline void check_written(std::ostream& out, const std::string& what) {
  if (!out) throw IoError("write failed: " + what);
}

inline void expect_eof(std::istream& in, const char* what) {
  if (in.peek() != std::char_traits<char>::eof())
    throw FormatError(std::string(what) + ": trailing bytes after payload");
}

}  // namespace imh::bytes
