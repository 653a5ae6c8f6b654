#pragma once

#include <filesystem>
#include <iosfwd>

#include "imh/types.hpp"

namespace imh {

// Model files: magic "IMH1", little-endian, fixed-width fields. Header
// carries the enums and dimensions, then the dense payloads, then optional
// blocks (assignment distances, center classes, projection, rotation), each
// preceded by a one-byte presence flag. Round-trips are bit-exact.
void save_model(const HashModel& model, std::ostream& out);
void save_model(const HashModel& model, const std::filesystem::path& path);
HashModel load_model(std::istream& in);
HashModel load_model(const std::filesystem::path& path);

// Code files: magic "IMHC", u64 count, u32 bits, packed u64 words per row.
void save_codes(const BinaryCodes& codes, std::ostream& out);
void save_codes(const BinaryCodes& codes, const std::filesystem::path& path);
BinaryCodes load_codes(std::istream& in);
BinaryCodes load_codes(const std::filesystem::path& path);

}  // namespace imh
