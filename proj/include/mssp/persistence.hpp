#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mssp/oracle.hpp"

namespace mssp {

/// Oracle file layout (all integers little-endian):
///   "MSSPORCL" | u32 format version | u64 seed | payload | u32 crc32
/// The checksum covers every preceding byte.
inline constexpr std::uint32_t kOracleFormatVersion = 1;

void save(const MsspOracle& oracle, std::ostream& out);
MsspOracle load(std::istream& in);

void save_file(const MsspOracle& oracle, const std::string& path);
MsspOracle load_file(const std::string& path);

}  // namespace mssp
