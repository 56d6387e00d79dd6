#pragma once

#include <cstdint>
#include <filesystem>

#include "rough/gap_cycle.hpp"

namespace rough {

// Cycle cache file layout (all multi-byte integers little-endian):
//   "PGAP" | version u32 | p u64 | phi(p#) u64 | p# u64 | gap width u8 |
//   checksum algorithm u8 | payload (phi * width bytes) | checksum u64
// Checksum algorithm 1 = FNV-1a 64 over everything before the trailer.
inline constexpr uint32_t kCacheVersion = 1;
inline constexpr uint8_t kChecksumFnv1a64 = 1;

struct CacheHeader {
  uint32_t version;
  uint64_t p;
  uint64_t length;
  uint64_t span;
  uint8_t gap_width;
  uint8_t checksum_algo;
};

// Writes a verified cycle. Throws std::domain_error if the cycle fails
// verify_cycle, std::runtime_error on I/O failure.
void cache_write(const GapCycle& cycle, const std::filesystem::path& file);

// Reads back G(p#). Header fields are validated against values recomputed
// from p. Throws IntegrityError (damage/inconsistency) or IdentityError
// (file holds a different prime's cycle).
GapCycle cache_read(uint64_t p, const std::filesystem::path& file);

// Header only; validates magic/version but not the payload.
CacheHeader cache_inspect(const std::filesystem::path& file);

}  // namespace rough
