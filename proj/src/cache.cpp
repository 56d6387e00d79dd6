#include "rough/cache.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "rough/errors.hpp"

namespace rough {

namespace {

constexpr char kMagic[4] = {'P', 'G', 'A', 'P'};
constexpr size_t kHeaderSize = 4 + 4 + 8 + 8 + 8 + 1 + 1;

struct Fnv1a64 {
  uint64_t h = 14695981039346656037ULL;
  void feed(const void* data, size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  }
};

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u64(std::vector<unsigned char>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

uint32_t get_u32(const unsigned char* b) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

uint64_t get_u64(const unsigned char* b) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::vector<unsigned char> encode_header(const CacheHeader& h) {
  std::vector<unsigned char> out;
  out.reserve(kHeaderSize);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, h.version);
  put_u64(out, h.p);
  put_u64(out, h.length);
  put_u64(out, h.span);
  out.push_back(h.gap_width);
  out.push_back(h.checksum_algo);
  return out;
}

CacheHeader read_header(std::ifstream& in, const std::filesystem::path& file,
                        unsigned char raw[kHeaderSize]) {
  if (!in.read(reinterpret_cast<char*>(raw), kHeaderSize)) {
    throw IntegrityError("cache: " + file.string() + ": truncated header");
  }
  if (std::memcmp(raw, kMagic, 4) != 0) {
    throw IntegrityError("cache: " + file.string() + ": bad magic (not a PGAP file)");
  }
  CacheHeader h;
  h.version = get_u32(raw + 4);
  h.p = get_u64(raw + 8);
  h.length = get_u64(raw + 16);
  h.span = get_u64(raw + 24);
  h.gap_width = raw[32];
  h.checksum_algo = raw[33];
  if (h.version != kCacheVersion) {
    throw IntegrityError("cache: " + file.string() + ": unsupported format version " +
                         std::to_string(h.version));
  }
  return h;
}

}  // namespace

void cache_write(const GapCycle& cycle, const std::filesystem::path& file) {
  const auto report = verify_cycle(cycle);
  if (!report.all_passed()) {
    throw std::domain_error("cache_write: refusing to cache a cycle that fails verification:\n" +
                            report.to_text());
  }
  CacheHeader h{kCacheVersion, cycle.prime(), cycle.length(), cycle.span(), 2, kChecksumFnv1a64};
  const auto header = encode_header(h);

  std::vector<unsigned char> payload;
  payload.reserve(cycle.length() * 2);
  for (uint16_t g : cycle.gaps()) {
    payload.push_back(static_cast<unsigned char>(g & 0xFF));
    payload.push_back(static_cast<unsigned char>(g >> 8));
  }

  Fnv1a64 sum;
  sum.feed(header.data(), header.size());
  sum.feed(payload.data(), payload.size());
  std::vector<unsigned char> trailer;
  put_u64(trailer, sum.h);

  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cache_write: cannot open " + file.string());
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  out.write(reinterpret_cast<const char*>(trailer.data()), static_cast<std::streamsize>(trailer.size()));
  if (!out) throw std::runtime_error("cache_write: write failed for " + file.string());
}

GapCycle cache_read(uint64_t p, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IntegrityError("cache: cannot open " + file.string());
  unsigned char raw[kHeaderSize];
  const CacheHeader h = read_header(in, file, raw);

  if (h.p != p) {
    throw IdentityError("cache: " + file.string() + " holds p = " + std::to_string(h.p) +
                        ", requested p = " + std::to_string(p));
  }
  if (h.length != totient_primorial(p) || h.span != primorial(p)) {
    throw IntegrityError("cache: " + file.string() +
                         ": header phi/span disagree with values recomputed from p");
  }
  if (h.gap_width != 2) {
    throw IntegrityError("cache: " + file.string() + ": unsupported gap width " +
                         std::to_string(h.gap_width));
  }
  if (h.checksum_algo != kChecksumFnv1a64) {
    throw IntegrityError("cache: " + file.string() + ": unknown checksum algorithm " +
                         std::to_string(h.checksum_algo));
  }

  const size_t payload_size = static_cast<size_t>(h.length) * h.gap_width;
  std::vector<unsigned char> payload(payload_size);
  if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload_size))) {
    throw IntegrityError("cache: " + file.string() + ": truncated payload");
  }
  unsigned char trailer[8];
  if (!in.read(reinterpret_cast<char*>(trailer), 8)) {
    throw IntegrityError("cache: " + file.string() + ": missing checksum trailer");
  }

  Fnv1a64 sum;
  sum.feed(raw, kHeaderSize);
  sum.feed(payload.data(), payload.size());
  if (sum.h != get_u64(trailer)) {
    throw IntegrityError("cache: " + file.string() + ": checksum mismatch");
  }

  std::vector<uint16_t> gaps(h.length);
  for (size_t i = 0; i < gaps.size(); ++i) {
    gaps[i] = static_cast<uint16_t>(payload[2 * i] | (payload[2 * i + 1] << 8));
  }
  return GapCycle(p, std::move(gaps));
}

CacheHeader cache_inspect(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IntegrityError("cache: cannot open " + file.string());
  unsigned char raw[kHeaderSize];
  return read_header(in, file, raw);
}

}  // namespace rough
