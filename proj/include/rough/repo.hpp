#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>

#include "rough/gap_cycle.hpp"

namespace rough {

// Memoized provider of cycles. Materialized cycles (p <= 23) are generated on
// first use (or read from the disk cache when a cache directory is set) and
// shared; G(29#) is served as a wheel stream over the materialized G(23#).
class CycleRepo {
 public:
  CycleRepo() = default;

  void set_cache_dir(std::filesystem::path dir);
  const std::filesystem::path& cache_dir() const { return dir_; }
  std::filesystem::path cache_file(uint64_t p) const;

  std::shared_ptr<const GapCycle> get(uint64_t p);
  CycleStream stream(uint64_t p);
  // Stream positioned at the first p-rough number >= x (x >= 1); the cursor's
  // index/rough are absolute, so x may lie beyond the first period.
  CycleStream stream_at(uint64_t p, uint64_t x);
  uint64_t max_gap(uint64_t p);

  void clear();

  static CycleRepo& global();

 private:
  std::mutex mu_;
  std::filesystem::path dir_;
  std::map<uint64_t, std::shared_ptr<const GapCycle>> cycles_;
  std::map<uint64_t, uint64_t> max_gaps_;
};

// Convenience wrappers over the global repo.
uint64_t max_gap(uint64_t p);

}  // namespace rough
