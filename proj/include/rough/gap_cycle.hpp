#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rough/primes.hpp"

namespace rough {

// Largest p whose cycle is held fully in memory. phi(23#) = 36,495,360 gaps
// (~73 MB at 16 bits per gap); phi(29#) = 1,021,870,080 gaps is stream-only.
inline constexpr uint64_t kMaxMaterializedPrime = 23;
inline constexpr uint64_t kMaxStreamPrime = 29;

// The cycle of gaps G(p#): differences between consecutive p-rough numbers,
// starting at 1. Length phi(p#), span p#. The i-th rough number (0-indexed)
// is r_i = 1 + g_0 + ... + g_{i-1}; the last gap wraps from p#-1 to p#+1.
class GapCycle {
 public:
  GapCycle(uint64_t p, std::vector<uint16_t> gaps);

  uint64_t prime() const { return p_; }
  uint64_t span() const { return span_; }      // sum of gaps
  uint64_t length() const { return length_; }  // number of gaps
  const std::vector<uint16_t>& gaps() const { return gaps_; }
  uint16_t gap(uint64_t i) const { return gaps_[i]; }
  uint16_t max_gap() const { return max_gap_; }

  // r_index for 0 <= index <= length (rough_at(length) = span + 1).
  uint64_t rough_at(uint64_t index) const;

  // Number of p-rough numbers in [1, x], for 0 <= x <= span.
  uint64_t count_leq(uint64_t x) const;

 private:
  static constexpr uint64_t kBlock = 4096;

  uint64_t p_;
  uint64_t span_ = 0;
  uint64_t length_ = 0;
  uint16_t max_gap_ = 0;
  std::vector<uint16_t> gaps_;
  std::vector<uint64_t> block_rough_;  // r at indices 0, kBlock, 2*kBlock, ...
};

enum class CycleBackend {
  kAuto,           // sieve for small p, wheel recursion from p >= 17
  kSegmentedSieve, // oracle path: sieve [1, p#+1] and take differences
  kWheelRecursion, // performance path: extend G(q#) level by level
};

// Generates G(p#) materialized. Throws std::domain_error (p not prime),
// std::range_error (p > kMaxSpanPrime), or ResourceError for p beyond the
// materialization limit, advising streamed access.
GapCycle generate_cycle(uint64_t p, CycleBackend backend = CycleBackend::kAuto);

// One wheel-recursion step: G(p#) from base = G(p_prev#), where p is the next
// prime after base.prime(). Concatenates p copies of the base cycle and fuses
// the two gaps flanking each multiple p*r, r running over the base roughs.
GapCycle wheel_extend(const GapCycle& base, uint64_t p);

struct CycleCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct CycleReport {
  uint64_t p = 0;
  std::vector<CycleCheck> checks;
  bool all_passed() const;
  std::string to_text() const;
};

// Checks span sum, gap count, reflective symmetry, g_1 = q-1, final gap 2,
// presence of the gap 2*p_prev, and gap parity. Failures are report entries.
CycleReport verify_cycle(const GapCycle& cycle);

// --- streaming access ------------------------------------------------------
//
// Cursors enumerate the gaps of G(p#) cyclically and never stop; index() and
// rough() grow monotonically across periods. seek() repositions a cursor at a
// known (gap index, rough coordinate) pair of its own cycle.

class MaterializedCursor {
 public:
  explicit MaterializedCursor(std::shared_ptr<const GapCycle> cycle);

  uint32_t next() {
    uint32_t g = (*gaps_)[pos_];
    if (++pos_ == gaps_->size()) pos_ = 0;
    rough_ += g;
    ++index_;
    return g;
  }

  uint64_t index() const { return index_; }
  uint64_t rough() const { return rough_; }
  void seek(uint64_t gap_index, uint64_t rough);

 private:
  std::shared_ptr<const GapCycle> cycle_;
  const std::vector<uint16_t>* gaps_;
  size_t pos_ = 0;
  uint64_t index_ = 0;
  uint64_t rough_ = 1;
};

// Streams G(p#) from the materialized previous cycle without building it:
// the main cursor walks p concatenated copies of the base gaps, the striker
// cursor walks the base roughs r and suppresses each element p*r by fusing
// its two flanking gaps.
class WheelCursor {
 public:
  WheelCursor(std::shared_ptr<const GapCycle> base, uint64_t p);

  uint32_t next() {
    uint32_t acc = 0;
    for (;;) {
      uint32_t g = (*base_gaps_)[bpos_];
      if (++bpos_ == base_gaps_->size()) bpos_ = 0;
      acc += g;
      uint64_t e = rough_ + acc;
      if (e == strike_) {
        striker_rough_ += (*base_gaps_)[spos_];
        if (++spos_ == base_gaps_->size()) spos_ = 0;
        strike_ = p_ * striker_rough_;
        continue;
      }
      rough_ = e;
      ++index_;
      return acc;
    }
  }

  uint64_t p() const { return p_; }
  uint64_t index() const { return index_; }
  uint64_t rough() const { return rough_; }
  void seek(uint64_t gap_index, uint64_t rough);

 private:
  std::shared_ptr<const GapCycle> base_;
  const std::vector<uint16_t>* base_gaps_;
  uint64_t p_;
  size_t bpos_ = 0;          // main cursor position in the base gap array
  uint64_t index_ = 0;       // emitted gap count
  uint64_t rough_ = 1;       // current rough number of the derived cycle
  size_t spos_ = 0;          // striker position in the base gap array
  uint64_t striker_rough_;   // current base rough r; next strike is p*r
  uint64_t strike_;
};

// Uniform streaming handle over either cursor (spec type CycleStream).
class CycleStream {
 public:
  static CycleStream materialized(std::shared_ptr<const GapCycle> cycle);
  static CycleStream wheel(std::shared_ptr<const GapCycle> base, uint64_t p);

  uint64_t p() const { return p_; }
  uint64_t span() const { return span_; }
  uint64_t length() const { return length_; }

  uint32_t next();
  uint64_t index() const;
  uint64_t rough() const;
  void seek(uint64_t gap_index, uint64_t rough);

 private:
  CycleStream() = default;
  uint64_t p_ = 0, span_ = 0, length_ = 0;
  std::variant<std::monostate, MaterializedCursor, WheelCursor> cur_;
};

// Positioning helpers for the derived cycle G(p#) over a materialized base
// G(p_prev#); used by chunk planning and wheel seeks. `x` need not be rough.
uint64_t derived_count_leq(const GapCycle& base, uint64_t p, uint64_t x);
// Smallest rough number of the derived cycle that is >= x (x >= 1).
uint64_t derived_next_rough(const GapCycle& base, uint64_t p, uint64_t x);

}  // namespace rough
