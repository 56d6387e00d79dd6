#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rough/count.hpp"

namespace rough {

// A contiguous run of gaps in G(p#): j = length gaps of total span |s|.
// The change of DeltaPhi over the run is j - |s|/mu, held exactly in delta_num
// over denominator p#: delta_num = j*p# - |s|*phi(p#).
struct ConstellationSegment {
  uint64_t start_x = 0;  // rough number where the run starts (period coordinates)
  uint64_t end_x = 0;
  uint64_t length = 0;
  uint64_t span = 0;
  int64_t delta_num = 0;
  std::vector<uint16_t> gaps;

  double mean_gap() const { return length ? static_cast<double>(span) / static_cast<double>(length) : 0.0; }
};

// A post-extremum left limit that came close to zero without crossing.
struct NearZero {
  std::string segment;  // "max_to_zero" or "min_to_zero"
  uint64_t x = 0;
  int64_t num = 0;
  double value = 0.0;
};

struct ScanReport {
  uint64_t p = 0;
  uint64_t primorial = 0;
  uint64_t totient = 0;
  uint32_t chunks = 1;
  double near_zero_threshold = 0.25;

  int64_t y_max_num = 0;  // over denominator p#
  int64_t y_min_num = 0;
  uint64_t x_max = 0;  // first attainment (top of the rise at x_max)
  uint64_t x_min = 0;  // first attainment (left limit at x_min)
  uint64_t max_count = 0;
  uint64_t min_count = 0;
  uint64_t n0_plus = 0;
  uint64_t n0_minus = 0;
  bool alternation_ok = false;

  ConstellationSegment zero_to_min, min_to_zero, zero_to_max, max_to_zero;
  std::vector<NearZero> near_zeros;

  double mu() const { return static_cast<double>(primorial) / static_cast<double>(totient); }
  double y_max() const { return static_cast<double>(y_max_num) / static_cast<double>(primorial); }
  double y_min() const { return static_cast<double>(y_min_num) / static_cast<double>(primorial); }
  double rising_fraction() const { return static_cast<double>(n0_plus) / static_cast<double>(totient); }
  // The invariants cmd_scan gates its exit code on.
  bool invariants_hold() const {
    return y_min_num == -y_max_num && n0_plus == n0_minus && alternation_ok;
  }

  std::string to_text(bool exact = false) const;
  std::string to_csv_row() const;
  static std::string csv_header();
};

enum class ScanBackend { kAuto, kMaterialized, kWheel };

struct ScanOptions {
  uint32_t chunks = 1;
  double near_zero_threshold = 0.25;
  ScanBackend backend = ScanBackend::kAuto;
  // Checkpointing (0 = disabled). The checkpoint file gains chunk partials as
  // they complete; sequential scans also persist in-flight state every
  // `checkpoint_every` gaps.
  uint64_t checkpoint_every = 0;
  std::filesystem::path checkpoint_file;
  bool resume = false;
  // Test hook: abort the sequential scan after this many gaps (0 = off),
  // leaving the checkpoint file behind.
  uint64_t abort_after = 0;
};

// Streams one full period of DeltaPhi(x,p), tracking the exact numerator:
// extrema with first-attainment coordinates, rising/falling zero counts, the
// four extremal segments, and post-extremum near-zeros. p <= kMaxStreamPrime.
ScanReport scan_period(uint64_t p, const ScanOptions& opts = {});

// Reflection law over the extremal constellations: zero_to_max is the
// gap-reversal of min_to_zero, max_to_zero the reversal of zero_to_min.
bool segments_reflect(const ScanReport& report);

// Thrown by the abort_after test hook once the checkpoint has been written.
struct ScanAborted {
  uint64_t events_done;
};

struct ConstellationDelta {
  bool exact = false;    // rationals available (p <= kMaxSpanPrime)
  DeltaValue rational;   // valid when exact
  double value = 0.0;
  uint64_t length = 0;
  uint64_t span = 0;
};

// j - |s|/mu for a run of gaps; exact for p <= kMaxSpanPrime, long-double
// product formula for larger p. Gaps must be nonempty.
ConstellationDelta constellation_delta(std::span<const uint64_t> gaps, uint64_t p);
ConstellationDelta constellation_delta(uint64_t length, uint64_t span, uint64_t p);

struct JacobsthalCheck {
  uint64_t p = 0;
  uint64_t max_gap = 0;
  double y_min = 0.0;
  double bound = 0.0;  // (1 - max_gap/mu) / 2
  double slack = 0.0;  // bound - y_min
  bool holds = false;
};

// y_min <= (1 - g_hat/mu)/2, compared exactly: 2*y_min_num <= p# - g_hat*phi.
JacobsthalCheck jacobsthal_bound_check(uint64_t p);
JacobsthalCheck jacobsthal_bound_check(uint64_t p, const ScanReport& report);

struct MidcycleProfile {
  uint64_t p = 0;
  uint32_t J = 0;
  uint64_t start_x = 0;  // p#/2 - 2^(J+1)
  std::vector<uint16_t> gaps;      // extracted from the cycle
  std::vector<uint16_t> expected;  // 2^J ... 4 2 4 2 4 ... 2^J
  bool matches = false;
};

// Extracts the gaps covering [p#/2 - 2^(J+1), p#/2 + 2^(J+1)] and compares
// them with the palindromic powers-of-two constellation. Requires p >= 11.
MidcycleProfile midcycle_profile(uint64_t p);

}  // namespace rough
