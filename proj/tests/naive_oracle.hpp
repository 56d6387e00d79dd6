#pragma once

// Independent brute-force oracles for the tests: everything here is computed
// by trial division and direct integer walks, never through the cycle or
// scan machinery under test.

#include <cstdint>
#include <vector>

namespace naive {

inline bool is_rough(uint64_t n, uint64_t p) {
  if (n == 0) return false;
  for (uint64_t q = 2; q <= p; ++q) {
    bool prime = q >= 2;
    for (uint64_t d = 2; d * d <= q; ++d) {
      if (q % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime && n % q == 0) return false;
  }
  return true;
}

inline uint64_t phi_count(uint64_t x, uint64_t p) {
  uint64_t c = 0;
  for (uint64_t n = 1; n <= x; ++n) {
    if (is_rough(n, p)) ++c;
  }
  return c;
}

inline std::vector<uint64_t> rough_numbers(uint64_t lo, uint64_t hi, uint64_t p) {
  std::vector<uint64_t> out;
  for (uint64_t n = lo; n <= hi; ++n) {
    if (is_rough(n, p)) out.push_back(n);
  }
  return out;
}

// Full-period evaluation of the DeltaPhi numerator at every integer:
// extrema over values and left limits, zero counts on unit steps.
struct NaiveScan {
  int64_t max_num = INT64_MIN;  // max over upper values
  uint64_t x_max = 0;
  int64_t min_num = INT64_MAX;  // min over left limits
  uint64_t x_min = 0;
  uint64_t rising_zeros = 0;
  uint64_t falling_zeros = 0;
};

inline NaiveScan naive_scan(uint64_t span, uint64_t totient, uint64_t p) {
  NaiveScan s;
  int64_t P = static_cast<int64_t>(span), T = static_cast<int64_t>(totient);
  uint64_t phi = 0;
  int64_t prev_value = 0;  // value at x-1
  for (uint64_t x = 1; x <= span; ++x) {
    const bool rough = is_rough(x, p);
    if (rough) ++phi;
    const int64_t value = static_cast<int64_t>(phi) * P - T * static_cast<int64_t>(x);
    const int64_t left = rough ? value - P : value;
    if (value > s.max_num) {
      s.max_num = value;
      s.x_max = x;
    }
    if (left < s.min_num) {
      s.min_num = left;
      s.x_min = x;
    }
    if (rough && left < 0 && value > 0) ++s.rising_zeros;
    // Falling zero in the unit step (x-1, x]: decays from prev_value to left.
    if (prev_value > 0 && left <= 0) ++s.falling_zeros;
    prev_value = value;
  }
  return s;
}

}  // namespace naive
