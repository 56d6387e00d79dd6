#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rough/int128.hpp"

namespace rough {

// Exact value of DeltaPhi(x,p) = Phi(x,p) - (phi(p#)/p#) * x, stored as
// numerator = Phi*p# - phi(p#)*x over denominator p#. Always |num| < phi*p#.
struct DeltaValue {
  int128 num = 0;
  uint64_t den = 1;

  double value() const { return static_cast<double>(static_cast<long double>(num) / den); }
  bool is_zero() const { return num == 0; }
  DeltaValue operator-() const { return {-num, den}; }
  bool operator==(const DeltaValue& o) const { return num == o.num && den == o.den; }

  // Exact comparison against the fraction n/d.
  bool equals_fraction(int64_t n, uint64_t d) const {
    return num * static_cast<int128>(d) == static_cast<int128>(n) * static_cast<int128>(den);
  }
  std::string to_string() const { return to_string_i128(num) + "/" + std::to_string(den); }
};

// True iff x has no prime factor <= p (1 is rough; 0 is not).
bool is_rough(uint64_t x, uint64_t p);

// Count of p-rough numbers in [1, x]. Materialized prefix sums for p <= 23,
// the Buchstab identity Phi(x,p) = Phi(x,p') - Phi(x/p,p') above that.
// Supports all primes p <= kMaxSpanPrime.
uint64_t phi_count(uint64_t x, uint64_t p);

DeltaValue delta_phi(uint64_t x, uint64_t p);
// Left limit: delta_phi(x) - 1 when x is p-rough, delta_phi(x) otherwise.
DeltaValue delta_phi_left(uint64_t x, uint64_t p);

// One row of the closed-form value table: DeltaPhi at a distinguished x.
struct KnownValueRow {
  std::string label;
  uint64_t x;
  DeltaValue lower;  // left limit
  DeltaValue upper;
  bool rough;        // whether x is p-rough (upper - lower = 1)
};

// Closed-form rows for x in {0, 1, q, p#/2, p#/2 - 2^j (1 <= j <= J+1)} and
// their reflections p# - x, where q is the next prime after p and 2^J < q.
// Requires p >= 5 (the midcycle constellation must exist).
std::vector<KnownValueRow> known_values(uint64_t p);

// Largest J with 2^J < next_prime_after(p).
uint32_t midcycle_exponent(uint64_t p);

struct LawReport {
  std::string law;
  uint64_t samples = 0;
  uint64_t failures = 0;
  std::string first_failure;
  bool passed() const { return failures == 0; }
};

struct VerifyReport {
  std::vector<LawReport> laws;
  bool all_passed() const;
  std::string to_text() const;
};

// DeltaPhi(x + p#) = DeltaPhi(x) and Phi(x + p#) = Phi(x) + phi(p#).
VerifyReport verify_translation(uint64_t p, std::span<const uint64_t> xs);

// DeltaPhi(p# - x) = -DeltaPhi_left(x) and
// DeltaPhi(p#/2 + x) = -DeltaPhi_left(p#/2 - x), for samples in [0, p#/2].
VerifyReport verify_rotation(uint64_t p, std::span<const uint64_t> xs);

}  // namespace rough
