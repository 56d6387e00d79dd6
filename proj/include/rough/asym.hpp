#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rough {

// Euler-Mascheroni constant to 20 significant digits; e^(-gamma) is computed.
inline constexpr long double kEulerGamma = 0.57721566490153286061L;

// phi(p#)/p# as a long double. Exact ratio for p <= kMaxSpanPrime, log-domain
// accumulation sum ln((q-1)/q) (smallest magnitudes first) above that.
long double symmetry_slope(uint64_t p);
// Mean gap mu = p#/phi(p#) = 1/slope.
long double mean_gap(uint64_t p);

struct MertensReport {
  uint64_t p = 0;
  bool exact = false;        // rational slope available (p <= kMaxSpanPrime)
  uint64_t slope_num = 0;    // phi(p#)
  uint64_t slope_den = 0;    // p#
  double slope = 0.0;        // phi(p#)/p#
  double surrogate = 0.0;    // e^(-gamma)/ln p
  double relative_error = 0.0;  // (surrogate - slope)/slope
  double drift_rate = 0.0;      // surrogate - slope, per unit x
  double mu = 0.0;
};

MertensReport mertens_report(uint64_t p);

std::string mertens_csv_header();
std::string mertens_csv_row(const MertensReport& r);

// Both factorizations of Phi(x,p) = linear * factor. Requires x > 0.
struct DecompositionTerms {
  uint64_t phi = 0;             // Phi(x,p)
  double delta = 0.0;           // DeltaPhi(x,p)
  double natural_linear = 0.0;  // (phi(p#)/p#) x
  double natural_factor = 0.0;  // 1 + DeltaPhi*p#/(phi(p#) x)
  double tenenbaum_linear = 0.0;  // x/ln p
  double tenenbaum_factor = 0.0;  // phi(p#) ln p/p# + DeltaPhi ln p/x
  bool exact_identity = false;    // phi(p#)*x + num == Phi*p#, checked in integers
};

DecompositionTerms decomposition_terms(uint64_t x, uint64_t p);

struct DriftPoint {
  uint64_t p = 0;
  double drift = 0.0;  // (surrogate - slope) * x
};

// Drift of the surrogate line against the symmetry line at coordinate x.
std::vector<DriftPoint> drift_series(std::span<const uint64_t> ps, uint64_t x);

}  // namespace rough
