#include "rough/asym.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rough/count.hpp"
#include "rough/primes.hpp"

namespace rough {

long double symmetry_slope(uint64_t p) {
  if (!is_prime(p)) throw std::domain_error("symmetry_slope: p must be prime");
  if (p <= kMaxSpanPrime) {
    return static_cast<long double>(totient_primorial(p)) / static_cast<long double>(primorial(p));
  }
  const auto primes = primes_up_to(p);
  long double log_slope = 0;
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    log_slope += std::log(static_cast<long double>(*it - 1) / static_cast<long double>(*it));
  }
  return std::exp(log_slope);
}

long double mean_gap(uint64_t p) { return 1.0L / symmetry_slope(p); }

MertensReport mertens_report(uint64_t p) {
  MertensReport r;
  r.p = p;
  const long double slope = symmetry_slope(p);
  if (p <= kMaxSpanPrime) {
    r.exact = true;
    r.slope_num = totient_primorial(p);
    r.slope_den = primorial(p);
  }
  const long double surrogate =
      std::exp(-kEulerGamma) / std::log(static_cast<long double>(p));
  r.slope = static_cast<double>(slope);
  r.surrogate = static_cast<double>(surrogate);
  r.relative_error = static_cast<double>((surrogate - slope) / slope);
  r.drift_rate = static_cast<double>(surrogate - slope);
  r.mu = static_cast<double>(1.0L / slope);
  return r;
}

std::string mertens_csv_header() { return "p,slope,surrogate,rel_error,mu"; }

std::string mertens_csv_row(const MertensReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%llu,%.9f,%.9f,%.6f,%.6f",
                static_cast<unsigned long long>(r.p), r.slope, r.surrogate, r.relative_error,
                r.mu);
  return buf;
}

DecompositionTerms decomposition_terms(uint64_t x, uint64_t p) {
  if (x == 0) throw std::domain_error("decomposition_terms: x must be positive");
  DecompositionTerms t;
  const uint64_t N = primorial(p);
  const uint64_t T = totient_primorial(p);
  t.phi = phi_count(x, p);
  const DeltaValue d = delta_phi(x, p);
  t.delta = d.value();
  // Exact reconstruction: phi(p#)*x + num = Phi*p# by definition of the numerator.
  t.exact_identity = static_cast<int128>(T) * x + d.num == static_cast<int128>(t.phi) * N;

  const long double lx = static_cast<long double>(x);
  const long double num = static_cast<long double>(d.num);
  t.natural_linear = static_cast<double>(static_cast<long double>(T) * lx / N);
  t.natural_factor = static_cast<double>(1.0L + num / (static_cast<long double>(T) * lx));
  const long double lnp = std::log(static_cast<long double>(p));
  t.tenenbaum_linear = static_cast<double>(lx / lnp);
  t.tenenbaum_factor = static_cast<double>(static_cast<long double>(T) * lnp / N +
                                           (num / N) * lnp / lx);
  return t;
}

std::vector<DriftPoint> drift_series(std::span<const uint64_t> ps, uint64_t x) {
  std::vector<DriftPoint> out;
  out.reserve(ps.size());
  for (uint64_t p : ps) {
    const MertensReport r = mertens_report(p);
    out.push_back({p, r.drift_rate * static_cast<double>(x)});
  }
  return out;
}

}  // namespace rough
