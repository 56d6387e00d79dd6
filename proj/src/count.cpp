#include "rough/count.hpp"

#include <sstream>
#include <stdexcept>

#include "rough/repo.hpp"

namespace rough {

bool is_rough(uint64_t x, uint64_t p) {
  if (x == 0) return false;
  for (uint64_t q : primes_up_to(p)) {
    if (x % q == 0) return false;
  }
  return true;
}

uint64_t phi_count(uint64_t x, uint64_t p) {
  if (p <= kMaxMaterializedPrime) {
    auto cycle = CycleRepo::global().get(p);
    const uint64_t span = cycle->span();
    return (x / span) * cycle->length() + cycle->count_leq(x % span);
  }
  primorial(p);  // enforce the supported range
  const uint64_t prev = prev_prime_before(p);
  return phi_count(x, prev) - phi_count(x / p, prev);
}

DeltaValue delta_phi(uint64_t x, uint64_t p) {
  const uint64_t span = primorial(p);
  const uint64_t tot = totient_primorial(p);
  const uint64_t r = x % span;  // DeltaPhi is periodic with period p#
  const uint64_t count = phi_count(r, p);
  const int128 num = static_cast<int128>(count) * span - static_cast<int128>(tot) * r;
  return {num, span};
}

DeltaValue delta_phi_left(uint64_t x, uint64_t p) {
  DeltaValue d = delta_phi(x, p);
  if (is_rough(x % primorial(p), p)) d.num -= d.den;
  return d;
}

uint32_t midcycle_exponent(uint64_t p) {
  const uint64_t q = next_prime_after(p);
  uint32_t j = 0;
  while ((uint64_t{2} << j) < q) ++j;  // largest J with 2^J < q
  return j;
}

std::vector<KnownValueRow> known_values(uint64_t p) {
  if (p < 5) throw std::domain_error("known_values: requires p >= 5 (midcycle constellation)");
  const int128 N = primorial(p);
  const int128 T = totient_primorial(p);
  const uint64_t den = static_cast<uint64_t>(N);
  const uint64_t q = next_prime_after(p);
  const uint32_t J = midcycle_exponent(p);
  const uint64_t half = den / 2;

  std::vector<KnownValueRow> rows;
  auto add = [&](std::string label, uint64_t x, int128 lower_num, bool rough) {
    DeltaValue lower{lower_num, den};
    DeltaValue upper{rough ? lower_num + N : lower_num, den};
    rows.push_back({std::move(label), x, lower, upper, rough});
  };
  // A reflected row p#-x swaps and negates: lower(p#-x) = -upper(x).
  auto add_reflected = [&](std::string label, uint64_t x, int128 upper_num_of_x, bool rough) {
    add(std::move(label), den - x, -upper_num_of_x, rough);
  };

  add("0", 0, 0, false);
  add("1", 1, -T, true);
  add("q", q, N - q * T, true);
  add("p#/2", half, 0, false);
  for (uint32_t j = 1; j <= J + 1; ++j) {
    const int128 pw = int128{1} << j;
    add("p#/2-2^" + std::to_string(j), half - static_cast<uint64_t>(pw), pw * T - j * N, true);
  }

  add_reflected("p#", 0, 0, false);
  add_reflected("p#-1", 1, N - T, true);
  add_reflected("p#-q", q, 2 * N - q * T, true);
  for (uint32_t j = 1; j <= J + 1; ++j) {
    const int128 pw = int128{1} << j;
    add_reflected("p#/2+2^" + std::to_string(j), half - static_cast<uint64_t>(pw),
                  pw * T - (j - 1) * N, true);
  }
  return rows;
}

bool VerifyReport::all_passed() const {
  for (const auto& l : laws) {
    if (!l.passed()) return false;
  }
  return true;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  for (const auto& l : laws) {
    os << (l.passed() ? "[ok]   " : "[FAIL] ") << l.law << ": " << (l.samples - l.failures) << "/"
       << l.samples << " samples";
    if (!l.passed()) os << " (first failure: " << l.first_failure << ")";
    os << '\n';
  }
  return os.str();
}

VerifyReport verify_translation(uint64_t p, std::span<const uint64_t> xs) {
  const uint64_t span = primorial(p);
  const uint64_t tot = totient_primorial(p);
  LawReport delta_law{"delta_phi(x+p#) == delta_phi(x)"};
  LawReport count_law{"phi_count(x+p#) == phi_count(x) + phi(p#)"};
  for (uint64_t x : xs) {
    ++delta_law.samples;
    if (!(delta_phi(x + span, p) == delta_phi(x, p))) {
      if (delta_law.failures++ == 0) delta_law.first_failure = "x = " + std::to_string(x);
    }
    ++count_law.samples;
    if (phi_count(x + span, p) != phi_count(x, p) + tot) {
      if (count_law.failures++ == 0) count_law.first_failure = "x = " + std::to_string(x);
    }
  }
  return {{delta_law, count_law}};
}

VerifyReport verify_rotation(uint64_t p, std::span<const uint64_t> xs) {
  const uint64_t span = primorial(p);
  const uint64_t half = span / 2;
  LawReport end_law{"delta_phi(p#-x) == -delta_phi_left(x)"};
  LawReport mid_law{"delta_phi(p#/2+x) == -delta_phi_left(p#/2-x)"};
  for (uint64_t x : xs) {
    const uint64_t y = x % (half + 1);  // clamp samples into [0, p#/2]
    ++end_law.samples;
    if (!(delta_phi(span - y, p) == -delta_phi_left(y, p))) {
      if (end_law.failures++ == 0) end_law.first_failure = "x = " + std::to_string(y);
    }
    ++mid_law.samples;
    if (!(delta_phi(half + y, p) == -delta_phi_left(half - y, p))) {
      if (mid_law.failures++ == 0) mid_law.first_failure = "x = " + std::to_string(y);
    }
  }
  return {{end_law, mid_law}};
}

}  // namespace rough
