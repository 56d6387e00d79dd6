#include "rough/primes.hpp"

#include <stdexcept>
#include <string>

namespace rough {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (uint64_t i = 5; i * i <= n; i += 6) {
    if (n % i == 0 || n % (i + 2) == 0) return false;
  }
  return true;
}

std::vector<uint64_t> primes_up_to(uint64_t p) {
  if (p < 2) throw std::domain_error("primes_up_to: p must be >= 2, got " + std::to_string(p));
  std::vector<char> mark(p + 1, 1);
  mark[0] = mark[1] = 0;
  for (uint64_t i = 2; i * i <= p; ++i) {
    if (!mark[i]) continue;
    for (uint64_t j = i * i; j <= p; j += i) mark[j] = 0;
  }
  std::vector<uint64_t> primes;
  for (uint64_t i = 2; i <= p; ++i) {
    if (mark[i]) primes.push_back(i);
  }
  return primes;
}

uint64_t next_prime_after(uint64_t p) {
  uint64_t n = p + 1;
  while (!is_prime(n)) ++n;
  return n;
}

uint64_t prev_prime_before(uint64_t p) {
  if (p <= 2) throw std::domain_error("prev_prime_before: no prime below " + std::to_string(p));
  uint64_t n = p - 1;
  while (n >= 2 && !is_prime(n)) --n;
  return n;
}

static void require_prime(uint64_t p, const char* who) {
  if (!is_prime(p)) {
    throw std::domain_error(std::string(who) + ": " + std::to_string(p) + " is not prime");
  }
}

uint64_t primorial(uint64_t p) {
  require_prime(p, "primorial");
  if (p > kMaxSpanPrime) {
    throw std::range_error("primorial: p# overflows 64 bits for p > " +
                           std::to_string(kMaxSpanPrime) + " (got p = " + std::to_string(p) + ")");
  }
  uint64_t r = 1;
  for (uint64_t q : primes_up_to(p)) r *= q;
  return r;
}

uint64_t totient_primorial(uint64_t p) {
  require_prime(p, "totient_primorial");
  if (p > kMaxSpanPrime) {
    throw std::range_error("totient_primorial: phi(p#) overflows 64 bits for p > " +
                           std::to_string(kMaxSpanPrime) + " (got p = " + std::to_string(p) + ")");
  }
  uint64_t r = 1;
  for (uint64_t q : primes_up_to(p)) r *= q - 1;
  return r;
}

}  // namespace rough
