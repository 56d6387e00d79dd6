#pragma once

#include <cstdint>
#include <vector>

namespace rough {

// 53# = 32589158477190044730 does not fit in 64 bits; 47# does.
inline constexpr uint64_t kMaxSpanPrime = 47;

bool is_prime(uint64_t n);

// Exactly the primes <= p, ascending. Throws std::domain_error for p < 2.
std::vector<uint64_t> primes_up_to(uint64_t p);

uint64_t next_prime_after(uint64_t p);

// Largest prime strictly below p. Throws std::domain_error for p <= 2.
uint64_t prev_prime_before(uint64_t p);

// p# = product of primes <= p. Requires p prime; throws std::range_error for
// p > kMaxSpanPrime (the message names the supported maximum).
uint64_t primorial(uint64_t p);

// phi(p#) = product of (q - 1) over primes q <= p.
uint64_t totient_primorial(uint64_t p);

}  // namespace rough
