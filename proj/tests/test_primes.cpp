#include <doctest.h>

#include <stdexcept>

#include "rough/primes.hpp"

using namespace rough;

TEST_CASE("primes_up_to enumerates exactly the primes") {
  CHECK(primes_up_to(2) == std::vector<uint64_t>{2});
  CHECK(primes_up_to(13) == std::vector<uint64_t>{2, 3, 5, 7, 11, 13});
  CHECK(primes_up_to(30) == std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK_THROWS_AS(primes_up_to(1), std::domain_error);
  CHECK_THROWS_AS(primes_up_to(0), std::domain_error);
}

TEST_CASE("next and previous primes") {
  CHECK(next_prime_after(2) == 3);
  CHECK(next_prime_after(13) == 17);
  CHECK(next_prime_after(23) == 29);
  CHECK(prev_prime_before(3) == 2);
  CHECK(prev_prime_before(29) == 23);
  CHECK_THROWS_AS(prev_prime_before(2), std::domain_error);
}

TEST_CASE("primorial values") {
  CHECK(primorial(2) == 2);
  CHECK(primorial(5) == 30);
  CHECK(primorial(17) == 510510);
  CHECK(primorial(29) == 6469693230ULL);
  CHECK(primorial(47) == 614889782588491410ULL);
}

TEST_CASE("primorial rejects non-primes and overflow") {
  CHECK_THROWS_AS(primorial(4), std::domain_error);
  CHECK_THROWS_AS(primorial(1), std::domain_error);
  CHECK_THROWS_AS(primorial(53), std::range_error);
  CHECK_THROWS_WITH_AS(primorial(59), doctest::Contains("47"), std::range_error);
}

TEST_CASE("totient of the primorial") {
  CHECK(totient_primorial(2) == 1);
  CHECK(totient_primorial(5) == 8);
  CHECK(totient_primorial(19) == 1658880);
  // The product 1*2*4*6*10*12*16*18*22; the printed table value 36595360 is
  // a known misprint.
  CHECK(totient_primorial(23) == 36495360);
  CHECK(totient_primorial(29) == 1021870080ULL);
  CHECK_THROWS_AS(totient_primorial(6), std::domain_error);
}

TEST_CASE("is_prime small values") {
  CHECK(is_prime(2));
  CHECK(is_prime(47));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(49));
  CHECK_FALSE(is_prime(0));
}
