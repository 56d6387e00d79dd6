#include <doctest.h>

#include <numeric>
#include <stdexcept>

#include "naive_oracle.hpp"
#include "rough/errors.hpp"
#include "rough/gap_cycle.hpp"
#include "rough/repo.hpp"

using namespace rough;

namespace {

std::vector<uint64_t> roughs_from_cycle(const GapCycle& c) {
  std::vector<uint64_t> out{1};
  uint64_t x = 1;
  for (uint16_t g : c.gaps()) {
    x += g;
    out.push_back(x);
  }
  out.pop_back();  // the last prefix sum is p#+1, outside the period
  return out;
}

}  // namespace

TEST_CASE("smallest cycles are the known ones") {
  CHECK(generate_cycle(5).gaps() == std::vector<uint16_t>{6, 4, 2, 4, 2, 4, 6, 2});
  CHECK(generate_cycle(3).gaps() == std::vector<uint16_t>{4, 2});
  CHECK(generate_cycle(2).gaps() == std::vector<uint16_t>{2});
}

TEST_CASE("G(7#) shape") {
  const GapCycle c = generate_cycle(7);
  CHECK(c.length() == 48);
  CHECK(c.span() == 210);
  CHECK(c.gaps().front() == 10);
  CHECK(c.gaps().back() == 2);
}

TEST_CASE("max gap") {
  CHECK(generate_cycle(3).max_gap() == 4);
  CHECK(generate_cycle(5).max_gap() == 6);
  CHECK(generate_cycle(7).max_gap() == 10);
  CHECK(max_gap(7) == 10);
}

TEST_CASE("cycle invariants hold for p <= 13") {
  for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
    const auto rep = verify_cycle(generate_cycle(p));
    CAPTURE(p);
    CHECK(rep.all_passed());
  }
}

TEST_CASE("verify_cycle includes the 2*p_prev gap check") {
  const auto rep = verify_cycle(generate_cycle(11));
  bool found = false;
  for (const auto& check : rep.checks) {
    if (check.name == "gap_2p_prev") {
      found = true;
      CHECK(check.passed);
      CHECK(check.detail == "2*p_prev = 14");
    }
  }
  CHECK(found);
}

TEST_CASE("perturbed cycle fails the symmetry check but keeps its sum") {
  auto gaps = generate_cycle(7).gaps();
  gaps[2] += 2;  // +2 somewhere, -2 elsewhere: span preserved
  gaps[5] -= 2;
  const GapCycle bad(7, gaps);
  const auto rep = verify_cycle(bad);
  CHECK_FALSE(rep.all_passed());
  for (const auto& check : rep.checks) {
    if (check.name == "span_sum" || check.name == "gap_count") CHECK(check.passed);
    if (check.name == "reflective_symmetry") CHECK_FALSE(check.passed);
  }
}

TEST_CASE("prefix sums enumerate the p-rough numbers (trial-division oracle)") {
  for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
    const GapCycle c = generate_cycle(p);
    CAPTURE(p);
    CHECK(roughs_from_cycle(c) == naive::rough_numbers(1, c.span() - 1, p));
  }
}

TEST_CASE("segmented sieve and wheel recursion agree for p <= 13") {
  for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
    CAPTURE(p);
    CHECK(generate_cycle(p, CycleBackend::kSegmentedSieve).gaps() ==
          generate_cycle(p, CycleBackend::kWheelRecursion).gaps());
  }
}

TEST_CASE("streamed generation equals materialized generation for p <= 13") {
  for (uint64_t p : {3, 5, 7, 11, 13}) {
    const auto materialized = generate_cycle(p);
    auto base = std::make_shared<const GapCycle>(generate_cycle(prev_prime_before(p)));
    CycleStream s = CycleStream::wheel(base, p);
    CAPTURE(p);
    REQUIRE(s.length() == materialized.length());
    bool equal = true;
    for (uint64_t i = 0; i < s.length(); ++i) {
      if (s.next() != materialized.gap(i)) {
        equal = false;
        break;
      }
    }
    CHECK(equal);
    CHECK(s.rough() == materialized.span() + 1);
  }
}

TEST_CASE("generation limits") {
  CHECK_THROWS_AS(generate_cycle(29), ResourceError);    // stream-only
  CHECK_THROWS_AS(generate_cycle(53), std::range_error); // span overflows
  CHECK_THROWS_AS(generate_cycle(9), std::domain_error); // not prime
}

TEST_CASE("rough_at and count_leq") {
  const GapCycle c = generate_cycle(7);
  CHECK(c.rough_at(0) == 1);
  CHECK(c.rough_at(1) == 11);
  CHECK(c.rough_at(c.length()) == 211);
  CHECK(c.count_leq(0) == 0);
  CHECK(c.count_leq(1) == 1);
  CHECK(c.count_leq(10) == 1);
  CHECK(c.count_leq(11) == 2);
  CHECK(c.count_leq(210) == 48);
  for (uint64_t x = 0; x <= c.span(); ++x) {
    if (c.count_leq(x) != naive::phi_count(x, 7)) {
      CAPTURE(x);
      CHECK(c.count_leq(x) == naive::phi_count(x, 7));
      break;
    }
  }
}

TEST_CASE("cursor seek repositions consistently") {
  auto cycle = std::make_shared<const GapCycle>(generate_cycle(7));
  MaterializedCursor cur(cycle);
  std::vector<uint32_t> head;
  for (int i = 0; i < 10; ++i) head.push_back(cur.next());
  cur.seek(4, cycle->rough_at(4));
  for (uint64_t i = 4; i < 10; ++i) {
    CHECK(cur.next() == head[i]);
  }
  CHECK_THROWS_AS(cur.seek(3, 999), std::logic_error);
}

TEST_CASE("wheel cursor seek mid-period") {
  auto base = std::make_shared<const GapCycle>(generate_cycle(11));
  const GapCycle full = generate_cycle(13);
  WheelCursor cur(base, 13);
  // Position at an arbitrary gap index and compare against the materialized cycle.
  const uint64_t idx = 2345;
  cur.seek(idx, full.rough_at(idx));
  for (uint64_t i = idx; i < idx + 50; ++i) {
    CHECK(cur.next() == full.gap(i % full.length()));
  }
}

TEST_CASE("derived positioning helpers") {
  auto base = generate_cycle(11);
  const GapCycle full = generate_cycle(13);
  for (uint64_t x : {1ULL, 2ULL, 17ULL, 221ULL, 15015ULL, 30029ULL}) {
    CAPTURE(x);
    CHECK(derived_count_leq(base, 13, x) == full.count_leq(std::min(x, full.span())));
  }
  CHECK(derived_next_rough(base, 13, 1) == 1);
  CHECK(derived_next_rough(base, 13, 2) == 17);   // 13 is struck from G(11#)
  CHECK(derived_next_rough(base, 13, 14) == 17);
  CHECK(derived_next_rough(base, 13, 17) == 17);
}
