#include "rough/gap_cycle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rough/errors.hpp"

namespace rough {

GapCycle::GapCycle(uint64_t p, std::vector<uint16_t> gaps) : p_(p), gaps_(std::move(gaps)) {
  if (!is_prime(p_)) throw std::domain_error("GapCycle: p must be prime, got " + std::to_string(p_));
  if (gaps_.empty()) throw std::domain_error("GapCycle: empty gap sequence");
  length_ = gaps_.size();
  block_rough_.reserve(length_ / kBlock + 2);
  uint64_t r = 1;
  for (uint64_t i = 0; i <= length_; ++i) {
    if (i % kBlock == 0) block_rough_.push_back(r);
    if (i < length_) {
      max_gap_ = std::max(max_gap_, gaps_[i]);
      r += gaps_[i];
    }
  }
  span_ = r - 1;
}

uint64_t GapCycle::rough_at(uint64_t index) const {
  if (index > length_) throw std::out_of_range("GapCycle::rough_at: index past cycle end");
  uint64_t b = index / kBlock;
  uint64_t r = block_rough_[b];
  for (uint64_t i = b * kBlock; i < index; ++i) r += gaps_[i];
  return r;
}

uint64_t GapCycle::count_leq(uint64_t x) const {
  if (x < 1) return 0;
  if (x >= span_) return length_;
  auto it = std::upper_bound(block_rough_.begin(), block_rough_.end(), x);
  uint64_t b = static_cast<uint64_t>(it - block_rough_.begin()) - 1;
  uint64_t i = b * kBlock;
  uint64_t r = block_rough_[b];
  while (i < length_ && r + gaps_[i] <= x) {
    r += gaps_[i];
    ++i;
  }
  return i + 1;
}

// --- generation --------------------------------------------------------------

static std::vector<uint16_t> sieve_cycle_gaps(uint64_t p) {
  const uint64_t span = primorial(p);
  const auto primes = primes_up_to(p);
  const uint64_t hi = span + 1;  // p#+1 is rough again; closes the wrap gap
  constexpr uint64_t kSeg = uint64_t{1} << 22;

  std::vector<uint16_t> gaps;
  gaps.reserve(totient_primorial(p));
  std::vector<char> seg;
  uint64_t prev = 0;
  for (uint64_t lo = 1; lo <= hi; lo += kSeg) {
    const uint64_t end = std::min(lo + kSeg - 1, hi);  // window [lo, end]
    const size_t len = static_cast<size_t>(end - lo + 1);
    seg.assign(len, 1);
    for (uint64_t q : primes) {
      for (uint64_t m = ((lo + q - 1) / q) * q; m <= end; m += q) seg[m - lo] = 0;
    }
    for (size_t i = 0; i < len; ++i) {
      if (!seg[i]) continue;
      const uint64_t n = lo + i;
      if (prev != 0) {
        const uint64_t g = n - prev;
        if (g > 0xFFFF) throw std::logic_error("sieve_cycle_gaps: gap exceeds 16 bits");
        gaps.push_back(static_cast<uint16_t>(g));
      }
      prev = n;
    }
  }
  return gaps;
}

static std::shared_ptr<const GapCycle> borrow(const GapCycle& c) {
  return std::shared_ptr<const GapCycle>(&c, [](const GapCycle*) {});
}

GapCycle wheel_extend(const GapCycle& base, uint64_t p) {
  if (p != next_prime_after(base.prime())) {
    throw std::domain_error("wheel_extend: p must be the next prime after " +
                            std::to_string(base.prime()));
  }
  const uint64_t target = base.length() * (p - 1);  // phi(p#)
  std::vector<uint16_t> gaps;
  gaps.reserve(target);
  WheelCursor cur(borrow(base), p);
  for (uint64_t i = 0; i < target; ++i) {
    const uint32_t g = cur.next();
    if (g > 0xFFFF) throw std::logic_error("wheel_extend: fused gap exceeds 16 bits");
    gaps.push_back(static_cast<uint16_t>(g));
  }
  if (cur.rough() != base.span() * p + 1) {
    throw std::logic_error("wheel_extend: recursion did not close the cycle");
  }
  return GapCycle(p, std::move(gaps));
}

GapCycle generate_cycle(uint64_t p, CycleBackend backend) {
  const uint64_t span = primorial(p);  // validates p, enforces the 64-bit span limit
  if (p > kMaxMaterializedPrime) {
    throw ResourceError("generate_cycle: phi(" + std::to_string(p) +
                        "#) gaps do not fit the materialization budget; use streamed access "
                        "(CycleRepo::stream or scan_period)");
  }
  if (backend == CycleBackend::kAuto) {
    backend = p <= 13 ? CycleBackend::kSegmentedSieve : CycleBackend::kWheelRecursion;
  }

  GapCycle cycle = [&] {
    if (backend == CycleBackend::kSegmentedSieve) return GapCycle(p, sieve_cycle_gaps(p));
    GapCycle c(2, {2});
    for (uint64_t q : primes_up_to(p)) {
      if (q == 2) continue;
      c = wheel_extend(c, q);
    }
    return c;
  }();

  if (cycle.span() != span || cycle.length() != totient_primorial(p)) {
    throw std::logic_error("generate_cycle: generated cycle has wrong span or length");
  }
  return cycle;
}

// --- verification ------------------------------------------------------------

bool CycleReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string CycleReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "[ok]   " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  return os.str();
}

CycleReport verify_cycle(const GapCycle& cycle) {
  const uint64_t p = cycle.prime();
  const auto& g = cycle.gaps();
  const uint64_t n = cycle.length();
  CycleReport rep{p, {}};
  auto add = [&](const std::string& name, bool ok, const std::string& detail = "") {
    rep.checks.push_back({name, ok, detail});
  };

  const uint64_t span = primorial(p);
  add("span_sum", cycle.span() == span,
      "sum " + std::to_string(cycle.span()) + " vs p# " + std::to_string(span));
  const uint64_t tot = totient_primorial(p);
  add("gap_count", n == tot, std::to_string(n) + " vs phi(p#) " + std::to_string(tot));

  const uint64_t q = next_prime_after(p);
  add("first_gap", g.front() == q - 1,
      "g_1 = " + std::to_string(g.front()) + ", q-1 = " + std::to_string(q - 1));
  add("last_gap", g.back() == 2, "g_phi = " + std::to_string(g.back()));

  bool palin = true;
  uint64_t bad_k = 0;
  for (uint64_t i = 0; i + 1 < n; ++i) {
    if (g[i] != g[n - 2 - i]) {
      palin = false;
      bad_k = i + 1;
      break;
    }
  }
  add("reflective_symmetry", palin,
      palin ? "" : "g_k != g_{phi-k} at k = " + std::to_string(bad_k));

  if (p == 2) {
    add("gap_2p_prev", true, "n/a for p = 2");
  } else {
    const uint64_t want = 2 * prev_prime_before(p);
    const bool found = std::find(g.begin(), g.end(), static_cast<uint16_t>(want)) != g.end();
    add("gap_2p_prev", found, "2*p_prev = " + std::to_string(want));
  }

  bool parity = true;
  for (uint64_t i = 0; i < n; ++i) {
    if (g[i] < 2 || (p >= 3 && g[i] % 2 != 0)) {
      parity = false;
      break;
    }
  }
  add("gap_parity", parity, parity ? "" : "gap < 2 or odd gap found");
  return rep;
}

// --- cursors -----------------------------------------------------------------

MaterializedCursor::MaterializedCursor(std::shared_ptr<const GapCycle> cycle)
    : cycle_(std::move(cycle)), gaps_(&cycle_->gaps()) {}

void MaterializedCursor::seek(uint64_t gap_index, uint64_t rough) {
  pos_ = static_cast<size_t>(gap_index % cycle_->length());
  const uint64_t expect = cycle_->rough_at(pos_);
  if ((rough - 1) % cycle_->span() + 1 != expect) {
    throw std::logic_error("MaterializedCursor::seek: coordinate does not match gap index");
  }
  index_ = gap_index;
  rough_ = rough;
}

WheelCursor::WheelCursor(std::shared_ptr<const GapCycle> base, uint64_t p)
    : base_(std::move(base)), base_gaps_(&base_->gaps()), p_(p), striker_rough_(1), strike_(p) {
  if (p_ != next_prime_after(base_->prime())) {
    throw std::domain_error("WheelCursor: p must be the next prime after the base prime");
  }
}

void WheelCursor::seek(uint64_t gap_index, uint64_t rough) {
  const uint64_t bs = base_->span();
  const uint64_t span = bs * p_;
  const uint64_t periods = (rough - 1) / span;  // strikes repeat with the derived period
  const uint64_t roff = rough - periods * span;
  const uint64_t off = (roff - 1) % bs + 1;
  const uint64_t bidx = base_->count_leq(off);
  if (bidx == 0 || base_->rough_at(bidx - 1) != off) {
    throw std::logic_error("WheelCursor::seek: coordinate is not a base rough number");
  }
  bpos_ = static_cast<size_t>((bidx - 1) % base_->length());
  rough_ = rough;
  index_ = gap_index;
  // Striker: first base rough r with p*r > rough, in period-local terms.
  const uint64_t m = roff / p_;
  const uint64_t c = base_->count_leq(std::min(m, bs));
  spos_ = static_cast<size_t>(c % base_->length());
  striker_rough_ = base_->rough_at(c) + periods * bs;
  strike_ = p_ * striker_rough_;
}

CycleStream CycleStream::materialized(std::shared_ptr<const GapCycle> cycle) {
  CycleStream s;
  s.p_ = cycle->prime();
  s.span_ = cycle->span();
  s.length_ = cycle->length();
  s.cur_.emplace<MaterializedCursor>(std::move(cycle));
  return s;
}

CycleStream CycleStream::wheel(std::shared_ptr<const GapCycle> base, uint64_t p) {
  CycleStream s;
  s.p_ = p;
  s.span_ = base->span() * p;
  s.length_ = base->length() * (p - 1);
  s.cur_.emplace<WheelCursor>(std::move(base), p);
  return s;
}

uint32_t CycleStream::next() {
  if (auto* m = std::get_if<MaterializedCursor>(&cur_)) return m->next();
  return std::get<WheelCursor>(cur_).next();
}

uint64_t CycleStream::index() const {
  if (auto* m = std::get_if<MaterializedCursor>(&cur_)) return m->index();
  return std::get<WheelCursor>(cur_).index();
}

uint64_t CycleStream::rough() const {
  if (auto* m = std::get_if<MaterializedCursor>(&cur_)) return m->rough();
  return std::get<WheelCursor>(cur_).rough();
}

void CycleStream::seek(uint64_t gap_index, uint64_t rough) {
  if (auto* m = std::get_if<MaterializedCursor>(&cur_)) return m->seek(gap_index, rough);
  std::get<WheelCursor>(cur_).seek(gap_index, rough);
}

// --- derived-cycle positioning -------------------------------------------------

// Count of base roughs in [1, y] for y possibly spanning several base periods.
static uint64_t base_count(const GapCycle& base, uint64_t y) {
  const uint64_t bs = base.span();
  return (y / bs) * base.length() + base.count_leq(y % bs);
}

uint64_t derived_count_leq(const GapCycle& base, uint64_t p, uint64_t x) {
  // p-rough <= x are the base roughs <= x minus the base roughs of the form p*r.
  return base_count(base, x) - base_count(base, x / p);
}

uint64_t derived_next_rough(const GapCycle& base, uint64_t p, uint64_t x) {
  const uint64_t bs = base.span();
  uint64_t y = x;
  for (;;) {
    const uint64_t m = (y - 1) / bs;
    const uint64_t off = y - m * bs;  // in [1, bs]
    const uint64_t c = base.count_leq(off - 1);
    const uint64_t r = m * bs + base.rough_at(c);  // smallest base rough >= y
    if (r % p != 0) return r;
    y = r + 1;
  }
}

}  // namespace rough
