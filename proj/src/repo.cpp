#include "rough/repo.hpp"

#include <algorithm>

#include "rough/cache.hpp"
#include "rough/errors.hpp"

namespace rough {

void CycleRepo::set_cache_dir(std::filesystem::path dir) {
  std::lock_guard lock(mu_);
  dir_ = std::move(dir);
}

std::filesystem::path CycleRepo::cache_file(uint64_t p) const {
  return dir_ / ("pgap-" + std::to_string(p) + ".bin");
}

std::shared_ptr<const GapCycle> CycleRepo::get(uint64_t p) {
  primorial(p);  // validates p and the span limit up front
  if (p > kMaxMaterializedPrime) {
    throw ResourceError("CycleRepo::get: G(" + std::to_string(p) +
                        "#) is not materialized; use stream()");
  }
  std::lock_guard lock(mu_);
  auto it = cycles_.find(p);
  if (it != cycles_.end()) return it->second;

  std::shared_ptr<const GapCycle> cycle;
  if (!dir_.empty() && std::filesystem::exists(cache_file(p))) {
    cycle = std::make_shared<const GapCycle>(cache_read(p, cache_file(p)));
  } else {
    cycle = std::make_shared<const GapCycle>(generate_cycle(p));
  }
  cycles_[p] = cycle;
  return cycle;
}

CycleStream CycleRepo::stream(uint64_t p) {
  primorial(p);
  if (p <= kMaxMaterializedPrime) return CycleStream::materialized(get(p));
  if (p > kMaxStreamPrime) {
    throw ResourceError("CycleRepo::stream: streaming beyond p = " +
                        std::to_string(kMaxStreamPrime) + " is unsupported (period too long)");
  }
  return CycleStream::wheel(get(prev_prime_before(p)), p);
}

CycleStream CycleRepo::stream_at(uint64_t p, uint64_t x) {
  CycleStream s = stream(p);
  if (x <= 1) return s;
  const uint64_t span = s.span();
  const uint64_t periods = (x - 1) / span;
  const uint64_t xm = x - periods * span;  // period-local target in [1, span]
  uint64_t local_idx, local_rough;
  if (p <= kMaxMaterializedPrime) {
    auto cycle = get(p);
    local_idx = cycle->count_leq(xm - 1);
    local_rough = cycle->rough_at(local_idx);
  } else {
    auto base = get(prev_prime_before(p));
    local_rough = derived_next_rough(*base, p, xm);
    local_idx = derived_count_leq(*base, p, local_rough) - 1;
  }
  s.seek(periods * s.length() + local_idx, periods * span + local_rough);
  return s;
}

uint64_t CycleRepo::max_gap(uint64_t p) {
  {
    std::lock_guard lock(mu_);
    auto it = max_gaps_.find(p);
    if (it != max_gaps_.end()) return it->second;
  }
  uint64_t result;
  if (p <= kMaxMaterializedPrime) {
    result = get(p)->max_gap();
  } else {
    auto s = stream(p);  // one full pass over the streamed period
    uint32_t best = 0;
    for (uint64_t i = 0; i < s.length(); ++i) best = std::max(best, s.next());
    result = best;
  }
  std::lock_guard lock(mu_);
  max_gaps_[p] = result;
  return result;
}

void CycleRepo::clear() {
  std::lock_guard lock(mu_);
  cycles_.clear();
  max_gaps_.clear();
}

CycleRepo& CycleRepo::global() {
  static CycleRepo repo;
  return repo;
}

uint64_t max_gap(uint64_t p) { return CycleRepo::global().max_gap(p); }

}  // namespace rough
