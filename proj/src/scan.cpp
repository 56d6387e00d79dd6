#include "rough/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rough/errors.hpp"
#include "rough/repo.hpp"

namespace rough {

namespace {

using nlohmann::json;

// Event i of the scan: arrive at rough r_i with the lower (left-limit)
// numerator, rise by p#, then decay by phi(p#) per unit over gap g_i.
// Lower(i) = i*p# - phi*r_i and Upper(i) = Lower(i) + p#; both stay within
// (max|DeltaPhi|+1)*p#, comfortably inside int64 for p <= 29.
struct KernelState {
  uint64_t event = 0;
  uint64_t x = 1;
  int64_t num = 0;  // lower numerator on arrival at x
};

struct ZeroAnchor {
  bool valid = false;
  bool rising = false;
  uint64_t event = 0;
  uint64_t rough = 0;  // r_event in period coordinates
};

struct ExtremumTrack {
  int64_t num = 0;
  uint64_t event = 0;
  uint64_t x = 0;
  uint64_t count = 0;
  ZeroAnchor anchor;  // last zero before first attainment
};

struct ChunkPartial {
  uint64_t first_event = 0;
  uint64_t events = 0;
  ExtremumTrack max{INT64_MIN};
  ExtremumTrack min{INT64_MAX};
  uint64_t n0_plus = 0;
  uint64_t n0_minus = 0;
  ZeroAnchor first_zero;  // first zero recorded inside the chunk
  ZeroAnchor last_zero;   // chunk 0 starts with the wrap-zero seed
  bool alternation_ok = true;
};

int64_t lower_numerator(uint64_t event, uint64_t x, int64_t P, int64_t T) {
  const int128 v = static_cast<int128>(event) * P - static_cast<int128>(T) * x;
  return static_cast<int64_t>(v);
}

template <class Cursor>
void scan_chunk(Cursor& cur, uint64_t n_events, KernelState& st, ChunkPartial& out,
                const int64_t P, const int64_t T) {
  int64_t num = st.num;
  uint64_t x = st.x;
  uint64_t event = st.event;
  for (uint64_t left = n_events; left > 0; --left) {
    if (num <= out.min.num) {
      if (num < out.min.num) {
        out.min = {num, event, x, 1, out.last_zero};
      } else {
        ++out.min.count;
      }
    }
    const int64_t upper = num + P;
    if (num < 0 && upper > 0) {  // rising zero, crossed on this vertical
      if (out.last_zero.valid && out.last_zero.rising) out.alternation_ok = false;
      out.last_zero = {true, true, event, x};
      if (!out.first_zero.valid) out.first_zero = out.last_zero;
      ++out.n0_plus;
    }
    if (upper >= out.max.num) {
      if (upper > out.max.num) {
        out.max = {upper, event, x, 1, out.last_zero};
      } else {
        ++out.max.count;
      }
    }
    const uint32_t g = cur.next();
    num = upper - T * static_cast<int64_t>(g);
    if (upper > 0 && num < 0) {  // falling zero inside this decay
      if (out.last_zero.valid && !out.last_zero.rising) out.alternation_ok = false;
      out.last_zero = {true, false, event, x};
      if (!out.first_zero.valid) out.first_zero = out.last_zero;
      ++out.n0_minus;
    }
    x += g;
    ++event;
    ++out.events;
  }
  st = {event, x, num};
}

// Folds b onto a; a covers the events directly before b.
void merge_partials(ChunkPartial& a, const ChunkPartial& b) {
  auto resolve = [&](ExtremumTrack t) {
    if (!t.anchor.valid && a.last_zero.valid) t.anchor = a.last_zero;
    return t;
  };
  if (b.max.num > a.max.num) {
    a.max = resolve(b.max);
  } else if (b.max.num == a.max.num) {
    a.max.count += b.max.count;  // first attainment stays with a
  }
  if (b.min.num < a.min.num) {
    a.min = resolve(b.min);
  } else if (b.min.num == a.min.num) {
    a.min.count += b.min.count;
  }
  a.n0_plus += b.n0_plus;
  a.n0_minus += b.n0_minus;
  a.alternation_ok = a.alternation_ok && b.alternation_ok;
  if (a.last_zero.valid && b.first_zero.valid && a.last_zero.rising == b.first_zero.rising) {
    a.alternation_ok = false;
  }
  if (!a.first_zero.valid) a.first_zero = b.first_zero;
  if (b.last_zero.valid) a.last_zero = b.last_zero;
  a.events += b.events;
}

// --- chunk planning ----------------------------------------------------------

struct ChunkPlan {
  std::vector<KernelState> starts;  // ascending by event; starts[0] = {0, 1, -T}
  uint64_t total = 0;
};

ChunkPlan plan_chunks(uint64_t p, uint32_t chunks, const GapCycle* materialized,
                      const GapCycle* base, int64_t P, int64_t T) {
  ChunkPlan plan;
  plan.total = materialized ? materialized->length() : base->length() * (p - 1);
  plan.starts.push_back({0, 1, -T});
  for (uint32_t k = 1; k < chunks; ++k) {
    uint64_t event, rough;
    if (materialized) {
      event = plan.total / chunks * k;
      rough = materialized->rough_at(event);
    } else {
      const uint64_t ideal = base->span() * p / chunks * k;
      rough = derived_next_rough(*base, p, std::max<uint64_t>(ideal, 1));
      event = derived_count_leq(*base, p, rough) - 1;
    }
    if (event <= plan.starts.back().event || event >= plan.total) continue;
    plan.starts.push_back({event, rough, lower_numerator(event, rough, P, T)});
  }
  return plan;
}

// --- checkpointing -----------------------------------------------------------

json anchor_to_json(const ZeroAnchor& a) {
  return {{"valid", a.valid}, {"rising", a.rising}, {"event", a.event}, {"rough", a.rough}};
}

ZeroAnchor anchor_from_json(const json& j) {
  return {j.at("valid"), j.at("rising"), j.at("event"), j.at("rough")};
}

json track_to_json(const ExtremumTrack& t) {
  return {{"num", t.num}, {"event", t.event}, {"x", t.x}, {"count", t.count},
          {"anchor", anchor_to_json(t.anchor)}};
}

ExtremumTrack track_from_json(const json& j) {
  return {j.at("num"), j.at("event"), j.at("x"), j.at("count"), anchor_from_json(j.at("anchor"))};
}

json partial_to_json(const ChunkPartial& c) {
  return {{"first_event", c.first_event}, {"events", c.events},
          {"max", track_to_json(c.max)},  {"min", track_to_json(c.min)},
          {"n0_plus", c.n0_plus},         {"n0_minus", c.n0_minus},
          {"first_zero", anchor_to_json(c.first_zero)},
          {"last_zero", anchor_to_json(c.last_zero)},
          {"alternation_ok", c.alternation_ok}};
}

ChunkPartial partial_from_json(const json& j) {
  ChunkPartial c;
  c.first_event = j.at("first_event");
  c.events = j.at("events");
  c.max = track_from_json(j.at("max"));
  c.min = track_from_json(j.at("min"));
  c.n0_plus = j.at("n0_plus");
  c.n0_minus = j.at("n0_minus");
  c.first_zero = anchor_from_json(j.at("first_zero"));
  c.last_zero = anchor_from_json(j.at("last_zero"));
  c.alternation_ok = j.at("alternation_ok");
  return c;
}

constexpr const char* kCheckpointMagic = "pgap-scan-checkpoint";

struct ResumeState {
  std::map<size_t, ChunkPartial> completed;
  bool has_in_flight = false;
  size_t in_flight_chunk = 0;
  KernelState in_flight_state;
  ChunkPartial in_flight_partial;
};

class Checkpointer {
 public:
  Checkpointer(const ScanOptions& opts, uint64_t p, const ChunkPlan& plan)
      : path_(opts.checkpoint_file), p_(p) {
    if (path_.empty()) return;
    doc_["magic"] = kCheckpointMagic;
    doc_["version"] = 1;
    doc_["p"] = p;
    doc_["threshold"] = opts.near_zero_threshold;
    json starts = json::array();
    for (const auto& s : plan.starts) starts.push_back({{"event", s.event}, {"rough", s.x}});
    doc_["plan"] = starts;
    doc_["completed"] = json::object();
  }

  bool enabled() const { return !path_.empty(); }

  ResumeState load(const ChunkPlan& plan, double threshold) {
    std::ifstream in(path_);
    if (!in) throw IntegrityError("checkpoint: cannot open " + path_.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw IntegrityError("checkpoint: " + path_.string() + ": parse error: " + e.what());
    }
    if (j.value("magic", "") != kCheckpointMagic || j.value("version", 0) != 1) {
      throw IntegrityError("checkpoint: " + path_.string() + ": not a scan checkpoint");
    }
    if (j.at("p").get<uint64_t>() != p_) {
      throw IntegrityError("checkpoint: " + path_.string() + " was written for p = " +
                           std::to_string(j.at("p").get<uint64_t>()) + ", requested p = " +
                           std::to_string(p_));
    }
    if (j.at("threshold").get<double>() != threshold) {
      throw IntegrityError("checkpoint: near-zero threshold differs from the checkpointed scan");
    }
    const json& starts = j.at("plan");
    bool plan_ok = starts.size() == plan.starts.size();
    for (size_t k = 0; plan_ok && k < starts.size(); ++k) {
      plan_ok = starts[k].at("event") == plan.starts[k].event &&
                starts[k].at("rough") == plan.starts[k].x;
    }
    if (!plan_ok) {
      throw IntegrityError("checkpoint: chunk plan differs from the checkpointed scan");
    }
    ResumeState r;
    for (const auto& [key, val] : j.at("completed").items()) {
      r.completed[std::stoul(key)] = partial_from_json(val);
    }
    if (j.contains("in_flight")) {
      const json& f = j.at("in_flight");
      r.has_in_flight = true;
      r.in_flight_chunk = f.at("chunk").get<size_t>();
      r.in_flight_state = {f.at("event"), f.at("x"), f.at("num")};
      r.in_flight_partial = partial_from_json(f.at("partial"));
    }
    doc_ = std::move(j);
    doc_.erase("in_flight");
    return r;
  }

  void chunk_done(size_t k, const ChunkPartial& c) {
    if (!enabled()) return;
    std::lock_guard lock(mu_);
    doc_["completed"][std::to_string(k)] = partial_to_json(c);
    doc_.erase("in_flight");
    flush();
  }

  void in_flight(size_t k, const KernelState& st, const ChunkPartial& partial) {
    if (!enabled()) return;
    std::lock_guard lock(mu_);
    doc_["in_flight"] = {{"chunk", k}, {"event", st.event}, {"x", st.x}, {"num", st.num},
                         {"partial", partial_to_json(partial)}};
    flush();
  }

  void remove() {
    if (!enabled()) return;
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

 private:
  void flush() {
    const auto tmp = path_.string() + ".tmp";
    std::ofstream out(tmp, std::ios::trunc);
    out << doc_.dump();
    out.close();
    std::filesystem::rename(tmp, path_);
  }

  std::filesystem::path path_;
  uint64_t p_;
  json doc_;
  std::mutex mu_;
};

// --- phase 2: segment extraction ----------------------------------------------
//
// A segment bounded by a rising zero starts/ends exactly at that zero's rough
// number. A segment that starts at a falling zero starts at the rough number
// opening the decay containing the zero; one that ends at a falling zero ends
// at the rough number closing that decay. This is the convention under which
// the p=17 extremal constellations have lengths 146/49 and the reflection law
// is exact gap-for-gap.

template <class Cursor>
void extract_segments(Cursor& cur, bool is_min, const ExtremumTrack& ext, uint64_t period_len,
                      int64_t P, int64_t T, int64_t near_zero_num, ConstellationSegment& to_ext,
                      ConstellationSegment& from_ext, std::vector<NearZero>& near,
                      const char* from_name) {
  const ZeroAnchor& a = ext.anchor;
  if (!a.valid) throw std::logic_error("extract_segments: extremum has no anchor zero");
  cur.seek(a.event, a.rough);
  KernelState st{a.event, a.rough, lower_numerator(a.event, a.rough, P, T)};

  to_ext.start_x = a.rough;
  to_ext.end_x = ext.x;
  const uint64_t steps = (ext.event + period_len - a.event) % period_len;
  to_ext.gaps.reserve(steps);
  for (uint64_t i = 0; i < steps; ++i) {
    const uint32_t g = cur.next();
    to_ext.gaps.push_back(static_cast<uint16_t>(g));
    st.num += P - T * static_cast<int64_t>(g);
    st.x += g;
  }
  to_ext.length = to_ext.gaps.size();
  for (uint16_t g : to_ext.gaps) to_ext.span += g;
  to_ext.delta_num = static_cast<int64_t>(static_cast<int128>(to_ext.length) * P -
                                          static_cast<int128>(to_ext.span) * T);
  const int64_t arrival = is_min ? st.num : st.num + P;
  if (arrival != ext.num) {
    throw std::logic_error("extract_segments: extremum state mismatch on replay");
  }

  // Walk onward to the next zero. After a minimum the function stays negative
  // and exits through a rising zero (possibly on the extremum's own rise);
  // after a maximum it stays positive and exits through a falling zero, whose
  // decay gap is included per the convention above.
  from_ext.start_x = ext.x;
  bool closed = false;
  for (uint64_t guard = 0; guard <= period_len; ++guard) {
    const int64_t lower = st.num;
    const int64_t upper = lower + P;
    if (is_min) {
      if (lower < 0 && upper > 0) {
        closed = true;
        break;  // rising zero at st.x; its gap is not part of the segment
      }
      if (guard > 0 && upper < 0 && -upper < near_zero_num) {
        near.push_back({from_name, st.x, upper, static_cast<double>(upper) / static_cast<double>(P)});
      }
    } else if (guard > 0 && lower > 0 && lower < near_zero_num) {
      near.push_back({from_name, st.x, lower, static_cast<double>(lower) / static_cast<double>(P)});
    }
    const uint32_t g = cur.next();
    from_ext.gaps.push_back(static_cast<uint16_t>(g));
    st.num = upper - T * static_cast<int64_t>(g);
    st.x += g;
    if (!is_min && upper > 0 && st.num < 0) {
      closed = true;  // falling zero inside this decay; gap included
      break;
    }
  }
  if (!closed) throw std::logic_error("extract_segments: no zero found within one period");
  from_ext.length = from_ext.gaps.size();
  for (uint16_t g : from_ext.gaps) from_ext.span += g;
  from_ext.end_x = from_ext.start_x + from_ext.span;
  from_ext.delta_num = static_cast<int64_t>(static_cast<int128>(from_ext.length) * P -
                                            static_cast<int128>(from_ext.span) * T);
}

// --- driver -------------------------------------------------------------------

template <class Cursor>
ScanReport run_scan(uint64_t p, const ScanOptions& opts, const ChunkPlan& plan,
                    const std::function<Cursor()>& make_cursor, int64_t P, int64_t T) {
  Checkpointer ck(opts, p, plan);

  ResumeState resume;
  if (opts.resume && ck.enabled() && std::filesystem::exists(opts.checkpoint_file)) {
    resume = ck.load(plan, opts.near_zero_threshold);
    if (resume.has_in_flight) {
      // Recompute the numerator from (event, coordinate); disagreement means
      // the checkpoint does not describe this cycle.
      if (resume.in_flight_state.num !=
          lower_numerator(resume.in_flight_state.event, resume.in_flight_state.x, P, T)) {
        throw IntegrityError("checkpoint: numerator/state mismatch on resume");
      }
    }
  }

  const size_t n_chunks = plan.starts.size();
  std::vector<ChunkPartial> partials(n_chunks);
  std::vector<bool> have(n_chunks, false);
  for (const auto& [k, partial] : resume.completed) {
    if (k < n_chunks) {
      partials[k] = partial;
      have[k] = true;
    }
  }

  auto run_one = [&](size_t k, bool allow_in_flight) {
    const uint64_t from = plan.starts[k].event;
    const uint64_t to = k + 1 < n_chunks ? plan.starts[k + 1].event : plan.total;
    KernelState st = plan.starts[k];
    ChunkPartial out;
    out.first_event = from;
    if (k == 0) {
      // Seed with the wrap falling zero at x = 0: it lives in decay event
      // length-1 of the previous period (rough p#-1) and anchors extrema
      // occurring before the first in-period zero.
      out.last_zero = {true, false, plan.total - 1, static_cast<uint64_t>(P) - 1};
    }
    if (allow_in_flight && resume.has_in_flight && resume.in_flight_chunk == k) {
      st = resume.in_flight_state;
      out = resume.in_flight_partial;
    }
    Cursor cur = make_cursor();
    cur.seek(st.event, st.x);
    if (opts.checkpoint_every > 0 && ck.enabled()) {
      while (st.event < to) {
        const uint64_t stop = std::min(to, st.event + opts.checkpoint_every);
        scan_chunk(cur, stop - st.event, st, out, P, T);
        if (st.event < to) {
          ck.in_flight(k, st, out);
          if (opts.abort_after > 0 && out.events >= opts.abort_after) {
            throw ScanAborted{out.events};
          }
        }
      }
    } else {
      scan_chunk(cur, to - st.event, st, out, P, T);
    }
    partials[k] = out;
    have[k] = true;
    ck.chunk_done(k, out);
  };

  std::vector<size_t> pending;
  for (size_t k = 0; k < n_chunks; ++k) {
    if (!have[k]) pending.push_back(k);
  }
  if (pending.size() <= 1 || opts.chunks == 1) {
    for (size_t k : pending) run_one(k, true);
  } else {
    // Parallel chunks. In-flight state is only resumed sequentially; a
    // restarted parallel chunk rescans from its boundary.
    std::vector<std::thread> workers;
    workers.reserve(pending.size());
    std::exception_ptr err;
    std::mutex err_mu;
    for (size_t k : pending) {
      workers.emplace_back([&, k] {
        try {
          run_one(k, false);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    if (err) std::rethrow_exception(err);
  }

  ChunkPartial merged = partials[0];
  for (size_t k = 1; k < n_chunks; ++k) merge_partials(merged, partials[k]);

  ScanReport rep;
  rep.p = p;
  rep.primorial = static_cast<uint64_t>(P);
  rep.totient = static_cast<uint64_t>(T);
  rep.chunks = static_cast<uint32_t>(n_chunks);
  rep.near_zero_threshold = opts.near_zero_threshold;
  rep.y_max_num = merged.max.num;
  rep.y_min_num = merged.min.num;
  rep.x_max = merged.max.x;
  rep.x_min = merged.min.x;
  rep.max_count = merged.max.count;
  rep.min_count = merged.min.count;
  rep.n0_plus = merged.n0_plus;
  rep.n0_minus = merged.n0_minus;
  rep.alternation_ok = merged.alternation_ok && merged.first_zero.valid &&
                       merged.last_zero.valid &&
                       merged.first_zero.rising != merged.last_zero.rising;

  const int64_t near_num =
      static_cast<int64_t>(std::llround(opts.near_zero_threshold * static_cast<double>(P)));
  {
    Cursor cur = make_cursor();
    extract_segments(cur, true, merged.min, plan.total, P, T, near_num, rep.zero_to_min,
                     rep.min_to_zero, rep.near_zeros, "min_to_zero");
  }
  {
    Cursor cur = make_cursor();
    extract_segments(cur, false, merged.max, plan.total, P, T, near_num, rep.zero_to_max,
                     rep.max_to_zero, rep.near_zeros, "max_to_zero");
  }

  ck.remove();
  return rep;
}

}  // namespace

ScanReport scan_period(uint64_t p, const ScanOptions& opts) {
  const uint64_t span = primorial(p);
  if (p > kMaxStreamPrime) {
    throw ResourceError("scan_period: p beyond " + std::to_string(kMaxStreamPrime) +
                        " is unsupported (period " + std::to_string(span) + " is too long)");
  }
  const int64_t P = static_cast<int64_t>(span);
  const int64_t T = static_cast<int64_t>(totient_primorial(p));
  const uint32_t chunks = std::max<uint32_t>(1, opts.chunks);

  ScanBackend backend = opts.backend;
  if (backend == ScanBackend::kAuto) {
    backend = p <= kMaxMaterializedPrime ? ScanBackend::kMaterialized : ScanBackend::kWheel;
  }
  if (backend == ScanBackend::kMaterialized) {
    auto cycle = CycleRepo::global().get(p);
    const ChunkPlan plan = plan_chunks(p, chunks, cycle.get(), nullptr, P, T);
    std::function<MaterializedCursor()> make = [cycle] { return MaterializedCursor(cycle); };
    return run_scan<MaterializedCursor>(p, opts, plan, make, P, T);
  }
  if (p == 2) throw std::domain_error("scan_period: no wheel backend below p = 3");
  auto base = CycleRepo::global().get(prev_prime_before(p));
  const ChunkPlan plan = plan_chunks(p, chunks, nullptr, base.get(), P, T);
  std::function<WheelCursor()> make = [base, p] { return WheelCursor(base, p); };
  return run_scan<WheelCursor>(p, opts, plan, make, P, T);
}

bool segments_reflect(const ScanReport& r) {
  auto reversed = [](std::vector<uint16_t> v) {
    std::reverse(v.begin(), v.end());
    return v;
  };
  return r.zero_to_max.gaps == reversed(r.min_to_zero.gaps) &&
         r.max_to_zero.gaps == reversed(r.zero_to_min.gaps);
}

ConstellationDelta constellation_delta(uint64_t length, uint64_t span, uint64_t p) {
  if (length == 0) throw std::domain_error("constellation_delta: empty constellation");
  if (!is_prime(p)) throw std::domain_error("constellation_delta: p must be prime");
  ConstellationDelta d;
  d.length = length;
  d.span = span;
  if (p <= kMaxSpanPrime) {
    const uint64_t N = primorial(p);
    const uint64_t T = totient_primorial(p);
    d.exact = true;
    d.rational = {static_cast<int128>(length) * N - static_cast<int128>(span) * T, N};
    d.value = d.rational.value();
  } else {
    // mu = prod q/(q-1) in extended precision, smallest factors last.
    const auto primes = primes_up_to(p);
    long double log_mu = 0;
    for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
      log_mu += std::log(static_cast<long double>(*it) / static_cast<long double>(*it - 1));
    }
    const long double mu = std::exp(log_mu);
    d.value = static_cast<double>(static_cast<long double>(length) -
                                  static_cast<long double>(span) / mu);
  }
  return d;
}

ConstellationDelta constellation_delta(std::span<const uint64_t> gaps, uint64_t p) {
  if (gaps.empty()) throw std::domain_error("constellation_delta: empty constellation");
  uint64_t span = 0;
  for (uint64_t g : gaps) {
    if (g < 2) throw std::domain_error("constellation_delta: gaps must be >= 2");
    span += g;
  }
  return constellation_delta(gaps.size(), span, p);
}

JacobsthalCheck jacobsthal_bound_check(uint64_t p, const ScanReport& report) {
  JacobsthalCheck c;
  c.p = p;
  c.max_gap = max_gap(p);
  c.y_min = report.y_min();
  const int64_t P = static_cast<int64_t>(report.primorial);
  const int64_t T = static_cast<int64_t>(report.totient);
  const int64_t rhs_num = P - static_cast<int64_t>(c.max_gap) * T;  // over 2*p#
  c.bound = static_cast<double>(rhs_num) / (2.0 * static_cast<double>(P));
  c.holds = 2 * report.y_min_num <= rhs_num;  // exact integer comparison
  c.slack = c.bound - c.y_min;
  return c;
}

JacobsthalCheck jacobsthal_bound_check(uint64_t p) {
  return jacobsthal_bound_check(p, scan_period(p));
}

MidcycleProfile midcycle_profile(uint64_t p) {
  if (p < 11) throw std::domain_error("midcycle_profile: requires p >= 11");
  MidcycleProfile prof;
  prof.p = p;
  prof.J = midcycle_exponent(p);
  const uint64_t reach = uint64_t{1} << (prof.J + 1);

  // Expected shape: 2^J ... 4 2 | 4 | 2 4 ... 2^J around the midpoint.
  for (uint32_t j = prof.J; j >= 1; --j) prof.expected.push_back(static_cast<uint16_t>(1u << j));
  prof.expected.push_back(4);
  for (uint32_t j = 1; j <= prof.J; ++j) prof.expected.push_back(static_cast<uint16_t>(1u << j));

  const uint64_t half = primorial(p) / 2;
  prof.start_x = half - reach;
  if (p <= kMaxMaterializedPrime) {
    auto cycle = CycleRepo::global().get(p);
    const uint64_t idx = cycle->count_leq(prof.start_x);
    if (idx == 0 || cycle->rough_at(idx - 1) != prof.start_x) {
      prof.matches = false;  // p#/2 - 2^(J+1) is not rough: shape absent
      return prof;
    }
    uint64_t x = prof.start_x;
    for (uint64_t i = idx - 1; x < half + reach; ++i) {
      const uint16_t g = cycle->gap(i);
      prof.gaps.push_back(g);
      x += g;
    }
  } else {
    auto base = CycleRepo::global().get(prev_prime_before(p));
    if (derived_next_rough(*base, p, prof.start_x) != prof.start_x) {
      prof.matches = false;
      return prof;
    }
    WheelCursor cur(base, p);
    cur.seek(derived_count_leq(*base, p, prof.start_x) - 1, prof.start_x);
    uint64_t x = prof.start_x;
    while (x < half + reach) {
      const uint32_t g = cur.next();
      prof.gaps.push_back(static_cast<uint16_t>(g));
      x += g;
    }
  }
  prof.matches = prof.gaps == prof.expected;
  return prof;
}

// --- serialization -------------------------------------------------------------

namespace {

std::string fmt(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

void segment_text(std::ostringstream& os, const char* name, const ConstellationSegment& s,
                  uint64_t den) {
  os << "segment." << name << ".start_x = " << s.start_x << '\n';
  os << "segment." << name << ".end_x = " << s.end_x << '\n';
  os << "segment." << name << ".length = " << s.length << '\n';
  os << "segment." << name << ".span = " << s.span << '\n';
  os << "segment." << name << ".delta_num = " << s.delta_num << '\n';
  os << "segment." << name << ".delta = "
     << fmt(static_cast<double>(s.delta_num) / static_cast<double>(den)) << '\n';
  os << "segment." << name << ".mean_gap = " << fmt(s.mean_gap()) << '\n';
}

}  // namespace

std::string ScanReport::to_text(bool exact) const {
  std::ostringstream os;
  os << "p = " << p << '\n';
  os << "primorial = " << primorial << '\n';
  os << "totient = " << totient << '\n';
  os << "mu = " << fmt(mu()) << '\n';
  os << "chunks = " << chunks << '\n';
  os << "y_max = " << fmt(y_max()) << '\n';
  os << "y_min = " << fmt(y_min()) << '\n';
  if (exact) {
    os << "y_max_num = " << y_max_num << '\n';
    os << "y_min_num = " << y_min_num << '\n';
    os << "den = " << primorial << '\n';
  }
  os << "x_max = " << x_max << '\n';
  os << "x_min = " << x_min << '\n';
  os << "max_attainments = " << max_count << '\n';
  os << "min_attainments = " << min_count << '\n';
  os << "n0_plus = " << n0_plus << '\n';
  os << "n0_minus = " << n0_minus << '\n';
  os << "rising_fraction = " << fmt(rising_fraction()) << '\n';
  os << "alternation = " << (alternation_ok ? "ok" : "violated") << '\n';
  segment_text(os, "zero_to_min", zero_to_min, primorial);
  segment_text(os, "min_to_zero", min_to_zero, primorial);
  segment_text(os, "zero_to_max", zero_to_max, primorial);
  segment_text(os, "max_to_zero", max_to_zero, primorial);
  os << "near_zero_threshold = " << fmt(near_zero_threshold) << '\n';
  int i = 0;
  for (const auto& nz : near_zeros) {
    os << "near_zero." << i++ << " = segment=" << nz.segment << " x=" << nz.x
       << " value=" << fmt(nz.value) << '\n';
  }
  return os.str();
}

std::string ScanReport::csv_header() {
  return "p,primorial,totient,mu,max_abs_delta,n0_plus,rising_fraction";
}

std::string ScanReport::to_csv_row() const {
  std::ostringstream os;
  os << p << ',' << primorial << ',' << totient << ',' << fmt(mu()) << ',' << fmt(y_max()) << ','
     << n0_plus << ',' << fmt(rising_fraction());
  return os.str();
}

}  // namespace rough
