// Acceptance suite: one line per criterion, pinned tolerances, nonzero exit
// on any failure. Criteria 3 and 5 stream the full period of DeltaPhi(x,29)
// (~1.02e9 gaps) and are opt-in: --long runs everything, --long-only runs
// just the long pair.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "naive_oracle.hpp"
#include "rough/asym.hpp"
#include "rough/count.hpp"
#include "rough/repo.hpp"
#include "rough/scan.hpp"

using namespace rough;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++failures;
  for (const auto& n : notes) std::printf("        %s\n", n.c_str());
  notes.clear();
}

void skip(int criterion, const std::string& detail) {
  std::printf("[SKIP] criterion %d: %s (enable with --long)\n", criterion, detail.c_str());
}

bool close_to(double value, double target, double tol) {
  return std::fabs(value - target) <= tol + 1e-9;
}

struct Table2Row {
  uint64_t p;
  double mu;       // 3 decimals as printed
  double max_abs;  // 4 decimals as printed
  uint64_t n0;     // printed integer
};

// Table rows as published; see the notes emitted for the two N0+ entries that
// disagree with the exact integer count by one.
const std::vector<Table2Row> kTable2{
    {5, 3.750, 0.9333, 8},        {7, 4.375, 1.5143, 32},
    {11, 4.813, 2.5195, 262},     {13, 5.214, 3.5475, 2216},
    {17, 5.539, 5.4388, 25948},   {19, 5.847, 8.6592, 344337},
};

const ScanReport& cached_scan(uint64_t p) {
  static std::map<uint64_t, ScanReport> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, scan_period(p)).first;
  return it->second;
}

// --- criteria -----------------------------------------------------------------

void criterion1() {
  bool pass = true;
  for (const auto& row : kTable2) {
    const ScanReport& r = cached_scan(row.p);
    const bool mu_ok = close_to(r.mu(), row.mu, 5e-4);
    const bool max_ok = close_to(r.y_max(), row.max_abs, 5e-5);
    const bool n0_ok = r.n0_plus == row.n0;
    if (!(mu_ok && max_ok && n0_ok)) {
      pass = false;
      notes.push_back("p=" + std::to_string(row.p) + ": mu=" + std::to_string(r.mu()) +
                      " max=" + std::to_string(r.y_max()) + " N0+=" + std::to_string(r.n0_plus) +
                      " vs table (" + std::to_string(row.mu) + ", " + std::to_string(row.max_abs) +
                      ", " + std::to_string(row.n0) + ")");
      if (!n0_ok && r.n0_plus == row.n0 + 1) {
        notes.push_back("  the exact rising-zero count exceeds the printed value by one; the "
                        "table misses a crossing whose vertex lies within ~1e-5 of zero "
                        "(p=19: +60/9699690 at x=5724611); both spec conventions give the "
                        "exact count");
      }
    }
  }
  report(1, pass, "extrema table rows p in {5,7,11,13,17,19} (mu 3dp, max|dPhi| 4dp, N0+ exact)");
}

void criterion2() {
  const ScanReport& r = cached_scan(23);
  const bool max_ok = close_to(r.y_max(), 14.4180, 5e-5);
  const bool n0_ok = r.n0_plus == 5438505;
  const bool tot_ok = totient_primorial(23) == 36495360 && r.totient == 36495360;
  if (!n0_ok) {
    notes.push_back("N0+ = " + std::to_string(r.n0_plus) +
                    " vs printed 5438505: the exact count includes the crossing at vertex "
                    "+330/223092870 (~1.5e-6) that a float-epsilon scan drops");
  }
  report(2, max_ok && n0_ok && tot_ok,
         "extrema table p=23: max " + std::to_string(r.y_max()) + " (want 14.4180), N0+ " +
             std::to_string(r.n0_plus) + " (printed 5438505), phi(23#) computed " +
             std::to_string(r.totient) + " (the printed 36595360 is a misprint)");
}

const ScanReport* long_scan_29(uint32_t chunks) {
  static ScanReport r = [&] {
    ScanOptions o;
    o.chunks = chunks;
    return scan_period(29, o);
  }();
  return &r;
}

void criterion3(uint32_t chunks) {
  const ScanReport& r = *long_scan_29(chunks);
  const bool max_ok = close_to(r.y_max(), 20.9128, 5e-5);
  const bool n0_ok = r.n0_plus == 109773262;
  const bool mu_ok = close_to(r.mu(), 6.331, 5e-4);
  const bool inv_ok = r.invariants_hold();
  report(3, max_ok && n0_ok && mu_ok && inv_ok,
         "extrema table p=29 (streamed, " + std::to_string(r.chunks) + " chunks): max " +
             std::to_string(r.y_max()) + ", N0+ " + std::to_string(r.n0_plus) + ", mu " +
             std::to_string(r.mu()));
}

void criterion4() {
  const ScanReport& r = cached_scan(17);
  const bool min_ok = close_to(r.y_min(), -5.438880, 1e-4);  // exact: -5.4387965
  const bool s1_ok = r.zero_to_min.length == 146 && r.zero_to_min.span == 834;
  const bool s2_ok = r.min_to_zero.length == 49 && r.min_to_zero.span == 246;
  const bool refl_ok = segments_reflect(r);
  report(4, min_ok && s1_ok && s2_ok && refl_ok,
         "p=17 extremal segments: min " + std::to_string(r.y_min()) + ", 0->min " +
             std::to_string(r.zero_to_min.length) + "/" + std::to_string(r.zero_to_min.span) +
             ", min->0 " + std::to_string(r.min_to_zero.length) + "/" +
             std::to_string(r.min_to_zero.span) + ", reflection " +
             (refl_ok ? "exact" : "BROKEN"));
}

void criterion5(uint32_t chunks) {
  const ScanReport& r = *long_scan_29(chunks);
  const bool x_ok = r.x_max == 1058677732;  // computed: 1058677733
  if (!x_ok && r.x_max == 1058677733) {
    notes.push_back("peak found at x = 1058677733 (29-rough, value 20.912780 confirmed by "
                    "inclusion-exclusion); the printed 1058677732 is even, hence not a "
                    "29-rough coordinate -- the figure's axis offsets are 0-based");
  }
  const bool s1_ok =
      r.zero_to_max.length == 10995 && close_to(r.zero_to_max.mean_gap(), 6.31960, 1e-5);
  const bool s2_ok = r.max_to_zero.length == 11692;
  bool nz1 = false, nz2 = false;
  for (const auto& nz : r.near_zeros) {
    if (nz.segment == "max_to_zero" && close_to(nz.value, 0.0194, 5e-5)) nz1 = true;
    if (nz.segment == "max_to_zero" && close_to(nz.value, 0.1968, 5e-5)) nz2 = true;
  }
  report(5, x_ok && s1_ok && s2_ok && nz1 && nz2,
         "p=29 extremal segments: x_max " + std::to_string(r.x_max) + " (printed 1058677732), 0->max " +
             std::to_string(r.zero_to_max.length) + " gaps mean " +
             std::to_string(r.zero_to_max.mean_gap()) + ", max->0 " +
             std::to_string(r.max_to_zero.length) + ", near-zeros 0.0194/0.1968 " +
             (nz1 && nz2 ? "detected" : "MISSING"));
}

void criterion6() {
  bool pass = true;
  for (uint64_t p : {5, 7, 11, 13}) {
    for (const auto& row : known_values(p)) {
      if (!(delta_phi(row.x, p) == row.upper) || !(delta_phi_left(row.x, p) == row.lower)) {
        pass = false;
        notes.push_back("p=" + std::to_string(p) + " row " + row.label + " mismatch");
      }
    }
  }
  report(6, pass, "closed-form value oracle: exact rational equality for all rows, p in {5,7,11,13}");
}

void criterion7() {
  bool pass = true;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  };

  // (a) symmetry properties: 1e4 random x per p in {5..17}, exhaustive for p <= 7.
  std::mt19937_64 rng(20240214);
  for (uint64_t p : {5, 7, 11, 13, 17}) {
    const uint64_t span = primorial(p);
    std::vector<uint64_t> xs(10000);
    for (auto& x : xs) x = rng() % span;
    expect(verify_translation(p, xs).all_passed(), "(a) translation p=" + std::to_string(p));
    for (auto& x : xs) x = rng() % (span / 2 + 1);
    expect(verify_rotation(p, xs).all_passed(), "(a) rotation p=" + std::to_string(p));
  }
  for (uint64_t p : {3, 5, 7}) {
    const uint64_t span = primorial(p);
    std::vector<uint64_t> xs(span + 1);
    for (uint64_t x = 0; x <= span; ++x) xs[x] = x;
    expect(verify_translation(p, xs).all_passed(),
           "(a) exhaustive translation p=" + std::to_string(p));
    xs.resize(span / 2 + 1);
    expect(verify_rotation(p, xs).all_passed(),
           "(a) exhaustive rotation p=" + std::to_string(p));
  }

  // (b) cycle invariants through p = 23.
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23}) {
    expect(verify_cycle(*CycleRepo::global().get(p)).all_passed(),
           "(b) cycle invariants p=" + std::to_string(p));
  }

  // (c) streaming scan vs naive full evaluation for p <= 7.
  for (uint64_t p : {2, 3, 5, 7}) {
    const ScanReport& r = cached_scan(p);
    const naive::NaiveScan n = naive::naive_scan(r.primorial, r.totient, p);
    expect(r.y_max_num == n.max_num && r.y_min_num == n.min_num && r.x_max == n.x_max &&
               r.x_min == n.x_min && r.n0_plus == n.rising_zeros && r.n0_minus == n.falling_zeros,
           "(c) brute-force equivalence p=" + std::to_string(p));
  }

  // (d) generation backends agree through p = 13.
  for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
    expect(generate_cycle(p, CycleBackend::kSegmentedSieve).gaps() ==
               generate_cycle(p, CycleBackend::kWheelRecursion).gaps(),
           "(d) backend agreement p=" + std::to_string(p));
  }

  // (e) chunked scan = sequential scan across chunk counts.
  for (uint64_t p : {5, 7, 13}) {
    const ScanReport& seq = cached_scan(p);
    for (uint32_t chunks : {2u, 4u, 8u}) {
      ScanOptions o;
      o.chunks = chunks;
      const ScanReport par = scan_period(p, o);
      expect(par.y_max_num == seq.y_max_num && par.y_min_num == seq.y_min_num &&
                 par.x_max == seq.x_max && par.x_min == seq.x_min &&
                 par.n0_plus == seq.n0_plus && par.n0_minus == seq.n0_minus &&
                 par.zero_to_min.gaps == seq.zero_to_min.gaps &&
                 par.min_to_zero.gaps == seq.min_to_zero.gaps &&
                 par.zero_to_max.gaps == seq.zero_to_max.gaps &&
                 par.max_to_zero.gaps == seq.max_to_zero.gaps,
             "(e) chunked=" + std::to_string(chunks) + " p=" + std::to_string(p));
    }
  }

  report(7, pass, "property suites (a) symmetries (b) cycle invariants (c) brute-force "
                  "equivalence (d) backend agreement (e) chunk determinism");
}

void criterion8() {
  const auto d = constellation_delta(459, 3242, 113);
  report(8, close_to(d.value, 86.92, 0.01),
         "Engelsma rise: 459 - 3242/mu(113) = " + std::to_string(d.value) + " (want 86.92 +- 0.01)");
}

void criterion9() {
  bool pass = true;
  const std::vector<std::pair<uint64_t, double>> mus{{5, 3.750},  {7, 4.375},  {11, 4.813},
                                                     {13, 5.214}, {17, 5.539}, {19, 5.847},
                                                     {23, 6.113}, {29, 6.331}};
  for (const auto& [p, mu] : mus) {
    if (!close_to(mertens_report(p).mu, mu, 5e-4)) {
      pass = false;
      notes.push_back("mu(" + std::to_string(p) + ") = " + std::to_string(mertens_report(p).mu));
    }
  }
  for (uint64_t p : {5, 7, 11, 13, 17, 19}) {
    const ScanReport& r = cached_scan(p);
    const MertensReport m = mertens_report(p);
    const double drift = m.drift_rate * static_cast<double>(r.primorial);
    if (!(drift > r.y_max())) {
      pass = false;
      notes.push_back("drift(" + std::to_string(p) + ") = " + std::to_string(drift) +
                      " !> max " + std::to_string(r.y_max()));
    }
  }
  report(9, pass, "Mertens: mu matches the extrema table to 3dp for p <= 29; drift at x=p# exceeds "
                  "max|dPhi| for p in {5..19}");
}

}  // namespace

int main(int argc, char** argv) {
  bool run_long = false, run_short = true;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--long") == 0) run_long = true;
    if (std::strcmp(argv[i], "--long-only") == 0) {
      run_long = true;
      run_short = false;
    }
  }
  const uint32_t chunks = 8;

  if (run_short) {
    criterion1();
    criterion2();
  }
  if (run_long) {
    criterion3(chunks);
  } else {
    skip(3, "extrema table p=29 streamed scan");
  }
  if (run_short) {
    criterion4();
  }
  if (run_long) {
    criterion5(chunks);
  } else {
    skip(5, "p=29 extremal segment statistics");
  }
  if (run_short) {
    criterion6();
    criterion7();
    criterion8();
    criterion9();
  }

  std::printf("%d criterion failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
