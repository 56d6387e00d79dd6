// rough: cycles of gaps among p-rough numbers, exact DeltaPhi residuals,
// one-period extrema scans, and Mertens-drift comparisons.
//
// Subcommands: gen, scan, plot, table, verify, cache.
// Exit codes: 0 success, 1 invariant/integrity failure, 2 usage error,
// 3 resource/limit error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "rough/asym.hpp"
#include "rough/cache.hpp"
#include "rough/count.hpp"
#include "rough/errors.hpp"
#include "rough/repo.hpp"
#include "rough/scan.hpp"

namespace fs = std::filesystem;
using namespace rough;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

void require_prime_arg(uint64_t p) {
  if (!is_prime(p)) {
    throw std::domain_error("p = " + std::to_string(p) + " is not prime");
  }
}

fs::path ensure_cache_dir(const std::string& dir) {
  fs::path path(dir);
  fs::create_directories(path);
  return path;
}

// --- gen ----------------------------------------------------------------------

int cmd_gen(uint64_t p, const std::string& cache_dir) {
  require_prime_arg(p);
  CycleRepo& repo = CycleRepo::global();
  repo.set_cache_dir(ensure_cache_dir(cache_dir));
  const GapCycle cycle = generate_cycle(p);
  const auto report = verify_cycle(cycle);
  if (!report.all_passed()) {
    std::cerr << report.to_text();
    return kExitInvariant;
  }
  const fs::path file = repo.cache_file(p);
  cache_write(cycle, file);
  std::cout << "p=" << p << " phi(p#)=" << cycle.length() << " p#=" << cycle.span()
            << " max_gap=" << cycle.max_gap() << " -> " << file.string() << "\n";
  return kExitOk;
}

// --- scan ---------------------------------------------------------------------

int cmd_scan(uint64_t p, const std::string& cache_dir, uint32_t chunks,
             int64_t checkpoint_every, bool resume, const std::string& format, bool exact,
             double threshold) {
  require_prime_arg(p);
  CycleRepo::global().set_cache_dir(ensure_cache_dir(cache_dir));

  ScanOptions opts;
  opts.chunks = chunks;
  opts.near_zero_threshold = threshold;
  // Long scans checkpoint by default every 1e8 gaps; 0 disables.
  uint64_t every = checkpoint_every >= 0 ? static_cast<uint64_t>(checkpoint_every)
                                         : (p >= 29 ? 100000000ULL : 0ULL);
  if (every > 0) {
    opts.checkpoint_every = every;
    opts.checkpoint_file = fs::path(cache_dir) / ("scan-" + std::to_string(p) + ".ckpt.json");
    opts.resume = resume && fs::exists(opts.checkpoint_file);
  } else if (resume) {
    throw std::domain_error("--resume requires checkpointing (set --checkpoint-every > 0)");
  }

  const ScanReport r = scan_period(p, opts);
  if (format == "csv") {
    std::cout << ScanReport::csv_header() << "\n" << r.to_csv_row() << "\n";
  } else {
    std::cout << r.to_text(exact);
  }
  if (!r.invariants_hold()) {
    std::cerr << "invariant violation: y_min != -y_max or N0+ != N0- or alternation broken\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// --- plot ---------------------------------------------------------------------

struct PlotPoint {
  enum Kind { kStart, kRough, kWaypoint, kMidpoint, kEnd } kind;
  uint64_t x;
  int64_t lower_num;  // over p#
  int64_t upper_num;
};

std::vector<PlotPoint> plot_points(uint64_t p, uint64_t from, uint64_t to) {
  const uint64_t span = primorial(p);
  const int64_t P = static_cast<int64_t>(span);
  const int64_t T = static_cast<int64_t>(totient_primorial(p));
  if (to <= from) throw std::domain_error("plot: empty range");
  if (to - from > 4 * span) {
    throw ResourceError("plot: range wider than 4 periods; narrow it with --from/--to");
  }
  const uint64_t expected =
      (to - from) / static_cast<uint64_t>(std::max<int64_t>(1, P / T)) + 2;
  if (expected > 2000000) {
    throw ResourceError("plot: range holds ~" + std::to_string(expected) +
                        " rough numbers; narrow it (cap 2e6)");
  }

  std::vector<PlotPoint> pts;
  auto value_num = [&](uint64_t x) {  // upper numerator at x
    const DeltaValue d = delta_phi(x, p);
    return static_cast<int64_t>(d.num);
  };
  if (!is_rough(from % span, p)) {
    const int64_t v = value_num(from);
    pts.push_back({PlotPoint::kStart, from, v, v});
  }

  // Waypoints k*p# and midpoints (2k-1)*p#/2 inside [from, to].
  for (uint64_t k = from / span; k * span <= to; ++k) {
    if (k * span >= from) pts.push_back({PlotPoint::kWaypoint, k * span, 0, 0});
    const uint64_t mid = k * span + span / 2;
    if (mid >= from && mid <= to) pts.push_back({PlotPoint::kMidpoint, mid, 0, 0});
  }

  CycleStream s = CycleRepo::global().stream_at(p, std::max<uint64_t>(from, 1));
  while (s.rough() <= to) {
    const uint64_t x = s.rough();
    const int64_t lower = static_cast<int64_t>(static_cast<int128>(s.index()) * P -
                                               static_cast<int128>(T) * x);
    pts.push_back({PlotPoint::kRough, x, lower, lower + P});
    s.next();
  }
  if (!is_rough(to % span, p)) {
    const int64_t v = value_num(to);
    pts.push_back({PlotPoint::kEnd, to, v, v});
  }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const PlotPoint& a, const PlotPoint& b) { return a.x < b.x; });
  return pts;
}

const char* kind_name(PlotPoint::Kind k) {
  switch (k) {
    case PlotPoint::kStart: return "start";
    case PlotPoint::kRough: return "rough";
    case PlotPoint::kWaypoint: return "waypoint";
    case PlotPoint::kMidpoint: return "midpoint";
    default: return "end";
  }
}

void emit_plot_csv(std::ostream& os, uint64_t p, const std::vector<PlotPoint>& pts, bool exact) {
  const double den = static_cast<double>(primorial(p));
  if (exact) {
    os << "kind,x,lower_num,upper_num,den,lower,upper\n";
  } else {
    os << "kind,x,lower,upper\n";
  }
  for (const auto& pt : pts) {
    os << kind_name(pt.kind) << ',' << pt.x << ',';
    if (exact) {
      os << pt.lower_num << ',' << pt.upper_num << ',' << static_cast<uint64_t>(den) << ',';
    }
    os << fmt(pt.lower_num / den, 6) << ',' << fmt(pt.upper_num / den, 6) << "\n";
  }
}

void emit_plot_svg(std::ostream& os, uint64_t p, uint64_t from, uint64_t to,
                   const std::vector<PlotPoint>& pts) {
  const double den = static_cast<double>(primorial(p));
  double lo = -1, hi = 1;
  for (const auto& pt : pts) {
    lo = std::min(lo, pt.lower_num / den);
    hi = std::max(hi, pt.upper_num / den);
  }
  const double W = 1200, H = 500, mx = 60, my = 30;
  auto sx = [&](double x) { return mx + (x - static_cast<double>(from)) /
                                       static_cast<double>(to - from) * (W - 2 * mx); };
  auto sy = [&](double y) { return H - my - (y - lo) / (hi - lo) * (H - 2 * my); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<line x1=\"" << sx(from) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(to) << "\" y2=\""
     << sy(0) << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  // Sawtooth outline: decay to each rough's lower value, vertical rise of 1.
  os << "<path fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" d=\"";
  bool first = true;
  for (const auto& pt : pts) {
    if (pt.kind == PlotPoint::kWaypoint || pt.kind == PlotPoint::kMidpoint) continue;
    const double x = sx(static_cast<double>(pt.x));
    if (first) {
      os << "M" << x << " " << sy(pt.lower_num / den);
      first = false;
    } else {
      os << " L" << x << " " << sy(pt.lower_num / den);
    }
    if (pt.upper_num != pt.lower_num) os << " L" << x << " " << sy(pt.upper_num / den);
  }
  os << "\"/>\n";
  for (const auto& pt : pts) {
    if (pt.kind == PlotPoint::kWaypoint) {
      os << "<rect x=\"" << sx(static_cast<double>(pt.x)) - 4 << "\" y=\"" << sy(0) - 4
         << "\" width=\"8\" height=\"8\" fill=\"#d62728\"/>\n";
    } else if (pt.kind == PlotPoint::kMidpoint) {
      os << "<circle cx=\"" << sx(static_cast<double>(pt.x)) << "\" cy=\"" << sy(0)
         << "\" r=\"4\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    }
  }
  os << "<text x=\"" << mx << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
     << "DeltaPhi(x," << p << "), x in [" << from << ", " << to << "]</text>\n";
  os << "</svg>\n";
}

int cmd_plot(uint64_t p, const std::string& cache_dir, uint64_t from, int64_t to_opt,
             uint32_t periods, const std::string& format, bool exact, const std::string& out) {
  require_prime_arg(p);
  CycleRepo::global().set_cache_dir(ensure_cache_dir(cache_dir));
  const uint64_t span = primorial(p);
  const uint64_t to = to_opt >= 0 ? static_cast<uint64_t>(to_opt) : from + periods * span;
  const auto pts = plot_points(p, from, to);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.empty()) {
    file.open(out, std::ios::trunc);
    if (!file) throw std::runtime_error("plot: cannot open " + out);
    os = &file;
  }
  if (format == "svg") {
    emit_plot_svg(*os, p, from, to, pts);
  } else {
    emit_plot_csv(*os, p, pts, exact);
  }
  return kExitOk;
}

// --- table --------------------------------------------------------------------

int cmd_table_table2(uint64_t pmax, const std::string& format, uint32_t chunks) {
  if (format == "csv") std::cout << ScanReport::csv_header() << "\n";
  else
    std::printf("%-4s %-12s %-12s %-7s %-10s %-10s %s\n", "p", "p#", "phi(p#)", "mu",
                "max|dPhi|", "N0+", "N0+/phi");
  ScanOptions opts;
  opts.chunks = chunks;
  for (uint64_t p : primes_up_to(pmax)) {
    if (p < 5) continue;
    const ScanReport r = scan_period(p, opts);
    if (format == "csv") {
      std::cout << r.to_csv_row() << "\n";
    } else {
      std::printf("%-4llu %-12llu %-12llu %-7s %-10s %-10llu %s%%\n",
                  static_cast<unsigned long long>(p),
                  static_cast<unsigned long long>(r.primorial),
                  static_cast<unsigned long long>(r.totient), fmt(r.mu(), 3).c_str(),
                  ("±" + fmt(r.y_max(), 4)).c_str(),
                  static_cast<unsigned long long>(r.n0_plus),
                  fmt(100.0 * r.rising_fraction(), 2).c_str());
    }
  }
  return kExitOk;
}

int cmd_table_table1(uint64_t p, const std::string& format) {
  require_prime_arg(p);
  if (p < 5) {
    std::cerr << "table1: the midcycle constellation rows require p >= 5\n";
    return kExitUsage;
  }
  const auto rows = known_values(p);
  const double den = static_cast<double>(primorial(p));
  if (format == "csv") {
    std::cout << "label,x,lower_num,upper_num,den,lower,upper\n";
    for (const auto& r : rows) {
      std::cout << r.label << ',' << r.x << ',' << to_string_i128(r.lower.num) << ','
                << to_string_i128(r.upper.num) << ',' << static_cast<uint64_t>(den) << ','
                << fmt(r.lower.value(), 6) << ',' << fmt(r.upper.value(), 6) << "\n";
    }
  } else {
    std::printf("DeltaPhi(x,%llu) closed-form values (q = %llu, J = %u)\n",
                static_cast<unsigned long long>(p),
                static_cast<unsigned long long>(next_prime_after(p)), midcycle_exponent(p));
    std::printf("%-12s %-14s %-22s %-12s %-22s %-12s\n", "label", "x", "lower", "lower~",
                "upper", "upper~");
    for (const auto& r : rows) {
      std::printf("%-12s %-14llu %-22s %-12s %-22s %-12s\n", r.label.c_str(),
                  static_cast<unsigned long long>(r.x), r.lower.to_string().c_str(),
                  fmt(r.lower.value(), 6).c_str(), r.upper.to_string().c_str(),
                  fmt(r.upper.value(), 6).c_str());
    }
  }
  return kExitOk;
}

int cmd_table_mertens(uint64_t pmax, const std::string& format) {
  if (format == "csv") {
    std::cout << mertens_csv_header() << "\n";
    for (uint64_t p : primes_up_to(pmax)) std::cout << mertens_csv_row(mertens_report(p)) << "\n";
  } else {
    std::printf("%-6s %-12s %-12s %-11s %s\n", "p", "slope", "e^-g/ln p", "rel_error", "mu");
    for (uint64_t p : primes_up_to(pmax)) {
      const MertensReport r = mertens_report(p);
      std::printf("%-6llu %-12s %-12s %-11s %s\n", static_cast<unsigned long long>(p),
                  fmt(r.slope, 9).c_str(), fmt(r.surrogate, 9).c_str(),
                  fmt(r.relative_error, 6).c_str(), fmt(r.mu, 6).c_str());
    }
  }
  return kExitOk;
}

// --- verify -------------------------------------------------------------------

int cmd_verify(uint64_t p, const std::string& cache_dir) {
  require_prime_arg(p);
  if (p > kMaxStreamPrime) {
    throw ResourceError("verify: p beyond " + std::to_string(kMaxStreamPrime) +
                        " is unsupported");
  }
  CycleRepo::global().set_cache_dir(ensure_cache_dir(cache_dir));
  bool ok = true;

  if (p <= kMaxMaterializedPrime) {
    const auto rep = verify_cycle(*CycleRepo::global().get(p));
    std::cout << "cycle checks:\n" << rep.to_text();
    ok = ok && rep.all_passed();
  } else {
    std::cout << "cycle checks: skipped (stream-only cycle; generation is self-checked)\n";
  }

  std::mt19937_64 rng(0x9E3779B97F4A7C15ULL);
  const uint64_t span = primorial(p);
  std::vector<uint64_t> xs(1000);
  for (auto& x : xs) x = rng() % span;
  const auto trans = verify_translation(p, xs);
  std::cout << "translation (1000 samples):\n" << trans.to_text();
  ok = ok && trans.all_passed();

  for (auto& x : xs) x = rng() % (span / 2 + 1);
  const auto rot = verify_rotation(p, xs);
  std::cout << "rotation (1000 samples):\n" << rot.to_text();
  ok = ok && rot.all_passed();

  if (p >= 5) {
    bool table_ok = true;
    for (const auto& row : known_values(p)) {
      if (!(delta_phi(row.x, p) == row.upper) || !(delta_phi_left(row.x, p) == row.lower)) {
        table_ok = false;
        std::cout << "[FAIL] table1 row " << row.label << "\n";
      }
    }
    std::cout << (table_ok ? "[ok]   " : "[FAIL] ") << "table1 closed-form oracle\n";
    ok = ok && table_ok;
  } else {
    std::cout << "table1 oracle: n/a for p < 5\n";
  }

  const auto jac = jacobsthal_bound_check(p);
  std::cout << (jac.holds ? "[ok]   " : "[FAIL] ") << "jacobsthal bound: y_min="
            << fmt(jac.y_min, 6) << " <= " << fmt(jac.bound, 6) << " (max gap "
            << jac.max_gap << ", slack " << fmt(jac.slack, 6) << ")\n";
  ok = ok && jac.holds;

  if (p >= 11) {
    const auto mid = midcycle_profile(p);
    std::cout << (mid.matches ? "[ok]   " : "[FAIL] ") << "midcycle constellation (J="
              << mid.J << ")\n";
    ok = ok && mid.matches;
  } else {
    std::cout << "midcycle profile: n/a for p < 11\n";
  }

  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitInvariant;
}

// --- cache --------------------------------------------------------------------

int cmd_cache_list(const std::string& cache_dir) {
  const fs::path dir(cache_dir);
  if (!fs::exists(dir)) {
    std::cout << "(no cache directory at " << dir.string() << ")\n";
    return kExitOk;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".bin") continue;
    try {
      const CacheHeader h = cache_inspect(entry.path());
      std::cout << entry.path().filename().string() << ": p=" << h.p << " phi=" << h.length
                << " span=" << h.span << " width=" << int(h.gap_width) << " ("
                << fs::file_size(entry.path()) << " bytes)\n";
    } catch (const IntegrityError& e) {
      std::cout << entry.path().filename().string() << ": unreadable (" << e.what() << ")\n";
    }
  }
  return kExitOk;
}

int cmd_cache_inspect(uint64_t p, const std::string& cache_dir) {
  const fs::path file = fs::path(cache_dir) / ("pgap-" + std::to_string(p) + ".bin");
  const CacheHeader h = cache_inspect(file);
  std::cout << file.string() << ": p=" << h.p << " phi=" << h.length << " span=" << h.span
            << " width=" << int(h.gap_width) << " checksum_algo=" << int(h.checksum_algo)
            << "\n";
  const GapCycle cycle = cache_read(p, file);  // full read validates the checksum
  std::cout << "checksum ok, " << cycle.length() << " gaps, max gap " << cycle.max_gap()
            << "\n";
  const auto rep = verify_cycle(cycle);
  std::cout << (rep.all_passed() ? "verification: all checks pass\n" : rep.to_text());
  return rep.all_passed() ? kExitOk : kExitInvariant;
}

int cmd_cache_rm(uint64_t p, const std::string& cache_dir) {
  const fs::path file = fs::path(cache_dir) / ("pgap-" + std::to_string(p) + ".bin");
  if (!fs::remove(file)) {
    std::cerr << "no cache file for p=" << p << " at " << file.string() << "\n";
    return kExitUsage;
  }
  std::cout << "removed " << file.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycles of gaps among p-rough numbers and the residual DeltaPhi(x,p)"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string cache_dir = "./pgap-cache";
  app.add_option("--cache-dir", cache_dir, "cycle cache directory")
      ->envname("ROUGH_CACHE_DIR")
      ->capture_default_str();

  uint64_t p = 0;
  uint32_t chunks = 1;
  int64_t checkpoint_every = -1;  // -1: default policy (1e8 for p >= 29)
  bool resume = false, exact = false;
  double threshold = 0.25;
  std::string format, out;
  uint64_t pmax = 13, from = 0;
  int64_t to = -1;
  uint32_t periods = 1;
  std::string which;

  auto* gen = app.add_subcommand("gen", "generate G(p#) and write the cycle cache");
  gen->add_option("-p,--prime", p, "sieve stage prime")->required();

  auto* scan = app.add_subcommand("scan", "stream one period of DeltaPhi and report extrema");
  scan->add_option("-p,--prime", p, "sieve stage prime")->required();
  scan->add_option("--chunks", chunks, "parallel chunk count")->envname("ROUGH_CHUNKS");
  scan->add_option("--checkpoint-every", checkpoint_every,
                   "gaps between checkpoints (0 disables; default 1e8 for p >= 29)");
  scan->add_flag("--resume", resume, "resume from an existing checkpoint");
  scan->add_option("--format", format, "csv | text")->default_val("text");
  scan->add_flag("--exact", exact, "print exact numerators");
  scan->add_option("--threshold", threshold, "near-zero reporting threshold")
      ->capture_default_str();

  auto* plot = app.add_subcommand("plot", "emit sawtooth segment endpoints (csv or svg)");
  plot->add_option("-p,--prime", p, "sieve stage prime")->required();
  plot->add_option("--from", from, "range start (default 0)");
  plot->add_option("--to", to, "range end (default from + periods*p#)");
  plot->add_option("--periods", periods, "periods to cover when --to is absent")
      ->capture_default_str();
  plot->add_option("--format", format, "csv | svg")->default_val("csv");
  plot->add_flag("--exact", exact, "include exact numerator columns");
  plot->add_option("-o,--output", out, "output file (default stdout)");

  auto* table = app.add_subcommand("table", "reproduce a table from live computation");
  table->add_option("which", which, "table1 | table2 | mertens")->required();
  table->add_option("-p,--prime", p, "prime for table1");
  table->add_option("--pmax", pmax, "largest prime for table2/mertens");
  table->add_option("--chunks", chunks, "parallel chunk count for scans")
      ->envname("ROUGH_CHUNKS");
  table->add_option("--format", format, "text | csv")->default_val("text");

  auto* verify = app.add_subcommand("verify", "run the symmetry and closed-form verifications");
  verify->add_option("-p,--prime", p, "sieve stage prime")->required();

  auto* cache = app.add_subcommand("cache", "manage cycle cache files");
  cache->require_subcommand(1);
  auto* cache_list = cache->add_subcommand("list", "list cache files");
  auto* cache_inspect_cmd = cache->add_subcommand("inspect", "validate one cache file");
  cache_inspect_cmd->add_option("-p,--prime", p, "prime")->required();
  auto* cache_rm = cache->add_subcommand("rm", "remove one cache file");
  cache_rm->add_option("-p,--prime", p, "prime")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(p, cache_dir);
    if (scan->parsed())
      return cmd_scan(p, cache_dir, chunks, checkpoint_every, resume, format, exact, threshold);
    if (plot->parsed()) return cmd_plot(p, cache_dir, from, to, periods, format, exact, out);
    if (table->parsed()) {
      CycleRepo::global().set_cache_dir(ensure_cache_dir(cache_dir));
      if (which == "table2") return cmd_table_table2(pmax, format, chunks);
      if (which == "table1") return cmd_table_table1(p, format);
      if (which == "mertens") return cmd_table_mertens(pmax, format);
      std::cerr << "unknown table '" << which << "' (table1 | table2 | mertens)\n";
      return kExitUsage;
    }
    if (verify->parsed()) return cmd_verify(p, cache_dir);
    if (cache->parsed()) {
      if (cache_list->parsed()) return cmd_cache_list(cache_dir);
      if (cache_inspect_cmd->parsed()) return cmd_cache_inspect(p, cache_dir);
      if (cache_rm->parsed()) return cmd_cache_rm(p, cache_dir);
    }
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const IdentityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::range_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
