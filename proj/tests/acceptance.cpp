// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance N [M ...]  run only the listed criteria
//
// Exit status is non-zero when any selected criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "fogcache/caching.hpp"
#include "fogcache/experiments.hpp"
#include "fogcache/generator.hpp"
#include "fogcache/mobility.hpp"
#include "fixtures.hpp"

using namespace fogcache;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  // Pass/fail only; printed but never affects the status.
  bool informational = false;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> check;
};

void fail(Outcome& o, const std::string& why) {
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += why;
}

// Default synthetic trace, computed once and shared by criteria 5, 6 and 8.
const Trace& default_trace() {
  static const Trace trace = materialize_trace(config_from_json(nlohmann::json::object()));
  return trace;
}

ExperimentConfig sweep_config(SweepVariable v, std::vector<double> grid) {
  auto cfg = config_from_json(nlohmann::json::object());
  cfg.sweep = v;
  cfg.grid = std::move(grid);
  cfg.threads = 0;
  return cfg;
}

std::vector<double> grid(double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::lround(hi / step));
  for (int i = 0; i <= n; ++i) g.push_back(i * step);
  return g;
}

std::map<Architecture, Placement> place_all(const DemandMatrix& d, const Topology& t, double target) {
  const auto cws = mark_cache_worthy(d, target);
  std::map<Architecture, Placement> out;
  for (const auto a : kAllArchitectures) out[a] = place(cws, t, a);
  return out;
}

Outcome four_station_fixture() {
  Outcome o;
  const auto p = place_all(testing::four_station_demand(), testing::four_station_topology(), 1.0);
  const auto pof = price_of_fog(p);
  const std::array<std::size_t, 4> sizes = {6, 6, 5, 3};
  const std::array<double, 4> pofs = {2.0, 2.0, 5.0 / 3.0, 1.0};
  for (const auto a : kAllArchitectures) {
    const auto i = static_cast<std::size_t>(a);
    if (p.at(a).total_size() != sizes[i]) {
      fail(o, fmt::format("{} size {} != {}", to_string(a), p.at(a).total_size(), sizes[i]));
    }
    if (pof.at(a) != pofs[i]) fail(o, fmt::format("{} pof {} != {}", to_string(a), pof.at(a), pofs[i]));
  }
  if (o.pass) o.detail = "sizes 6/6/5/3, pof 2/2/1.667/1";
  return o;
}

Outcome extremes() {
  Outcome o;
  std::vector<std::string> summary;
  for (const std::size_t n : {2, 4, 7, 25}) {
    std::vector<CellSite> sites;
    for (std::size_t i = 0; i < n; ++i) {
      sites.push_back({"x", fmt::format("c{:02}", i),
                       {34.0 + 0.01 * static_cast<double>(i % 5), -118.0 - 0.01 * static_cast<double>(i / 5)},
                       0.0, 1});
    }
    const auto t = build_topology(sites, 3, 2);
    DemandMatrix same, disjoint;
    for (const auto& s : sites) {
      for (int k = 0; k < 3; ++k) {
        same.add(s.cell_id, testing::item(fmt::format("shared{}", k)));
        disjoint.add(s.cell_id, testing::item(fmt::format("{}-own{}", s.cell_id, k)));
      }
    }
    const auto pof_same = price_of_fog(place_all(same, t, 1.0));
    if (pof_same.at(Architecture::kBaseStation) != static_cast<double>(n)) {
      fail(o, fmt::format("identical sets at {} stations: pof {}", n,
                          pof_same.at(Architecture::kBaseStation)));
    }
    for (const auto& [a, v] : price_of_fog(place_all(disjoint, t, 1.0))) {
      if (v != 1.0) fail(o, fmt::format("disjoint sets, N={}: {} pof {}", n, to_string(a), v));
    }
    summary.push_back(fmt::format("N={}->{}", n, pof_same.at(Architecture::kBaseStation)));
  }
  if (o.pass) o.detail = fmt::format("identical: {}; disjoint: 1 at all levels", fmt::join(summary, " "));
  return o;
}

Outcome greedy_oracle() {
  Outcome o;
  std::mt19937_64 rng(20151001);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    DemandMatrix d;
    const int pairs = 1 + static_cast<int>(rng() % 15);
    const int cells = 1 + static_cast<int>(rng() % 4);
    std::vector<std::uint64_t> counts;
    for (int i = 0; i < pairs; ++i) {
      const std::uint64_t c = 1 + rng() % 20;
      d.add(fmt::format("c{}", i % cells), testing::item(fmt::format("i{}", i)), c);
      counts.push_back(c);
    }
    const double target = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto cws = mark_cache_worthy(d, target);
    const auto need = required_hits(target, d.total_requests());
    std::size_t best = counts.size() + 1;
    for (std::uint32_t mask = 0; mask < (1u << counts.size()); ++mask) {
      std::uint64_t sum = 0;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (mask & (1u << i)) sum += counts[i];
      }
      if (sum >= need) best = std::min<std::size_t>(best, std::popcount(mask));
    }
    if (cws.pairs.size() != best) {
      fail(o, fmt::format("trial {}: greedy {} vs exhaustive {}", trial, cws.pairs.size(), best));
    }
    if (cws.achieved_hit_ratio < target) {
      fail(o, fmt::format("trial {}: achieved {} < target {}", trial, cws.achieved_hit_ratio, target));
    }
    ++checked;
  }
  if (o.pass) o.detail = fmt::format("{} instances, cardinalities equal, targets met", checked);
  return o;
}

Outcome architecture_monotonicity() {
  Outcome o;
  std::mt19937_64 rng(7);
  const BoundingBox box;
  std::uniform_real_distribution<double> lat(box.south_west.lat, box.north_east.lat);
  std::uniform_real_distribution<double> lon(box.south_west.lon, box.north_east.lon);
  const std::array<ContentCategory, 6> cats = {ContentCategory::kYouTube, ContentCategory::kOnDemand,
                                               ContentCategory::kNews,    ContentCategory::kWeather,
                                               ContentCategory::kMaps,    ContentCategory::kRealTime};
  int distance_ordered = 0;
  for (int run = 0; run < 100; ++run) {
    const std::size_t n_cells = 1 + rng() % 200;
    const std::size_t n_requests = 1 + rng() % 5000;
    std::vector<CellSite> sites;
    for (std::size_t i = 0; i < n_cells; ++i) {
      sites.push_back({"x", fmt::format("c{:03}", i), {lat(rng), lon(rng)}, 0.0, 1});
    }
    const auto topo = build_topology(sites, 2 + rng() % 9, 2 + rng() % 9);
    std::vector<CategorizedRecord> recs;
    for (std::size_t i = 0; i < n_requests; ++i) {
      const auto cat = cats[rng() % cats.size()];
      recs.push_back({"x", sites[rng() % n_cells].cell_id,
                      fmt::format("APP.{}", to_string(cat)), cat, 1000});
    }
    DemandPolicyConfig policy;
    policy.seed = static_cast<std::uint64_t>(run);
    const auto demand = aggregate(assign_content_ids(recs, policy));
    const double target = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const auto r = evaluate(demand, topo, target);
    const auto& bs = r.at(Architecture::kBaseStation);
    const auto& ring = r.at(Architecture::kRing);
    const auto& pod = r.at(Architecture::kPod);
    const auto& core = r.at(Architecture::kCore);
    if (!(bs.total_size >= ring.total_size && ring.total_size >= pod.total_size &&
          pod.total_size >= core.total_size)) {
      fail(o, fmt::format("run {}: sizes {}/{}/{}/{}", run, bs.total_size, ring.total_size,
                          pod.total_size, core.total_size));
    }
    if (bs.mean_distance_km != 0.0) fail(o, fmt::format("run {}: base-station distance {}", run, bs.mean_distance_km));
    if (ring.mean_distance_km <= pod.mean_distance_km && pod.mean_distance_km <= core.mean_distance_km) {
      ++distance_ordered;
    }
  }
  if (distance_ordered < 95) fail(o, fmt::format("distance ordered on {}/100 runs", distance_ordered));
  if (o.pass) o.detail = fmt::format("sizes ordered 100/100, distance ordered {}/100", distance_ordered);
  return o;
}

// Checks per operator that every architecture's total size is non-increasing
// along the grid.
void check_sizes_non_increasing(const SweepResult& r, Outcome& o) {
  std::map<std::string, std::vector<const SweepPoint*>> by_op;
  for (const auto& pt : r.points) by_op[pt.op].push_back(&pt);
  for (const auto& [op, pts] : by_op) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      for (const auto a : kAllArchitectures) {
        const auto prev = pts[i - 1]->report.at(a).total_size;
        const auto cur = pts[i]->report.at(a).total_size;
        if (cur > prev) {
          fail(o, fmt::format("{} {} size rises {} -> {} at {}", op, to_string(a), prev, cur,
                              pts[i]->value));
        }
      }
    }
  }
}

Outcome recommendation_trend() {
  Outcome o;
  const auto out = compute(sweep_config(SweepVariable::kP, grid(0.5, 0.1)), default_trace());
  check_sizes_non_increasing(out.result, o);
  std::vector<std::string> summary;
  for (const auto& op : out.result.operators) {
    double at0 = 0, at5 = 0;
    for (const auto& pt : out.result.points) {
      if (pt.op != op) continue;
      if (pt.value == 0.0) at0 = pt.report.at(Architecture::kBaseStation).price_of_fog;
      if (std::abs(pt.value - 0.5) < 1e-12) at5 = pt.report.at(Architecture::kBaseStation).price_of_fog;
    }
    if (at5 < at0) fail(o, fmt::format("{} pof(base_station) {:.3f} at p=0.5 < {:.3f} at p=0", op, at5, at0));
    summary.push_back(fmt::format("{} {:.3f}->{:.3f}", op, at0, at5));
  }
  if (o.pass) o.detail = "sizes non-increasing; pof(base_station) p=0->0.5: " + fmt::format("{}", fmt::join(summary, ", "));
  return o;
}

Outcome locality_trend() {
  Outcome o;
  const auto out = compute(sweep_config(SweepVariable::kQ, grid(1.0, 0.1)), default_trace());
  check_sizes_non_increasing(out.result, o);
  double worst_range = 0.0;
  std::string worst;
  for (const auto& op : out.result.operators) {
    for (const auto a : kAllArchitectures) {
      double lo = 1e300, hi = -1e300;
      for (const auto& pt : out.result.points) {
        if (pt.op != op) continue;
        const double v = pt.report.at(a).price_of_fog;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (pt.value == 1.0 && std::abs(v - 1.0) > 1e-9) {
          fail(o, fmt::format("{} {} pof {} at q=1", op, to_string(a), v));
        }
      }
      if (hi - lo > worst_range) {
        worst_range = hi - lo;
        worst = fmt::format("{} {} [{:.3f}, {:.3f}]", op, to_string(a), lo, hi);
      }
    }
  }
  if (worst_range >= 0.05) {
    fail(o, fmt::format("pof range across q grid {:.3f} >= 0.05 ({})", worst_range, worst));
  }
  if (o.pass) o.detail = fmt::format("sizes non-increasing, pof(q=1)=1, max pof range {:.3f}", worst_range);
  return o;
}

// Local maxima of a circular profile whose prominence reaches `min_prom`.
std::vector<int> prominent_peaks(const std::array<double, 24>& f, double min_prom) {
  std::vector<int> peaks;
  for (int h = 0; h < 24; ++h) {
    const double v = f[h];
    if (!(v > f[(h + 23) % 24] && v >= f[(h + 1) % 24])) continue;
    // Walk both ways until a higher value; prominence is v minus the higher of
    // the two minima met on the way.
    double left_min = v, right_min = v;
    for (int k = 1; k < 24; ++k) {
      const double x = f[(h - k + 24) % 24];
      if (x > v) break;
      left_min = std::min(left_min, x);
    }
    for (int k = 1; k < 24; ++k) {
      const double x = f[(h + k) % 24];
      if (x > v) break;
      right_min = std::min(right_min, x);
    }
    if (v - std::max(left_min, right_min) >= min_prom) peaks.push_back(h);
  }
  return peaks;
}

Outcome generator_calibration() {
  Outcome o;
  auto cfg = GeneratorConfig::defaults(100.0);
  cfg.n_users = 10000;
  cfg.n_hours = 48;
  const auto trace = generate_trace(cfg);
  const auto classes = classify_user_hours(trace);
  const auto per_user = per_user_max_displacement(classes);
  std::size_t never = 0;
  for (const auto& u : per_user) never += u.max_km < kStaticThresholdKm;
  const double static_fraction = static_cast<double>(never) / static_cast<double>(per_user.size());
  if (std::abs(static_fraction - 0.40) > 0.03) fail(o, fmt::format("static fraction {:.4f}", static_fraction));

  const auto profile = hour_of_day_profile(vehicular_fraction_series(classes));
  const auto peaks = prominent_peaks(profile, 0.05);
  const bool morning = std::any_of(peaks.begin(), peaks.end(), [](int h) { return h >= 5 && h <= 11; });
  const bool afternoon = std::any_of(peaks.begin(), peaks.end(), [](int h) { return h >= 14 && h <= 20; });
  if (peaks.size() != 2 || !morning || !afternoon) {
    fail(o, fmt::format("vehicular-fraction peaks at hours [{}]", fmt::join(peaks, ",")));
  }

  double ref_total = 0, gen_total = 0;
  for (const auto& r : kReferenceOperators) ref_total += r.cells;
  for (const auto& r : kReferenceOperators) gen_total += static_cast<double>(trace.meta().cells_per_operator.at(r.name));
  double worst = 0;
  for (const auto& r : kReferenceOperators) {
    const double ref_share = r.cells / ref_total;
    const double gen_share = static_cast<double>(trace.meta().cells_per_operator.at(r.name)) / gen_total;
    const double rel = std::abs(gen_share - ref_share) / ref_share;
    worst = std::max(worst, rel);
    if (rel > 0.02) fail(o, fmt::format("{} cell share {:.4f} vs {:.4f}", r.name, gen_share, ref_share));
  }
  if (o.pass) {
    o.detail = fmt::format("static {:.3f}, peaks at {}h and {}h, worst cell-share error {:.2f}%",
                           static_fraction, peaks[0], peaks[1], 100 * worst);
  }
  return o;
}

Outcome pof_band() {
  Outcome o;
  o.informational = true;
  auto cfg = config_from_json(nlohmann::json::object());
  const auto out = compute(cfg, default_trace());
  double lo = 1e300, hi = -1e300;
  std::vector<std::string> per_op;
  for (const auto& pt : out.result.points) {
    const double v = pt.report.at(Architecture::kBaseStation).price_of_fog;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    per_op.push_back(fmt::format("{} {:.3f}", pt.op, v));
  }
  o.detail = fmt::format("default run pof(base_station) band [{:.3f}, {:.3f}]: {}", lo, hi,
                         fmt::join(per_op, ", "));
  return o;
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return out;
}

Outcome determinism() {
  Outcome o;
  const auto base = fs::temp_directory_path() / "fogcache_acceptance_determinism";
  fs::remove_all(base);
  std::size_t compared = 0;
  for (const auto v : {SweepVariable::kNone, SweepVariable::kQ}) {
    std::array<std::map<std::string, std::string>, 2> files;
    for (int rep = 0; rep < 2; ++rep) {
      auto cfg = v == SweepVariable::kNone ? config_from_json(nlohmann::json::object())
                                           : sweep_config(v, {0.0, 0.5, 1.0});
      cfg.threads = rep == 0 ? 1 : 0;
      cfg.output_dir = base / fmt::format("{}-{}", to_string(v), rep);
      run(cfg);
      files[rep] = csv_files(cfg.output_dir);
    }
    if (files[0].empty()) fail(o, "no CSV outputs");
    if (files[0] != files[1]) fail(o, fmt::format("{} run: CSV outputs differ", to_string(v)));
    compared += files[0].size();
  }
  fs::remove_all(base);
  if (o.pass) o.detail = fmt::format("{} CSV files byte-identical across repeated runs", compared);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "cache sizes and price-of-fog on the four-station fixture", 1.0, four_station_fixture},
      {2, "identical and disjoint cache-worthy sets", 1.0, extremes},
      {3, "greedy marking equals exhaustive minimum", 10.0, greedy_oracle},
      {4, "architecture monotonicity on random runs", 60.0, architecture_monotonicity},
      {5, "recommendation trend over p", 120.0, recommendation_trend},
      {6, "locality trend over q", 120.0, locality_trend},
      {7, "generator calibration", 0.0, generator_calibration},
      {8, "default price-of-fog band (informational)", 0.0, pof_band},
      {9, "determinism of CSV outputs", 0.0, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) fail(o, fmt::format("runtime {:.2f} s over {:.0f} s", secs, c.budget_s));
    const char* tag = o.informational ? "INFO" : (o.pass ? "PASS" : "FAIL");
    if (!o.informational && !o.pass) ++failures;
    fmt::print("{} {} {}: {} ({:.2f} s)\n", tag, c.id, c.name, o.detail, secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
