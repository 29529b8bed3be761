// rptip: command-line front end. Every subcommand reads one config, writes its
// CSV files plus manifest.json into --out, and exits 0 (ok), 1 (config) or 2
// (numerical failure).

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rptip/basin.hpp"
#include "rptip/config.hpp"
#include "rptip/csv.hpp"
#include "rptip/cycles.hpp"
#include "rptip/errors.hpp"
#include "rptip/integrate.hpp"
#include "rptip/parallel.hpp"
#include "rptip/phase.hpp"
#include "rptip/tipping.hpp"

namespace fs = std::filesystem;
using namespace rptip;

namespace {

struct Context {
  std::string command;
  RunConfig cfg;
  fs::path out;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
};

std::ofstream open_out(const Context& ctx, const std::string& name) {
  std::ofstream f(ctx.out / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + (ctx.out / name).string() + "'");
  return f;
}

nlohmann::ordered_json params_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  if (const auto* v = std::get_if<VdpParams>(&p)) {
    j = {{"model", "vdp"}, {"mu", v->mu}, {"alpha", v->alpha}, {"beta", v->beta}, {"d", v->d}};
  } else {
    const auto& g = std::get<GlyParams>(p);
    j = {{"model", "gly"}, {"v", g.v},   {"sigma_i", g.sigma_i}, {"K", g.K},     {"L", g.L},
         {"sigma_M", g.sigma_M}, {"n", g.n}, {"q", g.q},         {"k_s", g.k_s}};
  }
  return j;
}

nlohmann::ordered_json shift_json(const InputShift& s) {
  return {{"kind", std::string(shift_kind_name(s.kind))},
          {"level", s.level},
          {"b", s.b},
          {"r", s.r},
          {"t_c", s.t_c},
          {"t_c1", s.t_c1},
          {"t_c2", s.t_c2}};
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_manifest(const Context& ctx) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ctx.cfg.values()) config[k] = v;
  nlohmann::ordered_json m;
  m["tool"] = "rptip";
  m["version"] = RPTIP_VERSION;
  m["command"] = ctx.command;
  m["seed"] = ctx.seed;
  m["config"] = config;
  m["resolved"] = ctx.resolved;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(m.dump())));
  m["config_hash"] = hash;
  auto f = open_out(ctx, "manifest.json");
  f << m.dump(2) << '\n';
}

CycleOptions cycle_options(const Context& ctx) {
  CycleOptions o;
  o.integrator = ctx.cfg.integrator();
  o.samples = static_cast<std::size_t>(ctx.cfg.integer("run.samples", 2048));
  if (o.samples < 16) throw ConfigError("key 'run.samples': need at least 16 samples");
  return o;
}

ScanOptions scan_options(const Context& ctx) {
  ScanOptions o;
  o.integrator = ctx.cfg.integrator();
  o.census_resolution = static_cast<std::size_t>(ctx.cfg.integer("run.census_resolution", 64));
  o.workers = ctx.workers;
  return o;
}

std::size_t count_key(const Context& ctx, const std::string& key, long fallback) {
  const long n = ctx.cfg.integer(key, fallback);
  if (n < 1) throw ConfigError("key '" + key + "': must be >= 1");
  return static_cast<std::size_t>(n);
}

// The stable cycle the system sits on at p+.
PhasedCycle base_cycle(Context& ctx, const ParameterPath& path) {
  const FrozenPicture pic = frozen_picture(path.at(path.p_plus()), cycle_options(ctx));
  const BaseSide side = ctx.cfg.side();
  const LimitCycle* c = &pic.gamma1;
  if (side == BaseSide::inner) {
    if (!pic.gamma2) throw Error(ErrorKind::NoSeparatrix, "no inner stable cycle at p+");
    c = &*pic.gamma2;
  }
  PhasedCycle pc = build_phased_cycle(*c);
  ctx.resolved["base_period"] = pc.cycle.period;
  ctx.resolved["base_anchor"] = {pc.anchor.x, pc.anchor.y};
  return pc;
}

State initial_state(Context& ctx, const PhasedCycle* base) {
  State x0;
  if (ctx.cfg.has("initial.phase")) {
    if (!base) throw ConfigError("key 'initial.phase' needs a base cycle");
    x0 = point_at_phase(*base, ctx.cfg.num("initial.phase"));
  } else if (ctx.cfg.has("initial.x") || ctx.cfg.has("initial.y")) {
    x0 = {ctx.cfg.num("initial.x"), ctx.cfg.num("initial.y")};
  } else if (base) {
    x0 = base->anchor;
  } else {
    throw ConfigError("missing key 'initial.x'");
  }
  ctx.resolved["x0"] = {x0.x, x0.y};
  if (base) {
    ctx.resolved["x0_phase"] = projected_phase(*base, x0);
    ctx.resolved["x0_distance"] = dist_to_set(x0, base->cycle);
  }
  return x0;
}

ParameterPath resolved_path(Context& ctx) {
  ParameterPath path = ctx.cfg.path();
  if (ctx.cfg.str("path.fold", "none") == "auto") {
    try {
      path.set_fold(path_fold(path, path.p_plus(), path.p_minus(), ctx.cfg.integrator()));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoOnset) throw;
    }
  }
  ctx.resolved["params"] = params_json(path.base());
  ctx.resolved["path"] = {{"p_plus", path.p_plus()}, {"p_minus", path.p_minus()}, {"slaved", path.slaved()}};
  if (path.fold()) ctx.resolved["path"]["fold"] = *path.fold();
  ctx.resolved["side"] = ctx.cfg.side() == BaseSide::outer ? "outer" : "inner";
  return path;
}

std::vector<double> rate_grid(const Context& ctx) {
  const double lo = ctx.cfg.num("grid.r_min");
  const double hi = ctx.cfg.num("grid.r_max");
  const std::size_t n = count_key(ctx, "grid.r_n", 150);
  if (!(hi > lo) || !(lo > 0.0)) throw ConfigError("key 'grid.r_min': need 0 < r_min < r_max");
  return ctx.cfg.flag("grid.r_log", true) ? logspace(lo, hi, n) : linspace(lo, hi, n);
}

std::vector<double> b_grid(const Context& ctx, const ParameterPath& path, const InputShift& shift) {
  double hi = ctx.cfg.num("grid.b_max", NAN);
  if (std::isnan(hi)) {
    if (!path.fold()) throw ConfigError("missing key 'grid.b_max' (no fold to cap b)");
    hi = std::abs(shift.level - *path.fold());
  }
  const double lo = ctx.cfg.num("grid.b_min", hi / 150.0);
  if (!(hi > lo) || lo < 0.0) throw ConfigError("key 'grid.b_min': need 0 <= b_min < b_max");
  return linspace(lo, hi, count_key(ctx, "grid.b_n", 150));
}

TippingProblem tipping_problem(Context& ctx, PhasedCycle& base_out) {
  const ParameterPath path = resolved_path(ctx);
  if (!ctx.cfg.has_shift()) throw ConfigError("missing key 'shift.kind'");
  base_out = base_cycle(ctx, path);
  TippingProblem pb{path, ctx.cfg.shift(base_out.cycle.period), {}, ctx.cfg.side(), {}, ctx.workers};
  pb.x0 = initial_state(ctx, &base_out);
  pb.options.cycle = cycle_options(ctx);
  pb.options.integrator = ctx.cfg.integrator();
  ctx.resolved["shift"] = shift_json(pb.shift);
  return pb;
}

// subcommands

void cmd_simulate(Context& ctx) {
  const ParameterPath path = resolved_path(ctx);
  const IntegratorConfig icfg = ctx.cfg.integrator();
  const std::size_t stride = count_key(ctx, "integrator.stride", 1);
  Trajectory traj;
  if (ctx.cfg.has_shift()) {
    double period = 0.0;
    const std::string tc = ctx.cfg.str("shift.t_c", "4T") + ctx.cfg.str("shift.t_c1", "") + ctx.cfg.str("shift.t_c2", "");
    const bool needs_period = tc.find('T') != std::string::npos || !ctx.cfg.has("integrator.t_end");
    PhasedCycle base;
    if (needs_period) {
      base = base_cycle(ctx, path);
      period = base.cycle.period;
    }
    const InputShift shift = ctx.cfg.shift(period);
    ctx.resolved["shift"] = shift_json(shift);
    const State x0 = initial_state(ctx, needs_period ? &base : nullptr);
    const double t_end =
        ctx.cfg.num("integrator.t_end", std::max(settled_time(shift, 1e-8), 0.0) + 5.0 * period);
    traj = integrate_nonautonomous(path, shift, x0, 0.0, t_end, icfg);
  } else {
    const State x0 = initial_state(ctx, nullptr);
    const ModelParams p = path.at(path.p_plus());
    traj = integrate_autonomous(p, x0, 0.0, ctx.cfg.num("integrator.t_end"), icfg);
  }
  auto f = open_out(ctx, "trajectory.csv");
  write_trajectory_csv(f, traj, stride);
}

void cmd_cycles(Context& ctx) {
  const ModelParams params = ctx.cfg.params();
  ctx.resolved["params"] = params_json(params);
  const CycleOptions opt = cycle_options(ctx);
  const Equilibrium e0 = principal_equilibrium(params);
  const CycleSection cs = cycle_section(params, e0);
  const auto roots = cycle_census(params, cs, opt.integrator, scan_options(ctx).census_resolution);
  const RegionLabel region = classify_region(params, opt);

  {
    auto f = open_out(ctx, "equilibrium.csv");
    f << "x,y,re1,im1,re2,im2,stability,region\n";
    f << fmt(e0.location.x) << ',' << fmt(e0.location.y) << ',' << fmt(e0.eigenvalues[0].real()) << ','
      << fmt(e0.eigenvalues[0].imag()) << ',' << fmt(e0.eigenvalues[1].real()) << ','
      << fmt(e0.eigenvalues[1].imag()) << ',' << stability_name(e0.stability) << ',' << region_name(region) << '\n';
  }

  std::vector<LimitCycle> cycles;
  for (const auto& r : roots) cycles.push_back(cycle_through(params, cs, r.s, r.stability, opt));
  std::size_t n_stable = 0;
  for (const auto& c : cycles) n_stable += c.stability == Stability::stable;
  const double thr = kind_of(params) == ModelKind::vdp ? kVdpLargeAmplitude : kGlyLargeAmplitude;
  auto f = open_out(ctx, "cycles.csv");
  f << "name,stability,s,period,angular_frequency,amplitude,min_x,max_x,min_y,max_y\n";
  std::size_t stable_seen = 0, unstable_seen = 0;
  for (std::size_t i = cycles.size(); i-- > 0;) {
    const LimitCycle& c = cycles[i];
    std::string name;
    if (c.stability == Stability::unstable) {
      name = unstable_seen++ == 0 ? "theta" : "theta" + std::to_string(unstable_seen);
    } else if (n_stable >= 2) {
      name = stable_seen++ == 0 ? "gamma1" : "gamma2";
    } else {
      name = c.amplitude() >= thr ? "gamma1" : "gamma2";
    }
    f << name << ',' << stability_name(c.stability) << ',' << fmt(roots[i].s) << ',' << fmt(c.period) << ','
      << fmt(c.angular_frequency) << ',' << fmt(c.amplitude()) << ',' << fmt(c.min_x()) << ',' << fmt(c.max_x())
      << ',' << fmt(c.min_y()) << ',' << fmt(c.max_y()) << '\n';
    auto fc = open_out(ctx, "cycle_" + name + ".csv");
    write_phased_csv(fc, build_phased_cycle(c));
  }

  if (const auto* v = std::get_if<VdpParams>(&params)) {
    auto fa = open_out(ctx, "amplitude_roots.csv");
    fa << "A\n";
    for (double a : amplitude_roots(*v)) fa << fmt(a) << '\n';
  }

  // Polygon membership against forward integration on random states.
  const long samples = ctx.cfg.integer("run.oracle_samples", 0);
  if (samples > 0) {
    const FrozenPicture pic = frozen_picture(params, opt);
    if (!pic.boundary) throw Error(ErrorKind::NoSeparatrix, "oracle check needs a separatrix");
    const LimitCycle& outer = pic.gamma1;
    const double pad = 0.2 * outer.diameter();
    double lo_x = outer.min_x() - pad, hi_x = outer.max_x() + pad;
    const double lo_y = outer.min_y() - pad, hi_y = outer.max_y() + pad;
    if (kind_of(params) == ModelKind::gly) lo_x = std::max(lo_x, 0.0);
    std::mt19937_64 rng(ctx.seed);
    std::vector<State> pts(static_cast<std::size_t>(samples));
    for (auto& p : pts) {
      const double ux = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double uy = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      p = {lo_x + ux * (hi_x - lo_x), std::max(0.0, lo_y + uy * (hi_y - lo_y))};
    }
    std::vector<int> verdict(pts.size());
    const double horizon = 200.0 * outer.period;
    parallel_for(pts.size(), ctx.workers, [&](std::size_t k) {
      const Basin poly = membership(*pic.boundary, pts[k]);
      if (poly == Basin::band) {
        verdict[k] = -1;
        return;
      }
      try {
        const Basin fwd = forward_basin(params, pts[k], outer, pic.gamma2 ? &*pic.gamma2 : nullptr, e0.location,
                                        horizon, opt.integrator);
        verdict[k] = fwd == Basin::band ? -1 : (fwd == poly ? 1 : 0);
      } catch (const Error&) {
        verdict[k] = -1;
      }
    });
    long agree = 0, used = 0;
    for (int v : verdict) {
      if (v < 0) continue;
      ++used;
      agree += v;
    }
    auto fo = open_out(ctx, "oracle.csv");
    fo << "samples,compared,agree,fraction\n";
    fo << samples << ',' << used << ',' << agree << ',' << fmt(used ? static_cast<double>(agree) / used : 0.0) << '\n';
  }
}

void cmd_scan1d(Context& ctx) {
  const ModelParams params = ctx.cfg.params();
  ctx.resolved["params"] = params_json(params);
  const std::string axis_name = ctx.cfg.str("grid.axis", "input");
  if (axis_name != "input" && axis_name != "secondary") throw ConfigError("key 'grid.axis': expected input or secondary");
  const ScanAxis axis = axis_name == "input" ? ScanAxis::input : ScanAxis::secondary;
  const auto scan = scan_one_param(params, axis, ctx.cfg.num("grid.lo"), ctx.cfg.num("grid.hi"),
                                   count_key(ctx, "grid.n", 60), scan_options(ctx));
  auto f = open_out(ctx, "branches.csv");
  write_branch_csv(f, scan);
}

void cmd_scan2d(Context& ctx) {
  const ModelParams params = ctx.cfg.params();
  ctx.resolved["params"] = params_json(params);
  const auto scan = scan_two_param(params, ctx.cfg.num("grid.p1_min"), ctx.cfg.num("grid.p1_max"),
                                   count_key(ctx, "grid.p1_n", 60), ctx.cfg.num("grid.p2_min"),
                                   ctx.cfg.num("grid.p2_max"), count_key(ctx, "grid.p2_n", 60), scan_options(ctx));
  {
    auto f = open_out(ctx, "regions.csv");
    write_region_csv(f, scan);
  }
  {
    auto f = open_out(ctx, "hopf.csv");
    write_polyline_csv(f, scan.hopf);
  }
  {
    auto f = open_out(ctx, "fold_l1.csv");
    write_polyline_csv(f, scan.fold_l1);
  }
  {
    auto f = open_out(ctx, "fold_l2.csv");
    write_polyline_csv(f, scan.fold_l2);
  }
  auto f = open_out(ctx, "gh.csv");
  std::vector<Point2> gh;
  if (scan.gh) gh.push_back(*scan.gh);
  write_polyline_csv(f, gh);
}

void cmd_basin_region(Context& ctx) {
  const ParameterPath path = resolved_path(ctx);
  const PhasedCycle base = base_cycle(ctx, path);
  const auto region =
      bi_region(base, ctx.cfg.side(), path.at(path.p_plus()), ctx.cfg.num("grid.p1_min"), ctx.cfg.num("grid.p1_max"),
                count_key(ctx, "grid.p1_n", 60), ctx.cfg.num("grid.p2_min"), ctx.cfg.num("grid.p2_max"),
                count_key(ctx, "grid.p2_n", 60), cycle_options(ctx), ctx.workers);
  auto f = open_out(ctx, "bi_region.csv");
  write_bi_region_csv(f, region);
}

void cmd_arcs(Context& ctx) {
  const ParameterPath path = resolved_path(ctx);
  const PhasedCycle base = base_cycle(ctx, path);
  const CycleOptions opt = cycle_options(ctx);
  const BasinBoundary boundary(find_separatrix(path.at(path.p_minus()), opt));
  const UnstableArcSet arcs = unstable_arcs(base, boundary, ctx.cfg.side());
  ctx.resolved["flag"] = std::string(bi_flag_name(arcs.flag));
  ctx.resolved["max_violation"] = arcs.max_violation;
  {
    auto f = open_out(ctx, "arcs.csv");
    write_arcs_csv(f, arcs);
  }
  {
    auto f = open_out(ctx, "base_cycle.csv");
    write_phased_csv(f, base);
  }
  auto f = open_out(ctx, "onset.csv");
  f << "p_c,secondary\n";
  if (arcs.flag == BIFlag::partial || arcs.flag == BIFlag::total) {
    const double pc = marginal_parameter(base, path, path.p_plus(), path.p_minus(), ctx.cfg.side(), opt);
    f << fmt(pc) << ',' << fmt(get_axis(path.at(pc), ScanAxis::secondary)) << '\n';
  }
}

void write_critical(Context& ctx, const TippingProblem& pb, const TippingGrid& grid, const std::string& name) {
  std::vector<std::pair<double, std::vector<double>>> curve;
  for (double b : grid.rows) curve.emplace_back(b, critical_rates(pb, grid, b));
  auto f = open_out(ctx, name);
  write_critical_rates_csv(f, curve);
}

void cmd_tipping_diagram(Context& ctx) {
  PhasedCycle base;
  const TippingProblem pb = tipping_problem(ctx, base);
  const auto grid = tipping_diagram(pb, b_grid(ctx, pb.path, pb.shift), rate_grid(ctx), pb.shift.t_c);
  {
    auto f = open_out(ctx, "tipping.csv");
    write_tipping_csv(f, grid);
  }
  if (ctx.cfg.flag("grid.critical", true)) write_critical(ctx, pb, grid, "critical_rates.csv");
}

void cmd_tc_sweep(Context& ctx) {
  PhasedCycle base;
  const TippingProblem pb = tipping_problem(ctx, base);
  std::vector<double> tcs = ctx.cfg.list("grid.tc_list");
  if (tcs.empty()) {
    const double step = pb.path.kind() == ModelKind::vdp ? 0.11 : 15.0;
    for (int k = -1; k <= 4; ++k) tcs.push_back(pb.shift.t_c + k * step);
  }
  ctx.resolved["tc_list"] = tcs;
  const auto grids = tc_sweep(pb, b_grid(ctx, pb.path, pb.shift), rate_grid(ctx), tcs);
  auto index = open_out(ctx, "tc_index.csv");
  index << "index,t_c,file\n";
  for (std::size_t k = 0; k < grids.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "tipping_tc%02zu.csv", k);
    index << k << ',' << fmt(tcs[k]) << ',' << name << '\n';
    auto f = open_out(ctx, name);
    write_tipping_csv(f, grids[k]);
  }
}

void cmd_pace_phase(Context& ctx) {
  PhasedCycle base;
  const TippingProblem pb = tipping_problem(ctx, base);
  const std::size_t n_phi = count_key(ctx, "grid.phi_n", 128);
  std::vector<double> phis(n_phi);
  for (std::size_t k = 0; k < n_phi; ++k) phis[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / n_phi;
  const PacePhase pp = pace_vs_phase(pb, base, pb.shift.b, rate_grid(ctx), phis, pb.shift.t_c);
  {
    auto f = open_out(ctx, "pace_phase.csv");
    write_tipping_csv(f, pp.grid);
  }
  auto f = open_out(ctx, "phase_overlay.csv");
  write_arcs_csv(f, pp.overlay);
}

void cmd_series(Context& ctx) {
  const ParameterPath path = resolved_path(ctx);
  if (!ctx.cfg.has_shift()) throw ConfigError("missing key 'shift.kind'");
  const InputShift shift = ctx.cfg.shift(0.0);
  if (shift.kind != ShiftKind::impulse) throw ConfigError("key 'shift.kind': series needs impulse");
  ctx.resolved["shift"] = shift_json(shift);
  std::vector<State> x0s = ctx.cfg.initial_list();
  if (x0s.empty()) x0s.push_back(initial_state(ctx, nullptr));
  ClassifyOptions opt;
  opt.cycle = cycle_options(ctx);
  opt.integrator = ctx.cfg.integrator();
  const auto series = series_demo(path, shift, x0s, opt, ctx.workers);
  auto f = open_out(ctx, "series.csv");
  write_series_csv(f, series);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate- and phase-induced tipping toolkit for birhythmic oscillators"};
  app.set_version_flag("--version", std::string(RPTIP_VERSION));
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    void (*run)(Context&);
  };
  const Command commands[] = {
      {"simulate", "integrate one trajectory (frozen or forced)", cmd_simulate},
      {"cycles", "equilibrium, limit cycles and region of one parameter point", cmd_cycles},
      {"scan1d", "one-parameter branch scan with fold refinement", cmd_scan1d},
      {"scan2d", "two-parameter region scan with Hopf, fold and GH curves", cmd_scan2d},
      {"basin-region", "basin-instability flags over a parameter grid", cmd_basin_region},
      {"arcs", "basin-unstable arcs of the base cycle and the marginal onset", cmd_arcs},
      {"tipping-diagram", "Track/Tip over magnitude and rate", cmd_tipping_diagram},
      {"tc-sweep", "tipping diagrams for a list of switch times", cmd_tc_sweep},
      {"pace-phase", "Track/Tip over rate and initial phase", cmd_pace_phase},
      {"series", "impulse input checked after each switch", cmd_series},
  };

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  unsigned workers = default_workers();
  std::uint64_t seed = 1;
  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "INI config file")->required();
    sub->add_option("--set", overrides, "override section.key=value (repeatable)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker threads (default RPTIP_WORKERS or all cores)");
    sub->add_option("--seed", seed, "seed for random oracle sampling");
    sub->callback([&chosen, &c] { chosen = &c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Context ctx;
  ctx.command = chosen->name;
  ctx.workers = std::max(1u, workers);
  ctx.seed = seed;
  try {
    ctx.cfg = RunConfig::from_file(config_path);
    for (const auto& o : overrides) ctx.cfg.set(o);
    ctx.out = out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir + "'");
    chosen->run(ctx);
    write_manifest(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
