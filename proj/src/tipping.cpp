#include "rptip/tipping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "rptip/csv.hpp"
#include "rptip/errors.hpp"
#include "rptip/parallel.hpp"

namespace rptip {

namespace {

State run_forced(const ParameterPath& path, const InputShift& shift, State x0, double t0, double t1,
                 const IntegratorConfig& cfg) {
  if (t1 <= t0) return x0;
  Stepper stepper(forced_field(path, shift), t0, x0, cfg, t1 - t0);
  stepper.set_windows(fast_windows(shift), 0.1 / shift.r);
  while (stepper.t() < t1) stepper.step(t1);
  return stepper.x();
}

double base_period(const FrozenPicture& pic, BaseSide side) {
  if (side == BaseSide::inner && pic.gamma2) return pic.gamma2->period;
  return pic.gamma1.period;
}

double far_level(const InputShift& s) { return s.kind == ShiftKind::impulse ? s.level + s.b : s.level - s.b; }

}  // namespace

std::string_view outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Track: return "Track";
    case OutcomeKind::Tip: return "Tip";
    case OutcomeKind::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

FrozenPicture frozen_picture(const ModelParams& params, const CycleOptions& opt) {
  const Equilibrium e0 = principal_equilibrium(params);
  const CycleSection cs = cycle_section(params, e0);
  const auto roots = cycle_census(params, cs, opt.integrator);
  FrozenPicture pic;
  pic.params = params;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].stability != Stability::unstable) continue;
    if (i + 1 >= roots.size() || roots[i + 1].stability != Stability::stable) continue;
    pic.boundary.emplace(cycle_through(params, cs, roots[i].s, Stability::unstable, opt));
    pic.gamma1 = cycle_through(params, cs, roots[i + 1].s, Stability::stable, opt);
    if (i > 0 && roots[i - 1].stability == Stability::stable) {
      pic.gamma2 = cycle_through(params, cs, roots[i - 1].s, Stability::stable, opt);
    }
    return pic;
  }
  // No separatrix: a single attractor.
  for (const auto& r : roots) {
    if (r.stability == Stability::stable) {
      pic.gamma1 = cycle_through(params, cs, r.s, Stability::stable, opt);
      return pic;
    }
  }
  throw Error(ErrorKind::NoSeparatrix, "frozen system has no limit cycle");
}

std::string attractor_of(const FrozenPicture& pic, const State& s) {
  if (!pic.boundary) {
    const double thr = kind_of(pic.params) == ModelKind::vdp ? kVdpLargeAmplitude : kGlyLargeAmplitude;
    return pic.gamma1.amplitude() >= thr ? "gamma1" : "gamma2";
  }
  switch (membership(*pic.boundary, s)) {
    case Basin::outer: return "gamma1";
    case Basin::inner: return pic.gamma2 ? "gamma2" : "e0";
    case Basin::band: return "none";
  }
  return "none";
}

namespace {

bool has_separatrix(const ModelParams& params, const IntegratorConfig& cfg) {
  try {
    const Equilibrium e0 = principal_equilibrium(params);
    const auto roots = cycle_census(params, cycle_section(params, e0), cfg);
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
      if (roots[i].stability == Stability::unstable && roots[i + 1].stability == Stability::stable) return true;
    }
  } catch (const Error&) {
  }
  return false;
}

}  // namespace

double path_fold(const ParameterPath& path, double from, double to, const IntegratorConfig& cfg, double tol) {
  if (!has_separatrix(path.at(from), cfg)) throw Error(ErrorKind::InvalidArgument, "path start is not birhythmic");
  const int coarse = 48;
  double prev = from;
  for (int k = 1; k <= coarse; ++k) {
    const double p = from + (to - from) * k / coarse;
    if (!has_separatrix(path.at(p), cfg)) {
      double lo = prev, hi = p;
      while (std::abs(hi - lo) > tol) {
        const double mid = 0.5 * (lo + hi);
        (has_separatrix(path.at(mid), cfg) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = p;
  }
  throw Error(ErrorKind::NoOnset, "no fold along the path");
}

void check_path(const ParameterPath& path, const InputShift& shift) {
  const auto fold = path.fold();
  if (!fold) return;
  const double start = shift.level;
  const double extreme = far_level(shift);
  if ((start - *fold) * (extreme - *fold) < 0.0) {
    throw Error(ErrorKind::PathOutOfRegion, "input crosses the fold of the path at " + fmt(*fold));
  }
}

Outcome classify(const ParameterPath& path, const InputShift& shift, State x0, BaseSide side,
                 const ClassifyOptions& opt, const FrozenPicture* future) {
  shift.validate();
  check_path(path, shift);
  std::optional<FrozenPicture> own;
  if (!future) {
    own = frozen_picture(path.at(limits(shift).future), opt.cycle);
    future = &*own;
  }
  const double settle = std::max(settled_time(shift, opt.settle_eps), 0.0);
  const double t_end = settle + opt.future_periods * base_period(*future, side);
  const State xf = run_forced(path, shift, x0, 0.0, t_end, opt.integrator);

  Outcome out;
  out.final_state = xf;
  out.attractor = attractor_of(*future, xf);
  out.dist_gamma1 = dist_to_set(xf, future->gamma1);
  out.dist_gamma2 = future->gamma2 ? dist_to_set(xf, *future->gamma2) : std::numeric_limits<double>::quiet_NaN();
  if (out.attractor == "none") {
    out.kind = OutcomeKind::Indeterminate;
    out.reason = "band";
    return out;
  }
  const bool outer = out.attractor == "gamma1";
  out.kind = (outer == (side == BaseSide::outer)) ? OutcomeKind::Track : OutcomeKind::Tip;
  return out;
}

namespace {

Outcome classify_cell(const TippingProblem& pb, const InputShift& shift, State x0, const FrozenPicture* fut) {
  try {
    return classify(pb.path, shift, x0, pb.side, pb.options, fut);
  } catch (const Error& e) {
    Outcome o;
    o.kind = OutcomeKind::Indeterminate;
    o.reason = std::string(e.name());
    o.dist_gamma1 = o.dist_gamma2 = std::numeric_limits<double>::quiet_NaN();
    return o;
  }
}

InputShift cell_shift(const InputShift& tmpl, double b, double r, double t_c) {
  InputShift s = tmpl;
  s.b = b;
  s.r = r;
  if (s.kind == ShiftKind::impulse) {
    const double width = s.t_c2 - s.t_c1;
    s.t_c1 = t_c;
    s.t_c2 = t_c + width;
  } else {
    s.t_c = t_c;
  }
  return s;
}

// Frozen pictures at every distinct future limit of a b grid.
std::map<double, FrozenPicture> future_pictures(const TippingProblem& pb, const std::vector<double>& b_grid) {
  std::vector<double> keys;
  for (double b : b_grid) {
    InputShift s = pb.shift;
    s.b = b;
    keys.push_back(limits(s).future);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::optional<FrozenPicture>> pics(keys.size());
  parallel_for(keys.size(), pb.workers, [&](std::size_t i) {
    try {
      pics[i] = frozen_picture(pb.path.at(keys[i]), pb.options.cycle);
    } catch (const Error&) {
    }
  });
  std::map<double, FrozenPicture> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (pics[i]) out.emplace(keys[i], std::move(*pics[i]));
  }
  return out;
}

const FrozenPicture* lookup(const std::map<double, FrozenPicture>& pics, const InputShift& s) {
  auto it = pics.find(limits(s).future);
  return it == pics.end() ? nullptr : &it->second;
}

Outcome classify_with(const TippingProblem& pb, const std::map<double, FrozenPicture>& pics,
                      const InputShift& s, State x0) {
  const FrozenPicture* fut = lookup(pics, s);
  if (!fut) {
    Outcome o;
    o.reason = "NoSeparatrix";
    o.dist_gamma1 = o.dist_gamma2 = std::numeric_limits<double>::quiet_NaN();
    return o;
  }
  return classify_cell(pb, s, x0, fut);
}

bool decided(OutcomeKind k) { return k != OutcomeKind::Indeterminate; }

std::vector<double> refine_transitions(const TippingProblem& pb, const std::map<double, FrozenPicture>& pics,
                                       double b, double t_c, const std::vector<double>& rates,
                                       const std::vector<OutcomeKind>& kinds) {
  std::vector<double> out;
  std::size_t last = rates.size();
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (!decided(kinds[j])) continue;
    if (last < rates.size() && kinds[last] != kinds[j]) {
      double lo = rates[last], hi = rates[j];
      const OutcomeKind k_lo = kinds[last];
      while (hi / lo > 1.0 + 1e-3) {
        const double mid = std::sqrt(lo * hi);
        const Outcome o = classify_with(pb, pics, cell_shift(pb.shift, b, mid, t_c), pb.x0);
        if (!decided(o.kind)) break;
        (o.kind == k_lo ? lo : hi) = mid;
      }
      out.push_back(std::sqrt(lo * hi));
    }
    last = j;
  }
  return out;
}

}  // namespace

TippingGrid tipping_diagram(const TippingProblem& pb, const std::vector<double>& b_grid,
                            const std::vector<double>& r_grid, double t_c) {
  TippingGrid g;
  g.axes = GridAxes::b_r;
  g.rows = b_grid;
  g.rates = r_grid;
  g.t_c = t_c;
  g.cells.resize(b_grid.size() * r_grid.size());
  const auto pics = future_pictures(pb, b_grid);
  const std::size_t nr = r_grid.size();
  parallel_for(g.cells.size(), pb.workers, [&](std::size_t idx) {
    const InputShift s = cell_shift(pb.shift, b_grid[idx / nr], r_grid[idx % nr], t_c);
    g.cells[idx] = classify_with(pb, pics, s, pb.x0);
  });
  return g;
}

std::vector<double> critical_rates(const TippingProblem& pb, double b, const std::vector<double>& r_grid,
                                   double t_c) {
  const auto pics = future_pictures(pb, {b});
  std::vector<OutcomeKind> kinds(r_grid.size());
  parallel_for(r_grid.size(), pb.workers, [&](std::size_t j) {
    kinds[j] = classify_with(pb, pics, cell_shift(pb.shift, b, r_grid[j], t_c), pb.x0).kind;
  });
  return refine_transitions(pb, pics, b, t_c, r_grid, kinds);
}

std::vector<double> critical_rates(const TippingProblem& pb, const TippingGrid& grid, double b) {
  std::size_t row = grid.rows.size();
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    if (std::abs(grid.rows[i] - b) <= 1e-12 * std::max(1.0, std::abs(b))) row = i;
  }
  if (grid.axes != GridAxes::b_r || row == grid.rows.size()) return critical_rates(pb, b, grid.rates, grid.t_c);
  const auto pics = future_pictures(pb, {b});
  std::vector<OutcomeKind> kinds(grid.rates.size());
  for (std::size_t j = 0; j < grid.rates.size(); ++j) kinds[j] = grid.at(row, j).kind;
  return refine_transitions(pb, pics, b, grid.t_c, grid.rates, kinds);
}

std::vector<TippingGrid> tc_sweep(const TippingProblem& pb, const std::vector<double>& b_grid,
                                  const std::vector<double>& r_grid, const std::vector<double>& tc_list) {
  std::vector<TippingGrid> out;
  out.reserve(tc_list.size());
  for (double tc : tc_list) out.push_back(tipping_diagram(pb, b_grid, r_grid, tc));
  return out;
}

PacePhase pace_vs_phase(const TippingProblem& pb, const PhasedCycle& base, double b,
                        const std::vector<double>& r_grid, const std::vector<double>& phi_grid, double t_c) {
  PacePhase out;
  TippingGrid& g = out.grid;
  g.axes = GridAxes::phi_r;
  g.rows = phi_grid;
  g.rates = r_grid;
  g.t_c = t_c;
  g.cells.resize(phi_grid.size() * r_grid.size());
  const auto pics = future_pictures(pb, {b});
  const std::size_t nr = r_grid.size();
  parallel_for(g.cells.size(), pb.workers, [&](std::size_t idx) {
    const State x0 = point_at_phase(base, phi_grid[idx / nr]);
    g.cells[idx] = classify_with(pb, pics, cell_shift(pb.shift, b, r_grid[idx % nr], t_c), x0);
  });
  InputShift s = pb.shift;
  s.b = b;
  const FrozenPicture far = frozen_picture(pb.path.at(far_level(s)), pb.options.cycle);
  if (!far.boundary) throw Error(ErrorKind::NoSeparatrix, "no separatrix at the far end of the path");
  out.overlay = unstable_arcs(base, *far.boundary, pb.side);
  return out;
}

std::vector<SeriesResult> series_demo(const ParameterPath& path, const InputShift& impulse,
                                      const std::vector<State>& x0s, const ClassifyOptions& opt,
                                      unsigned workers) {
  if (impulse.kind != ShiftKind::impulse) throw Error(ErrorKind::InvalidArgument, "series needs an impulse input");
  impulse.validate();
  check_path(path, impulse);
  const FrozenPicture high = frozen_picture(path.at(impulse.level + impulse.b), opt.cycle);
  const FrozenPicture low = frozen_picture(path.at(impulse.level), opt.cycle);
  const double t_mid = 0.5 * (impulse.t_c1 + impulse.t_c2);
  double t_long = low.gamma1.period;
  if (low.gamma2) t_long = std::max(t_long, low.gamma2->period);
  const double t_end = std::max(settled_time(impulse, opt.settle_eps), t_mid) + opt.future_periods * t_long;

  std::vector<SeriesResult> out(x0s.size());
  parallel_for(x0s.size(), workers, [&](std::size_t i) {
    const State mid = run_forced(path, impulse, x0s[i], 0.0, t_mid, opt.integrator);
    const State end = run_forced(path, impulse, mid, t_mid, t_end, opt.integrator);
    out[i] = {x0s[i], attractor_of(high, mid), attractor_of(low, end)};
  });
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > 0.0)) throw Error(ErrorKind::InvalidArgument, "log grid needs positive bounds");
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  if (n > 0) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

void write_tipping_csv(std::ostream& out, const TippingGrid& g) {
  out << (g.axes == GridAxes::b_r ? "b" : "phi") << ",r,outcome,attractor,dist_gamma1,dist_gamma2\n";
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    for (std::size_t j = 0; j < g.rates.size(); ++j) {
      const Outcome& o = g.at(i, j);
      out << fmt(g.rows[i]) << ',' << fmt(g.rates[j]) << ',' << outcome_name(o.kind) << ',' << o.attractor << ','
          << fmt(o.dist_gamma1) << ',' << fmt(o.dist_gamma2) << '\n';
    }
  }
}

void write_critical_rates_csv(std::ostream& out, const std::vector<std::pair<double, std::vector<double>>>& curve) {
  out << "b,rc_index,rc\n";
  for (const auto& [b, rcs] : curve) {
    for (std::size_t k = 0; k < rcs.size(); ++k) out << fmt(b) << ',' << k + 1 << ',' << fmt(rcs[k]) << '\n';
  }
}

void write_series_csv(std::ostream& out, const std::vector<SeriesResult>& series) {
  out << "x0,y0,after_first,after_second\n";
  for (const auto& s : series) {
    out << fmt(s.x0.x) << ',' << fmt(s.x0.y) << ',' << s.after_first << ',' << s.after_second << '\n';
  }
}

}  // namespace rptip
