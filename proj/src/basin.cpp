#include "rptip/basin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rptip/csv.hpp"
#include "rptip/errors.hpp"
#include "rptip/parallel.hpp"

namespace rptip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double segment_distance(const State& p, const State& a, const State& b) {
  const State ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = len2 > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double is_left(const State& a, const State& b, const State& p) {
  return (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
}

}  // namespace

std::string_view basin_name(Basin b) {
  switch (b) {
    case Basin::inner: return "inner";
    case Basin::outer: return "outer";
    case Basin::band: return "band";
  }
  return "band";
}

std::string_view bi_flag_name(BIFlag f) {
  switch (f) {
    case BIFlag::none: return "none";
    case BIFlag::partial: return "partial";
    case BIFlag::total: return "total";
    case BIFlag::marginal: return "marginal";
    case BIFlag::na: return "na";
  }
  return "na";
}

BasinBoundary::BasinBoundary(LimitCycle cycle) : theta(std::move(cycle)) {
  polygon.assign(theta.samples.begin(), theta.samples.end() - 1);
  band = 1e-3 * theta.diameter();
}

LimitCycle find_separatrix(const ModelParams& params, const CycleOptions& opt) {
  const Equilibrium e0 = principal_equilibrium(params);
  const CycleSection cs = cycle_section(params, e0);
  const auto roots = cycle_census(params, cs, opt.integrator);
  const CycleRoot* pick = nullptr;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].stability != Stability::unstable) continue;
    const bool outer_attractor = i + 1 < roots.size() && roots[i + 1].stability == Stability::stable;
    if (outer_attractor || !pick) pick = &roots[i];
    if (outer_attractor) break;
  }
  if (!pick) throw Error(ErrorKind::NoSeparatrix, "no unstable limit cycle at these parameters");
  return cycle_through(params, cs, pick->s, Stability::unstable, opt);
}

int winding_number(const std::vector<State>& poly, const State& p) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const State& a = poly[i];
    const State& b = poly[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && is_left(a, b, p) > 0.0) ++wn;
    } else {
      if (b.y <= p.y && is_left(a, b, p) < 0.0) --wn;
    }
  }
  return wn;
}

double polygon_distance(const std::vector<State>& poly, const State& p) {
  double best = 1e300;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % n]));
  return best;
}

double signed_clearance(const BasinBoundary& boundary, const State& p) {
  const double d = polygon_distance(boundary.polygon, p);
  return winding_number(boundary.polygon, p) != 0 ? -d : d;
}

Basin membership(const BasinBoundary& boundary, const State& s) {
  const double c = signed_clearance(boundary, s);
  if (std::abs(c) < boundary.band) return Basin::band;
  return c < 0.0 ? Basin::inner : Basin::outer;
}

Basin membership(const ModelParams& params, const State& s, const CycleOptions& opt) {
  return membership(BasinBoundary(find_separatrix(params, opt)), s);
}

BaseSide default_base_side(ModelKind kind) { return kind == ModelKind::vdp ? BaseSide::outer : BaseSide::inner; }

double Arc::length(double period) const {
  const double l = t_end - t_start;
  return l >= 0.0 ? l : l + period;
}

double UnstableArcSet::total_length() const {
  double s = 0.0;
  for (const auto& a : arcs) s += a.length(period);
  return s;
}

bool UnstableArcSet::contains_time(double t) const {
  for (const auto& a : arcs) {
    if (a.t_start <= a.t_end ? (t >= a.t_start && t <= a.t_end) : (t >= a.t_start || t <= a.t_end)) return true;
  }
  return false;
}

UnstableArcSet unstable_arcs(const PhasedCycle& base, const BasinBoundary& boundary, BaseSide side) {
  const LimitCycle& c = base.cycle;
  const std::size_t n = c.intervals();
  const double h = c.dt();
  const double T = c.period;
  // positive inside the wrong basin
  auto wrong = [&](const State& p) {
    const double cl = signed_clearance(boundary, p);
    return side == BaseSide::outer ? -cl : cl;
  };
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = wrong(c.samples[k]);

  UnstableArcSet out;
  out.period = T;
  out.max_violation = *std::max_element(w.begin(), w.end());

  auto refine = [&](std::size_t k) {
    // sign change of w between samples k and k+1
    double lo = static_cast<double>(k) * h, hi = lo + h;
    const bool lo_pos = w[k] > 0.0;
    for (int i = 0; i < 100 && hi - lo > 1e-12 * T; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((wrong(c.at_time(mid)) > 0.0) == lo_pos ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    if (t >= T) t -= T;
    return t;
  };

  const auto positive = std::count_if(w.begin(), w.end(), [](double v) { return v > 0.0; });
  if (positive == static_cast<long>(n)) {
    out.arcs.push_back({0.0, T, 0.0, kTwoPi});
    out.flag = BIFlag::total;
  } else if (positive > 0) {
    // Start scanning right after a sample that is not in the wrong basin.
    std::size_t k0 = 0;
    while (w[k0] > 0.0) ++k0;
    double t_start = 0.0;
    bool open = false;
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t k = (k0 + step) % n;
      const std::size_t k1 = (k + 1) % n;
      if (!open && w[k] <= 0.0 && w[k1] > 0.0) {
        t_start = refine(k);
        open = true;
      } else if (open && w[k] > 0.0 && w[k1] <= 0.0) {
        const double t_end = refine(k);
        out.arcs.push_back({t_start, t_end, kTwoPi * t_start / T, kTwoPi * t_end / T});
        open = false;
      }
    }
    std::sort(out.arcs.begin(), out.arcs.end(), [](const Arc& a, const Arc& b) { return a.t_start < b.t_start; });
    out.flag = BIFlag::partial;
  }
  if (std::abs(out.max_violation) < boundary.band && out.flag != BIFlag::total) out.flag = BIFlag::marginal;
  return out;
}

double marginal_parameter(const PhasedCycle& base, const ParameterPath& path, double from, double to, BaseSide side,
                          const CycleOptions& opt, double tol) {
  auto violation = [&](double p) {
    const BasinBoundary boundary(find_separatrix(path.at(p), opt));
    return unstable_arcs(base, boundary, side).max_violation;
  };
  const int coarse = 24;
  double prev = from;
  if (violation(from) > 0.0) throw Error(ErrorKind::InvalidArgument, "basin instability already present at the path start");
  for (int k = 1; k <= coarse; ++k) {
    const double p = from + (to - from) * k / coarse;
    const double v = violation(p);
    if (v > 0.0) {
      double lo = prev, hi = p;
      while (std::abs(hi - lo) > tol) {
        const double mid = 0.5 * (lo + hi);
        (violation(mid) > 0.0 ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = p;
  }
  throw Error(ErrorKind::NoOnset, "no basin instability along the path");
}

BIRegion bi_region(const PhasedCycle& base, BaseSide side, const ModelParams& fixed, double p1_lo, double p1_hi,
                   std::size_t n1, double p2_lo, double p2_hi, std::size_t n2, const CycleOptions& opt,
                   unsigned workers) {
  if (n1 == 0 || n2 == 0) throw Error(ErrorKind::InvalidArgument, "grid must be non-empty");
  BIRegion out;
  auto grid = [](double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
      g[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return g;
  };
  out.p1 = grid(p1_lo, p1_hi, n1);
  out.p2 = grid(p2_lo, p2_hi, n2);
  out.flags.assign(n1 * n2, BIFlag::na);
  parallel_for(n1 * n2, workers, [&](std::size_t idx) {
    const ModelParams p =
        set_axis(set_axis(fixed, ScanAxis::secondary, out.p1[idx / n2]), ScanAxis::input, out.p2[idx % n2]);
    try {
      const BasinBoundary boundary(find_separatrix(p, opt));
      out.flags[idx] = unstable_arcs(base, boundary, side).flag;
    } catch (const Error&) {
      out.flags[idx] = BIFlag::na;
    }
  });
  return out;
}

double dist_to_set(const State& s, const LimitCycle& cycle) {
  const std::size_t n = cycle.intervals();
  std::size_t best = 0;
  double best_d = 1e300;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = distance(s, cycle.samples[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  const State& prev = cycle.samples[(best + n - 1) % n];
  const State& next = cycle.samples[best + 1];
  return std::min({best_d, segment_distance(s, prev, cycle.samples[best]),
                   segment_distance(s, cycle.samples[best], next)});
}

Basin forward_basin(const ModelParams& params, const State& s, const LimitCycle& outer_cycle,
                    const LimitCycle* inner_cycle, const State& inner_point, double horizon,
                    const IntegratorConfig& cfg) {
  const double tol_outer = 1e-3 * outer_cycle.diameter();
  const double tol_inner = inner_cycle ? 1e-3 * inner_cycle->diameter() : tol_outer;
  Stepper stepper(frozen_field(params), 0.0, s, cfg, horizon);
  const double check_every = 0.5 * outer_cycle.period;
  double next_check = check_every;
  while (stepper.t() < horizon) {
    stepper.step(horizon);
    if (stepper.t() < next_check) continue;
    next_check = stepper.t() + check_every;
    const State& x = stepper.x();
    if (dist_to_set(x, outer_cycle) < tol_outer) return Basin::outer;
    const double d_in = inner_cycle ? dist_to_set(x, *inner_cycle) : distance(x, inner_point);
    if (d_in < tol_inner) return Basin::inner;
  }
  return Basin::band;
}

void write_bi_region_csv(std::ostream& out, const BIRegion& region) {
  out << "p1,p2,flag\n";
  for (std::size_t i = 0; i < region.p1.size(); ++i) {
    for (std::size_t j = 0; j < region.p2.size(); ++j) {
      out << fmt(region.p1[i]) << ',' << fmt(region.p2[j]) << ',' << bi_flag_name(region.at(i, j)) << '\n';
    }
  }
}

void write_arcs_csv(std::ostream& out, const UnstableArcSet& arcs) {
  out << "t_start,t_end,phi_start,phi_end\n";
  for (const auto& a : arcs.arcs) {
    out << fmt(a.t_start) << ',' << fmt(a.t_end) << ',' << fmt(a.phi_start) << ',' << fmt(a.phi_end) << '\n';
  }
}

}  // namespace rptip
