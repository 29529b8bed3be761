#include "rptip/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "rptip/csv.hpp"
#include "rptip/errors.hpp"
#include "rptip/parallel.hpp"

namespace rptip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double scaled_norm(const State& f, const State& at) {
  return std::max(std::abs(f.x) / std::max(1.0, std::abs(at.x)), std::abs(f.y) / std::max(1.0, std::abs(at.y)));
}

Equilibrium make_equilibrium(const ModelParams& params, const State& loc) {
  Equilibrium eq;
  eq.location = loc;
  eq.eigenvalues = jacobian(params, loc).eigenvalues();
  eq.stability = eq.eigenvalues[0].real() < 0.0 ? Stability::stable : Stability::unstable;
  return eq;
}

double characteristic_period(ModelKind kind) { return kind == ModelKind::vdp ? kTwoPi : 300.0; }

double default_horizon(ModelKind kind) { return 50.0 * characteristic_period(kind); }

// Integrates from the section point with coordinate s until the next crossing
// in the flow direction. on_step sees every accepted step.
template <class OnStep>
std::optional<Return> return_impl(const ModelParams& params, const CycleSection& cs, State start,
                                  const IntegratorConfig& cfg, double sign, double horizon, OnStep&& on_step) {
  if (horizon <= 0.0) horizon = default_horizon(cs.kind);
  Section sec = cs.section;
  sec.direction = static_cast<int>(sign) * cs.section.direction;
  const double near_e0 = 1e-10 * cs.scale;
  try {
    Stepper stepper(frozen_field(params, sign), 0.0, start, cfg, horizon);
    double g_prev = sec.g(start);
    while (stepper.t() < horizon) {
      stepper.step(horizon);
      const DenseStep& step = stepper.last_step();
      on_step(step);
      const State& x1 = stepper.x();
      const double g_new = sec.g(x1);
      if (sec.triggered(g_prev, g_new)) {
        if (auto c = crossing_in_step(step, stepper.x_prev(), x1, sec)) {
          return Return{cs.coordinate(c->state), c->t, c->state};
        }
      }
      g_prev = g_new;
      if (distance(x1, cs.e0) < near_e0) return std::nullopt;
      if (norm(x1) > 1e3 * cs.scale) return std::nullopt;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainEscape || e.kind() == ErrorKind::StepSizeUnderflow) return std::nullopt;
    throw;
  }
  return std::nullopt;
}

// Outward displacement of one return; negative when there is none (the
// orbit falls into e0 or leaves).
double outward_displacement(const ModelParams& params, const CycleSection& cs, double s,
                            const IntegratorConfig& cfg) {
  auto r = poincare_return(params, cs, s, cfg);
  const double s_e = cs.coordinate(cs.e0);
  if (!r) return -std::abs(s - s_e);
  return cs.outward * (r->s - s);
}

// Illinois-modified regula falsi on a bracket with f(a) f(b) < 0.
template <class F>
double illinois(F&& f, double a, double b, double fa, double fb, double tol) {
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    const double c = (a * fb - b * fa) / (fb - fa);
    if (std::abs(b - a) < tol) return c;
    const double fc = f(c);
    if (fc == 0.0) return c;
    if ((fc < 0.0) == (fb < 0.0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
    if (std::abs(fc) < 1e-15 * std::max(1.0, std::abs(c))) return c;
  }
  return (a * fb - b * fa) / (fb - fa);
}

double outward_position(const CycleSection& cs, double s) { return cs.outward * (s - cs.coordinate(cs.e0)); }

}  // namespace

std::string_view stability_name(Stability s) { return s == Stability::stable ? "stable" : "unstable"; }

std::string_view region_name(RegionLabel r) {
  switch (r) {
    case RegionLabel::I: return "I";
    case RegionLabel::II: return "II";
    case RegionLabel::III: return "III";
    case RegionLabel::IV: return "IV";
    case RegionLabel::outside: return "outside";
  }
  return "outside";
}

State LimitCycle::at_time(double t) const {
  const double T = period;
  double tm = std::fmod(t, T);
  if (tm < 0.0) tm += T;
  const double h = dt();
  const std::size_t n = intervals();
  auto k = static_cast<std::size_t>(tm / h);
  if (k >= n) k = n - 1;
  const double u = (tm - static_cast<double>(k) * h) / h;
  const State& p0 = samples[k];
  const State& p1 = samples[k + 1];
  const State m0 = h * velocities[k];
  const State m1 = h * velocities[k + 1];
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
}

double LimitCycle::min_x() const {
  return std::min_element(samples.begin(), samples.end(), [](auto& a, auto& b) { return a.x < b.x; })->x;
}
double LimitCycle::max_x() const {
  return std::max_element(samples.begin(), samples.end(), [](auto& a, auto& b) { return a.x < b.x; })->x;
}
double LimitCycle::min_y() const {
  return std::min_element(samples.begin(), samples.end(), [](auto& a, auto& b) { return a.y < b.y; })->y;
}
double LimitCycle::max_y() const {
  return std::max_element(samples.begin(), samples.end(), [](auto& a, auto& b) { return a.y < b.y; })->y;
}
double LimitCycle::amplitude() const { return 0.5 * (max_x() - min_x()); }
double LimitCycle::diameter() const { return std::max(max_x() - min_x(), max_y() - min_y()); }
double LimitCycle::closure_error() const { return distance(samples.front(), samples.back()); }

Equilibrium find_equilibrium(const ModelParams& params, State seed) {
  const bool gly = kind_of(params) == ModelKind::gly;
  State x = seed;
  State f = rhs(x, params);
  for (int it = 0; it < 100; ++it) {
    if (scaled_norm(f, x) < 1e-12) return make_equilibrium(params, x);
    const Mat2 J = jacobian(params, x);
    if (J.det() == 0.0) break;
    const State dx = J.solve(f);
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
      State trial = x - lambda * dx;
      if (gly && (trial.x < 0.0 || trial.y < 0.0)) continue;
      const State ft = rhs(trial, params);
      if (!ft.finite()) continue;
      if (scaled_norm(ft, trial) < scaled_norm(f, x) || ls == 39) {
        x = trial;
        f = ft;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (scaled_norm(f, x) < 1e-10) return make_equilibrium(params, x);
  throw Error(ErrorKind::NoConvergence, "Newton iteration for the equilibrium did not converge");
}

Equilibrium principal_equilibrium(const ModelParams& params) {
  if (kind_of(params) == ModelKind::vdp) return make_equilibrium(params, {0.0, 0.0});
  const auto& g = std::get<GlyParams>(params);
  const double ye = g.q * g.v / g.k_s;
  const double yn = std::pow(ye, g.n);
  const double target = g.v + g.sigma_i * yn / (std::pow(g.K, g.n) + yn);
  // sigma_M Phi(x, ye) is increasing in x with supremum sigma_M
  if (!(target < g.sigma_M)) throw Error(ErrorKind::NoConvergence, "glycolysis has no interior steady state");
  auto excess = [&](double x) { return g.sigma_M * reaction_rate(x, ye, g.L) - target; };
  double lo = 0.0, hi = 1.0;
  while (excess(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return find_equilibrium(params, {0.5 * (lo + hi), ye});
}

State CycleSection::point(double s) const {
  return kind == ModelKind::vdp ? State{s, 0.0} : State{e0.x, s};
}

double CycleSection::coordinate(const State& p) const { return kind == ModelKind::vdp ? p.x : p.y; }

double CycleSection::s_min() const { return kind == ModelKind::vdp ? 1e-3 : 0.02; }

double CycleSection::s_max() const { return kind == ModelKind::vdp ? vdp_s_max : e0.y * (1.0 - 1e-4); }

CycleSection cycle_section(const ModelParams& params, const Equilibrium& e0) {
  CycleSection cs;
  cs.kind = kind_of(params);
  cs.e0 = e0.location;
  cs.scale = model_scale(cs.kind);
  if (cs.kind == ModelKind::vdp) {
    // The outer cycle sits just beyond the last zero of the damping
    // polynomial; further out the field is stiff.
    const auto& p = std::get<VdpParams>(params);
    double u_root = 0.0;
    double prev = 1.0;
    for (double u = 0.05; u < 400.0; u += 0.05) {
      const double damp = 1.0 - u + u * u * (p.alpha - p.beta * u);
      if (prev > 0.0 && damp <= 0.0) u_root = u;
      prev = damp;
    }
    cs.vdp_s_max = u_root > 0.0 ? std::min(12.0, 1.5 * std::sqrt(u_root) + 0.5) : 12.0;
    cs.section.g = [](const State& s) { return s.y; };
    cs.section.direction = -1;
    cs.section.admit = [](const State& s) { return s.x > 0.0; };
    cs.outward = 1;
  } else {
    const double xe = e0.location.x;
    const double ye = e0.location.y;
    cs.section.g = [xe](const State& s) { return s.x - xe; };
    cs.section.direction = 1;
    cs.section.admit = [ye](const State& s) { return s.y < ye; };
    cs.outward = -1;
  }
  return cs;
}

std::optional<Return> poincare_return(const ModelParams& params, const CycleSection& cs, double s,
                                      const IntegratorConfig& cfg, double sign, double horizon) {
  return return_impl(params, cs, cs.point(s), cfg, sign, horizon, [](const DenseStep&) {});
}

std::vector<CycleRoot> cycle_census(const ModelParams& params, const CycleSection& cs, const IntegratorConfig& cfg,
                                    std::size_t resolution) {
  resolution = std::max<std::size_t>(resolution, 8);
  const double lo = cs.s_min();
  const double hi = cs.s_max();
  const double s_e = cs.coordinate(cs.e0);
  // Outward coordinate u = outward * (s - s_e) > 0, gridded uniformly plus a
  // geometric refinement towards e0.
  const double u_lo = std::min(outward_position(cs, lo), outward_position(cs, hi));
  const double u_hi = std::max(outward_position(cs, lo), outward_position(cs, hi));
  std::vector<double> us;
  for (std::size_t k = 0; k < resolution; ++k) {
    us.push_back(u_lo + (u_hi - u_lo) * static_cast<double>(k) / static_cast<double>(resolution - 1));
  }
  const double step = (u_hi - u_lo) / static_cast<double>(resolution - 1);
  for (double u = 0.5 * (u_lo + step); u > u_lo && u > 1e-6 * cs.scale; u *= 0.5) us.push_back(u);
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());

  auto s_of = [&](double u) { return s_e + cs.outward * u; };
  auto D = [&](double u) { return outward_displacement(params, cs, s_of(u), cfg); };

  std::vector<double> ds(us.size());
  for (std::size_t k = 0; k < us.size(); ++k) ds[k] = D(us[k]);

  const double tol = 1e-11 * cs.scale;
  std::vector<CycleRoot> roots;
  auto add_root = [&](double a, double b, double fa, double fb) {
    const double u = illinois(D, a, b, fa, fb, tol);
    // D falls through zero outward at a stable orbit
    roots.push_back({s_of(u), fa > 0.0 ? Stability::stable : Stability::unstable});
  };

  for (std::size_t k = 0; k + 1 < us.size(); ++k) {
    if (ds[k] == 0.0) {
      roots.push_back({s_of(us[k]), (k > 0 && ds[k - 1] > 0.0) ? Stability::stable : Stability::unstable});
      continue;
    }
    if ((ds[k] < 0.0) != (ds[k + 1] < 0.0) && ds[k + 1] != 0.0) {
      add_root(us[k], us[k + 1], ds[k], ds[k + 1]);
      continue;
    }
    // Near-tangent pair: an interior extremum of D that keeps its sign on
    // the grid may still cross zero between grid points.
    if (k == 0) continue;
    const bool min_pos = ds[k] > 0.0 && ds[k] <= ds[k - 1] && ds[k] <= ds[k + 1];
    const bool max_neg = ds[k] < 0.0 && ds[k] >= ds[k - 1] && ds[k] >= ds[k + 1];
    if (!min_pos && !max_neg) continue;
    if ((ds[k - 1] < 0.0) != (ds[k] < 0.0)) continue;
    const double sgn = min_pos ? 1.0 : -1.0;
    double a = us[k - 1], b = us[k + 1];
    constexpr double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = sgn * D(c), fd = sgn * D(d);
    bool crossed = false;
    double u_ext = 0.0, f_ext = 0.0;
    for (int it = 0; it < 60 && b - a > 1e-9 * cs.scale; ++it) {
      if (fc < 0.0 || fd < 0.0) {
        crossed = true;
        u_ext = fc < fd ? c : d;
        f_ext = sgn * std::min(fc, fd);
        break;
      }
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = sgn * D(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = sgn * D(d);
      }
    }
    if (!crossed) continue;
    add_root(us[k - 1], u_ext, ds[k - 1], f_ext);
    add_root(u_ext, us[k + 1], f_ext, ds[k + 1]);
    ++k;
  }
  std::sort(roots.begin(), roots.end(),
            [&](const CycleRoot& a, const CycleRoot& b) { return outward_position(cs, a.s) < outward_position(cs, b.s); });
  return roots;
}

namespace {

// Secant polish of a fixed point of the return map.
double polish_fixed_point(const ModelParams& params, const CycleSection& cs, double s, double sign,
                          const IntegratorConfig& cfg) {
  auto delta = [&](double x) -> std::optional<double> {
    auto r = poincare_return(params, cs, x, cfg, sign);
    if (!r) return std::nullopt;
    return r->s - x;
  };
  auto f0 = delta(s);
  if (!f0) return s;
  double x0 = s, x1 = s + 1e-6 * cs.scale * (cs.outward > 0 ? 1.0 : -1.0);
  auto f1 = delta(x1);
  if (!f1) return s;
  double fa = *f0, fb = *f1;
  double best = std::abs(fa) < std::abs(fb) ? x0 : x1;
  double best_f = std::min(std::abs(fa), std::abs(fb));
  for (int it = 0; it < 30 && best_f > 1e-13 * cs.scale; ++it) {
    if (fb == fa) break;
    const double x2 = x1 - fb * (x1 - x0) / (fb - fa);
    if (std::abs(x2 - x1) > 0.1 * cs.scale) break;
    auto f2 = delta(x2);
    if (!f2) break;
    x0 = x1;
    fa = fb;
    x1 = x2;
    fb = *f2;
    if (std::abs(fb) < best_f) {
      best_f = std::abs(fb);
      best = x1;
    }
  }
  return best;
}

}  // namespace

LimitCycle cycle_through(const ModelParams& params, const CycleSection& cs, double s, Stability stability,
                         const CycleOptions& opt) {
  const double sign = stability == Stability::stable ? 1.0 : -1.0;
  const IntegratorConfig& cfg = opt.integrator;
  const double s_star = polish_fixed_point(params, cs, s, sign, cfg);

  Trajectory one(0.0, cs.point(s_star));
  State prev = cs.point(s_star);
  auto ret = return_impl(params, cs, cs.point(s_star), cfg, sign, 0.0, [&](const DenseStep& st) {
    const State x1 = st.at(st.t0 + st.h);
    one.push(st, st.t0 + st.h, x1);
    prev = x1;
  });
  if (!ret) throw Error(ErrorKind::NotPeriodic, "orbit through the section point does not return");
  const double T = ret->time;

  // Anchor: max-x point, bracketed on a fine grid and refined on xdot = 0.
  State anchor = cs.point(s_star);
  if (cs.kind == ModelKind::gly) {
    const std::size_t m = 8 * opt.samples;
    std::size_t best = 0;
    double best_x = -1e300;
    for (std::size_t k = 0; k < m; ++k) {
      const double x = one.at(T * static_cast<double>(k) / static_cast<double>(m)).x;
      if (x > best_x) {
        best_x = x;
        best = k;
      }
    }
    double a = T * (static_cast<double>(best) - 1.0) / static_cast<double>(m);
    double b = T * (static_cast<double>(best) + 1.0) / static_cast<double>(m);
    auto xdot = [&](double t) {
      double tt = t < 0.0 ? t + T : (t > T ? t - T : t);
      return sign * rhs(one.at(tt), params).x;
    };
    // Fit a parabola through the three grid values first.
    const double ta = a, tb = 0.5 * (a + b), tc = b;
    auto xv = [&](double t) { return one.at(t < 0.0 ? t + T : (t > T ? t - T : t)).x; };
    const double ya = xv(ta), yb = xv(tb), yc = xv(tc);
    const double denom = ya - 2 * yb + yc;
    double t_star = denom != 0.0 ? tb + 0.5 * (tb - ta) * (ya - yc) / denom : tb;
    if (xdot(a) > 0.0 && xdot(b) < 0.0) {
      for (int i = 0; i < 100 && b - a > 1e-13 * T; ++i) {
        const double mid = 0.5 * (a + b);
        (xdot(mid) > 0.0 ? a : b) = mid;
      }
      t_star = 0.5 * (a + b);
    }
    if (t_star < 0.0) t_star += T;
    if (t_star > T) t_star -= T;
    anchor = one.at(t_star);
  }

  const std::size_t n = opt.samples;
  Trajectory full = integrate_field(frozen_field(params, sign), anchor, 0.0, T, cfg);
  LimitCycle cyc;
  cyc.samples.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = T * static_cast<double>(j) / static_cast<double>(n);
    if (sign > 0.0) {
      cyc.samples[j] = j == 0 ? anchor : full.at(t);
    } else {
      // forward time t corresponds to reversed time T - t
      cyc.samples[j] = j == 0 ? anchor : full.at(T - t);
    }
  }
  cyc.velocities.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) cyc.velocities[j] = rhs(cyc.samples[j], params);
  cyc.period = T;
  cyc.angular_frequency = kTwoPi / T;
  cyc.stability = stability;
  cyc.anchor_index = 0;
  cyc.params = params;
  return cyc;
}

namespace {

// Iterates the return map from the seed; once consecutive returns agree to
// 1e-5 of the model size, the fixed point is polished by secant iteration.
double converge_section_point(const ModelParams& params, const CycleSection& cs, const Equilibrium& e0, State seed,
                              const CycleOptions& opt, double sign) {
  const double s_e = cs.coordinate(e0.location);
  const bool e0_attracts = (e0.stability == Stability::stable) == (sign > 0.0);
  auto fail_to_e0 = [&]() {
    if (sign > 0.0) throw Error(ErrorKind::NotPeriodic, "trajectory converges to the equilibrium");
    throw Error(ErrorKind::WrongBasin, "reversed flow converges to the equilibrium; seed lies inside");
  };
  auto first = return_impl(params, cs, seed, opt.integrator, sign, 0.0, [](const DenseStep&) {});
  if (!first) {
    if (e0_attracts) fail_to_e0();
    throw Error(ErrorKind::NotPeriodic, "returns to the section cease");
  }
  double s = first->s;
  for (std::size_t k = 0; k < opt.max_returns; ++k) {
    auto r = poincare_return(params, cs, s, opt.integrator, sign);
    if (!r) {
      if (e0_attracts) fail_to_e0();
      throw Error(ErrorKind::NotPeriodic, "returns to the section cease");
    }
    const double diff = std::abs(r->s - s);
    const bool inward = std::abs(r->s - s_e) < std::abs(s - s_e);
    s = r->s;
    if (e0_attracts && inward && std::abs(s - s_e) < 1e-3 * cs.scale) fail_to_e0();
    if (diff < std::max(opt.return_tol * cs.scale, 1e-5 * cs.scale)) {
      const double s_star = polish_fixed_point(params, cs, s, sign, opt.integrator);
      if (std::abs(s_star - s_e) < 1e-3 * cs.scale) fail_to_e0();
      return s_star;
    }
  }
  throw Error(ErrorKind::NotPeriodic, "return map did not converge within the return budget");
}

LimitCycle converge_cycle(const ModelParams& params, State seed, const CycleOptions& opt, double sign) {
  const Equilibrium e0 = principal_equilibrium(params);
  const CycleSection cs = cycle_section(params, e0);
  const double s = converge_section_point(params, cs, e0, seed, opt, sign);
  return cycle_through(params, cs, s, sign > 0.0 ? Stability::stable : Stability::unstable, opt);
}

}  // namespace

LimitCycle find_stable_cycle(const ModelParams& params, State seed, const CycleOptions& opt) {
  return converge_cycle(params, seed, opt, 1.0);
}

LimitCycle find_unstable_cycle(const ModelParams& params, State seed, const CycleOptions& opt) {
  return converge_cycle(params, seed, opt, -1.0);
}

std::vector<double> amplitude_roots(const VdpParams& p) {
  // polynomial in u = A^2: c0 + c1 u + c2 u^2 + c3 u^3
  const double c0 = p.mu - p.d;
  const double c1 = -p.mu / 4.0;
  const double c2 = p.mu * p.alpha / 8.0;
  const double c3 = -5.0 * p.mu * p.beta / 64.0;
  auto f = [&](double A) {
    const double u = A * A;
    return c0 + u * (c1 + u * (c2 + u * c3));
  };
  double lead = c3, bound = 0.0;
  if (c3 != 0.0) {
    bound = 1.0 + std::max({std::abs(c0 / lead), std::abs(c1 / lead), std::abs(c2 / lead)});
  } else if (c2 != 0.0) {
    bound = 1.0 + std::max(std::abs(c0 / c2), std::abs(c1 / c2));
  } else if (c1 != 0.0) {
    bound = 1.0 + std::abs(c0 / c1);
  } else {
    return {};
  }
  const double a_max = std::sqrt(bound);
  const std::size_t m = 200000;
  std::vector<double> roots;
  double a_prev = 0.0, f_prev = f(0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    const double a = a_max * static_cast<double>(k) / static_cast<double>(m);
    const double fa = f(a);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if ((f_prev < 0.0) != (fa < 0.0) && f_prev != 0.0) {
      double lo = a_prev, hi = a;
      for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) < 0.0) == (f_prev < 0.0) ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a_prev = a;
    f_prev = fa;
  }
  return roots;
}

RegionLabel label_from_census(ModelKind kind, const std::vector<CycleRoot>& census, bool e0_stable,
                              double single_cycle_amplitude) {
  const auto stable = std::count_if(census.begin(), census.end(),
                                    [](const CycleRoot& c) { return c.stability == Stability::stable; });
  if (stable >= 2) return RegionLabel::I;
  if (stable == 1) {
    if (e0_stable) return RegionLabel::II;
    if (kind == ModelKind::vdp) {
      return single_cycle_amplitude < kVdpLargeAmplitude ? RegionLabel::II : RegionLabel::IV;
    }
    return RegionLabel::IV;
  }
  return e0_stable ? RegionLabel::III : RegionLabel::outside;
}

RegionLabel classify_region(const ModelParams& params, const CycleOptions& opt) {
  const Equilibrium e0 = principal_equilibrium(params);
  const CycleSection cs = cycle_section(params, e0);
  const ModelKind kind = kind_of(params);
  const double D = model_scale(kind);
  struct Found {
    double s;
    double amplitude;
  };
  std::vector<Found> cycles;
  bool reached_e0 = false;
  const double radii[] = {0.3, 1.2, 2.0};
  for (int ring = 0; ring < 3; ++ring) {
    const double radius = radii[ring] * D;
    for (int k = 0; k < 6; ++k) {
      const double ang = kTwoPi * (static_cast<double>(k) + 0.5 * ring) / 6.0;
      State seed{e0.location.x + radius * std::cos(ang), e0.location.y + radius * std::sin(ang)};
      if (kind == ModelKind::gly) {
        seed.x = std::max(seed.x, 0.0);
        seed.y = std::max(seed.y, 0.0);
      }
      try {
        const double key = converge_section_point(params, cs, e0, seed, opt, 1.0);
        bool known = false;
        for (const auto& f : cycles) {
          if (std::abs(f.s - key) < 1e-4 * D) known = true;
        }
        if (!known) {
          const CycleSummary sum = summarize_cycle(params, cs, key, Stability::stable, opt.integrator);
          cycles.push_back({key, 0.5 * (sum.max_x - sum.min_x)});
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotPeriodic) throw;
        if (e0.stability != Stability::stable) {
          throw Error(ErrorKind::Ambiguous, "seed neither reaches a cycle nor a stable equilibrium");
        }
        reached_e0 = true;
      }
    }
  }
  std::vector<CycleRoot> census;
  for (const auto& f : cycles) census.push_back({f.s, Stability::stable});
  const bool e0_stable = e0.stability == Stability::stable;
  if (reached_e0 && !e0_stable) throw Error(ErrorKind::Ambiguous, "inconsistent attractor identification");
  return label_from_census(kind, census, e0_stable, cycles.size() == 1 ? cycles[0].amplitude : 0.0);
}

CycleSummary summarize_cycle(const ModelParams& params, const CycleSection& cs, double s, Stability stability,
                             const IntegratorConfig& cfg) {
  const double sign = stability == Stability::stable ? 1.0 : -1.0;
  CycleSummary out{s, stability, 0.0, 1e300, -1e300, 1e300, -1e300};
  const State start = cs.point(s);
  out.min_x = out.max_x = start.x;
  out.min_y = out.max_y = start.y;
  auto ret = return_impl(params, cs, start, cfg, sign, 0.0, [&](const DenseStep& st) {
    for (int i = 1; i <= 8; ++i) {
      const State p = st.at(st.t0 + st.h * i / 8.0);
      out.min_x = std::min(out.min_x, p.x);
      out.max_x = std::max(out.max_x, p.x);
      out.min_y = std::min(out.min_y, p.y);
      out.max_y = std::max(out.max_y, p.y);
    }
  });
  if (!ret) throw Error(ErrorKind::NotPeriodic, "orbit through the section point does not return");
  out.period = ret->time;
  return out;
}

double get_axis(const ModelParams& p, ScanAxis axis) {
  if (axis == ScanAxis::input) return input_parameter(p);
  if (const auto* v = std::get_if<VdpParams>(&p)) return v->d;
  return std::get<GlyParams>(p).v;
}

ModelParams set_axis(ModelParams p, ScanAxis axis, double value) {
  if (axis == ScanAxis::input) return with_input_parameter(std::move(p), value);
  if (auto* v = std::get_if<VdpParams>(&p)) {
    v->d = value;
  } else {
    std::get<GlyParams>(p).v = value;
  }
  return p;
}

namespace {

struct CellCensus {
  bool ok = false;
  bool e0_stable = false;
  double e0_re = 0.0;
  State e0;
  std::vector<CycleRoot> roots;
  std::vector<CycleSummary> summaries;
  RegionLabel label = RegionLabel::outside;
};

CellCensus census_at(const ModelParams& params, const ScanOptions& opt, bool with_summaries) {
  CellCensus c;
  try {
    const Equilibrium e0 = principal_equilibrium(params);
    const CycleSection cs = cycle_section(params, e0);
    c.e0 = e0.location;
    c.e0_stable = e0.stability == Stability::stable;
    c.e0_re = e0.max_real_part();
    c.roots = cycle_census(params, cs, opt.integrator, opt.census_resolution);
    double amp = 0.0;
    for (const auto& r : c.roots) {
      if (!with_summaries && r.stability != Stability::stable) continue;
      try {
        CycleSummary s = summarize_cycle(params, cs, r.s, r.stability, opt.integrator);
        if (r.stability == Stability::stable) amp = 0.5 * (s.max_x - s.min_x);
        c.summaries.push_back(s);
      } catch (const Error&) {
      }
    }
    const auto n_stable = std::count_if(c.roots.begin(), c.roots.end(),
                                        [](const CycleRoot& r) { return r.stability == Stability::stable; });
    c.label = label_from_census(kind_of(params), c.roots, c.e0_stable, n_stable == 1 ? amp : 0.0);
    c.ok = true;
  } catch (const Error&) {
    c.ok = false;
  }
  return c;
}

enum class FoldKind { none, l1, l2 };

// Classifies a change of cycle count by 2 between two neighbouring censuses:
// l1 when the innermost pair appears or vanishes, l2 for the outermost pair.
FoldKind fold_between(const CellCensus& a, const CellCensus& b, int outward) {
  const CellCensus* more = a.roots.size() > b.roots.size() ? &a : &b;
  const CellCensus* fewer = more == &a ? &b : &a;
  if (more->roots.size() != fewer->roots.size() + 2) return FoldKind::none;
  if (fewer->roots.empty()) {
    // both cycles of the pair vanish; the pair collides on the outer side
    return FoldKind::l2;
  }
  const double pos_inner = outward * more->roots.front().s;
  const double pos_outer = outward * more->roots.back().s;
  const double survivor = outward * fewer->roots.back().s;
  return std::abs(survivor - pos_outer) < std::abs(survivor - pos_inner) ? FoldKind::l1 : FoldKind::l2;
}

template <class Pred>
double bisect_predicate(double lo, double hi, bool pred_lo, Pred&& pred, double tol) {
  for (int i = 0; i < 100 && std::abs(hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid) == pred_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string branch_name(ModelKind kind, const CycleSummary& s, std::size_t n_stable, bool largest_stable) {
  if (s.stability == Stability::unstable) return "theta";
  if (n_stable >= 2) return largest_stable ? "gamma1" : "gamma2";
  const double amp = 0.5 * (s.max_x - s.min_x);
  const double thr = kind == ModelKind::vdp ? kVdpLargeAmplitude : kGlyLargeAmplitude;
  return amp >= thr ? "gamma1" : "gamma2";
}

}  // namespace

OneParamScan scan_one_param(const ModelParams& fixed, ScanAxis axis, double lo, double hi, std::size_t points,
                            const ScanOptions& opt) {
  if (points == 0) throw Error(ErrorKind::InvalidArgument, "scan needs at least one point");
  if (lo == hi) points = 1;
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  std::vector<CellCensus> cells(points);
  parallel_for(points, opt.workers,
               [&](std::size_t k) { cells[k] = census_at(set_axis(fixed, axis, grid[k]), opt, true); });

  OneParamScan out;
  const ModelKind kind = kind_of(fixed);
  for (std::size_t k = 0; k < points; ++k) {
    const CellCensus& c = cells[k];
    if (!c.ok) continue;
    out.rows.push_back({grid[k], "e0_x", c.e0.x});
    out.rows.push_back({grid[k], "e0_y", c.e0.y});
    out.rows.push_back({grid[k], "e0_stable", c.e0_stable ? 1.0 : 0.0});
    std::size_t n_stable = 0;
    double best_amp = -1.0;
    for (const auto& s : c.summaries) {
      if (s.stability == Stability::stable) {
        ++n_stable;
        best_amp = std::max(best_amp, s.max_x - s.min_x);
      }
    }
    for (const auto& s : c.summaries) {
      const bool largest = s.stability == Stability::stable && (s.max_x - s.min_x) == best_amp;
      const std::string name = branch_name(kind, s, n_stable, largest);
      out.rows.push_back({grid[k], name + "_max", s.max_x});
      out.rows.push_back({grid[k], name + "_min", s.min_x});
      out.rows.push_back({grid[k], name + "_period", s.period});
    }
  }

  const int outward = kind == ModelKind::vdp ? 1 : -1;
  for (std::size_t k = 0; k + 1 < points; ++k) {
    const CellCensus& a = cells[k];
    const CellCensus& b = cells[k + 1];
    if (!a.ok || !b.ok) continue;
    const FoldKind fk = fold_between(a, b, outward);
    if (fk == FoldKind::none) continue;
    const std::size_t n_a = a.roots.size();
    auto pred = [&](double p) {
      CellCensus c = census_at(set_axis(fixed, axis, p), opt, false);
      return c.ok && c.roots.size() == n_a;
    };
    const double at = bisect_predicate(grid[k], grid[k + 1], true, pred, opt.refine_tol);
    (fk == FoldKind::l1 ? out.folds_l1 : out.folds_l2).push_back(at);
  }
  for (double f : out.folds_l1) out.rows.push_back({f, "F_l1", f});
  for (double f : out.folds_l2) out.rows.push_back({f, "F_l2", f});
  return out;
}

void write_branch_csv(std::ostream& out, const OneParamScan& scan) {
  out << "param,branch,value\n";
  for (const auto& r : scan.rows) out << fmt(r.param) << ',' << r.branch << ',' << fmt(r.value) << '\n';
}

namespace {

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b, Point2* proj) {
  const double vx = b.p1 - a.p1, vy = b.p2 - a.p2;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((p.p1 - a.p1) * vx + (p.p2 - a.p2) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Point2 q{a.p1 + t * vx, a.p2 + t * vy};
  if (proj) *proj = q;
  return std::hypot(p.p1 - q.p1, p.p2 - q.p2);
}

double point_polyline_distance(const Point2& p, const std::vector<Point2>& line, Point2* proj) {
  if (line.size() == 1) {
    if (proj) *proj = line[0];
    return std::hypot(p.p1 - line[0].p1, p.p2 - line[0].p2);
  }
  double best = 1e300;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    Point2 q{};
    const double d = point_segment_distance(p, line[i], line[i + 1], &q);
    if (d < best) {
      best = d;
      if (proj) *proj = q;
    }
  }
  return best;
}

}  // namespace

double first_lyapunov_coefficient(const ModelParams& params) {
  const State e = principal_equilibrium(params).location;
  const Mat2 J = jacobian(params, e);
  const double half_tr = 0.5 * J.trace();
  const double w2 = J.det() - half_tr * half_tr;
  if (!(w2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double om = std::sqrt(w2);
  // Columns (0, om) and (a12, -(a11 - tr/2)) bring the trace-free Jacobian to [[0, -om], [om, 0]].
  double p12 = J.a12, p21 = om, p22 = -(J.a11 - half_tr);
  const double m = std::max({std::abs(p12), std::abs(p21), std::abs(p22)});
  p12 /= m;
  p21 /= m;
  p22 /= m;
  const double det = -p12 * p21;
  const double h = 1e-3 * std::max(1.0, std::hypot(e.x, e.y));
  auto F = [&](int i, int j) {
    const double u = i * h, w = j * h;
    const State r = rhs(State{e.x + p12 * w, e.y + p21 * u + p22 * w}, params);
    return State{(p22 * r.x - p12 * r.y) / det, -p21 * r.x / det};
  };
  const double h2 = h * h, h3 = h2 * h;
  const State f0 = F(0, 0);
  const State fxx = (F(1, 0) - 2.0 * f0 + F(-1, 0)) * (1.0 / h2);
  const State fyy = (F(0, 1) - 2.0 * f0 + F(0, -1)) * (1.0 / h2);
  const State fxy = (F(1, 1) - F(1, -1) - F(-1, 1) + F(-1, -1)) * (1.0 / (4.0 * h2));
  const State fxxx = (F(2, 0) - 2.0 * F(1, 0) + 2.0 * F(-1, 0) - F(-2, 0)) * (1.0 / (2.0 * h3));
  const State fyyy = (F(0, 2) - 2.0 * F(0, 1) + 2.0 * F(0, -1) - F(0, -2)) * (1.0 / (2.0 * h3));
  const State fxyy =
      ((F(1, 1) - 2.0 * F(1, 0) + F(1, -1)) - (F(-1, 1) - 2.0 * F(-1, 0) + F(-1, -1))) * (1.0 / (2.0 * h3));
  const State fxxy =
      ((F(1, 1) - 2.0 * F(0, 1) + F(-1, 1)) - (F(1, -1) - 2.0 * F(0, -1) + F(-1, -1))) * (1.0 / (2.0 * h3));
  return (fxxx.x + fxyy.x + fxxy.y + fyyy.y) / 16.0 +
         (fxy.x * (fxx.x + fyy.x) - fxy.y * (fxx.y + fyy.y) - fxx.x * fxx.y + fyy.x * fyy.y) / (16.0 * om);
}

TwoParamScan scan_two_param(const ModelParams& base, double p1_lo, double p1_hi, std::size_t n1, double p2_lo,
                            double p2_hi, std::size_t n2, const ScanOptions& opt) {
  if (n1 == 0 || n2 == 0) throw Error(ErrorKind::InvalidArgument, "scan grid must be non-empty");
  TwoParamScan out;
  auto axis_grid = [](double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
      g[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return g;
  };
  out.p1 = axis_grid(p1_lo, p1_hi, n1);
  out.p2 = axis_grid(p2_lo, p2_hi, n2);
  auto params_at = [&](double a, double b) {
    return set_axis(set_axis(base, ScanAxis::secondary, a), ScanAxis::input, b);
  };

  std::vector<CellCensus> cells(n1 * n2);
  parallel_for(cells.size(), opt.workers, [&](std::size_t idx) {
    cells[idx] = census_at(params_at(out.p1[idx / n2], out.p2[idx % n2]), opt, false);
  });
  out.labels.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out.labels[i] = cells[i].label;

  const ModelKind kind = kind_of(base);
  const int outward = kind == ModelKind::vdp ? 1 : -1;

  struct Edge {
    std::size_t a, b;
    bool along_p2;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (j + 1 < n2) edges.push_back({i * n2 + j, i * n2 + j + 1, true});
      if (i + 1 < n1) edges.push_back({i * n2 + j, (i + 1) * n2 + j, false});
    }
  }
  struct EdgeResult {
    std::optional<Point2> hopf;
    std::optional<Point2> fold;
    FoldKind fold_kind = FoldKind::none;
  };
  std::vector<EdgeResult> results(edges.size());
  parallel_for(edges.size(), opt.workers, [&](std::size_t e) {
    const Edge& ed = edges[e];
    const CellCensus& ca = cells[ed.a];
    const CellCensus& cb = cells[ed.b];
    if (!ca.ok || !cb.ok) return;
    const double a1 = out.p1[ed.a / n2], a2 = out.p2[ed.a % n2];
    const double b1 = out.p1[ed.b / n2], b2 = out.p2[ed.b % n2];
    auto point_at = [&](double t) { return Point2{a1 + t * (b1 - a1), a2 + t * (b2 - a2)}; };
    const double span = ed.along_p2 ? std::abs(b2 - a2) : std::abs(b1 - a1);
    const double ttol = opt.refine_tol / std::max(span, 1e-300);
    EdgeResult r;
    if ((ca.e0_re < 0.0) != (cb.e0_re < 0.0)) {
      auto pred = [&](double t) {
        const Point2 p = point_at(t);
        return principal_equilibrium(params_at(p.p1, p.p2)).max_real_part() < 0.0;
      };
      r.hopf = point_at(bisect_predicate(0.0, 1.0, ca.e0_re < 0.0, pred, ttol));
    }
    const FoldKind fk = fold_between(ca, cb, outward);
    if (fk != FoldKind::none) {
      const std::size_t n_a = ca.roots.size();
      auto pred = [&](double t) {
        const Point2 p = point_at(t);
        CellCensus c = census_at(params_at(p.p1, p.p2), opt, false);
        return c.ok && c.roots.size() == n_a;
      };
      r.fold = point_at(bisect_predicate(0.0, 1.0, true, pred, ttol));
      r.fold_kind = fk;
    }
    results[e] = r;
  });
  for (const auto& r : results) {
    if (r.hopf) out.hopf.push_back(*r.hopf);
    if (r.fold) (r.fold_kind == FoldKind::l1 ? out.fold_l1 : out.fold_l2).push_back(*r.fold);
  }
  auto by_p1 = [](const Point2& a, const Point2& b) { return a.p1 < b.p1 || (a.p1 == b.p1 && a.p2 < b.p2); };
  std::sort(out.hopf.begin(), out.hopf.end(), by_p1);
  std::sort(out.fold_l1.begin(), out.fold_l1.end(), by_p1);
  std::sort(out.fold_l2.begin(), out.fold_l2.end(), by_p1);

  // GH: sign change of the first Lyapunov coefficient between neighbouring
  // points of H, refined on H itself.
  const double cell = std::hypot(n1 > 1 ? out.p1[1] - out.p1[0] : 0.0, n2 > 1 ? out.p2[1] - out.p2[0] : 0.0);
  auto e0_re = [&](double a, double b) { return principal_equilibrium(params_at(a, b)).max_real_part(); };
  // Point of H on the input-axis line through p1 = a, near b.
  auto on_hopf = [&](double a, double b) -> std::optional<Point2> {
    const double dp2 = n2 > 1 ? std::abs(out.p2[1] - out.p2[0]) : 1e-2;
    double lo = b - 2.0 * dp2, hi = b + 2.0 * dp2;
    const bool neg_lo = e0_re(a, lo) < 0.0;
    if (neg_lo == (e0_re(a, hi) < 0.0)) return std::nullopt;
    const double t = bisect_predicate(lo, hi, neg_lo, [&](double x) { return e0_re(a, x) < 0.0; }, opt.refine_tol);
    return Point2{a, t};
  };
  for (std::size_t k = 0; !out.gh && k + 1 < out.hopf.size(); ++k) {
    const Point2 a = out.hopf[k], b = out.hopf[k + 1];
    if (std::hypot(b.p1 - a.p1, b.p2 - a.p2) > 3.0 * cell) continue;
    const double la = first_lyapunov_coefficient(params_at(a.p1, a.p2));
    const double lb = first_lyapunov_coefficient(params_at(b.p1, b.p2));
    if (!std::isfinite(la) || !std::isfinite(lb) || (la < 0.0) == (lb < 0.0)) continue;
    double lo = 0.0, hi = 1.0;
    Point2 at = a;
    bool ok = a.p1 != b.p1;
    for (int it = 0; ok && it < 60 && std::abs(hi - lo) * std::abs(b.p1 - a.p1) > opt.refine_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto h = on_hopf(a.p1 + mid * (b.p1 - a.p1), a.p2 + mid * (b.p2 - a.p2));
      if (!h) {
        ok = false;
        break;
      }
      at = *h;
      ((first_lyapunov_coefficient(params_at(h->p1, h->p2)) < 0.0) == (la < 0.0) ? lo : hi) = mid;
    }
    if (ok) {
      const auto h = on_hopf(a.p1 + 0.5 * (lo + hi) * (b.p1 - a.p1), a.p2 + 0.5 * (lo + hi) * (b.p2 - a.p2));
      out.gh = h ? *h : at;
    }
  }

  if (!out.gh && !out.hopf.empty() && !out.fold_l1.empty()) {
    double best = 1e300;
    Point2 gh{};
    for (const auto& f : out.fold_l1) {
      Point2 q{};
      const double d = point_polyline_distance(f, out.hopf, &q);
      if (d < best) {
        best = d;
        gh = {0.5 * (f.p1 + q.p1), 0.5 * (f.p2 + q.p2)};
      }
    }
    out.gh = gh;
  }
  return out;
}

void write_region_csv(std::ostream& out, const TwoParamScan& scan) {
  out << "p1,p2,region\n";
  for (std::size_t i = 0; i < scan.p1.size(); ++i) {
    for (std::size_t j = 0; j < scan.p2.size(); ++j) {
      out << fmt(scan.p1[i]) << ',' << fmt(scan.p2[j]) << ',' << region_name(scan.at(i, j)) << '\n';
    }
  }
}

void write_polyline_csv(std::ostream& out, const std::vector<Point2>& line) {
  out << "p1,p2\n";
  for (const auto& p : line) out << fmt(p.p1) << ',' << fmt(p.p2) << '\n';
}

}  // namespace rptip
