#include "rptip/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "rptip/csv.hpp"
#include "rptip/errors.hpp"

namespace rptip {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafe = 0.9;
constexpr double kBeta = 0.04;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

double err_component(double e, double y0, double y1, const IntegratorConfig& cfg) {
  const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0), std::abs(y1));
  return e / sk;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be in (0, 1e-3]");
  if (!(abs_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "abs_tol must be > 0");
  if (!(max_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "max_step must be > 0");
  if (!(max_time > 0.0)) throw Error(ErrorKind::InvalidArgument, "max_time must be > 0");
}

State DenseStep::at(double t) const {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  return coef[0] + s * (coef[1] + s1 * (coef[2] + s * (coef[3] + s1 * coef[4])));
}

Trajectory::Trajectory(double t0, State x0) {
  times_.push_back(t0);
  states_.push_back(x0);
}

void Trajectory::push(const DenseStep& step, double t1, const State& x1) {
  steps_.push_back(step);
  times_.push_back(t1);
  states_.push_back(x1);
}

std::size_t Trajectory::step_index(double t) const {
  if (steps_.empty()) return 0;
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, steps_.size() - 1);
}

State Trajectory::at(double t) const {
  if (steps_.empty()) return states_.front();
  if (t <= times_.front()) return states_.front();
  if (t >= times_.back()) return states_.back();
  return steps_[step_index(t)].at(t);
}

Stepper::Stepper(Field f, double t0, State x0, const IntegratorConfig& cfg, double span)
    : f_(std::move(f)), cfg_(cfg), span_(std::abs(span)), t_(t0), x_(x0), x_prev_(x0) {
  cfg_.validate();
  if (!x0.finite()) throw Error(ErrorKind::InvalidArgument, "initial state is not finite");
  k1_ = eval(t_, x_);
  last_.t0 = t0;
  last_.h = 0.0;
  last_.coef = {x0, State{}, State{}, State{}, State{}};
}

void Stepper::set_windows(std::vector<std::pair<double, double>> windows, double cap) {
  windows_ = std::move(windows);
  window_cap_ = cap;
}

State Stepper::eval(double t, const State& s) { return f_(t, s); }

double Stepper::step_cap() const {
  double cap = cfg_.max_step;
  for (const auto& [lo, hi] : windows_) {
    if (t_ >= lo && t_ < hi) {
      cap = std::min(cap, window_cap_);
    } else if (t_ < lo) {
      cap = std::min(cap, std::max(lo - t_, window_cap_));
    }
  }
  return cap;
}

double Stepper::initial_step(double remaining) const {
  // Hairer's starting-step heuristic for order 5.
  double dnf = 0.0, dny = 0.0;
  const double sk_x = cfg_.abs_tol + cfg_.rel_tol * std::abs(x_.x);
  const double sk_y = cfg_.abs_tol + cfg_.rel_tol * std::abs(x_.y);
  dnf = (k1_.x / sk_x) * (k1_.x / sk_x) + (k1_.y / sk_y) * (k1_.y / sk_y);
  dny = (x_.x / sk_x) * (x_.x / sk_x) + (x_.y / sk_y) * (x_.y / sk_y);
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min({h, step_cap(), remaining});
  State x1 = x_ + h * k1_;
  State k2;
  try {
    k2 = f_(t_ + h, x1);
  } catch (const Error&) {
    return h * 1e-3;
  }
  const double ex = (k2.x - k1_.x) / sk_x, ey = (k2.y - k1_.y) / sk_y;
  const double der2 = std::sqrt(ex * ex + ey * ey) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, step_cap(), remaining});
}

void Stepper::step(double t_stop) {
  const double remaining = t_stop - t_;
  if (!(remaining > 0.0)) return;
  if (h_ <= 0.0) h_ = initial_step(remaining);
  const double h_min = 1e-12 * span_;
  std::optional<Error> domain_error;
  bool last_rejected = false;

  for (;;) {
    double h = std::min({h_, step_cap(), remaining});
    if (remaining - h < 1e-12 * std::max(1.0, std::abs(t_stop))) h = remaining;
    if (h < h_min && h < remaining) {
      if (domain_error) throw *domain_error;
      throw Error(ErrorKind::StepSizeUnderflow,
                  "step size " + std::to_string(h) + " below threshold at t=" + std::to_string(t_));
    }

    State k2, k3, k4, k5, k6, k7, x1;
    bool failed = false;
    try {
      const double t = t_;
      const State& y = x_;
      const State& k1 = k1_;
      k2 = f_(t + c2 * h, y + h * (a21 * k1));
      k3 = f_(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      k4 = f_(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = f_(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = f_(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      x1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      k7 = f_(t + h, x1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DomainEscape) throw;
      domain_error = e;
      failed = true;
    }
    if (!failed && !(x1.finite() && k7.finite())) failed = true;
    if (failed) {
      ++rejected_;
      h_ = 0.25 * h;
      last_rejected = true;
      continue;
    }

    const State err_vec = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double ex = err_component(err_vec.x, x_.x, x1.x, cfg_);
    const double ey = err_component(err_vec.y, x_.y, x1.y, cfg_);
    const double err = std::sqrt(0.5 * (ex * ex + ey * ey));

    // PI step-size control
    const double expo1 = 0.2 - kBeta * 0.75;
    const double fac11 = std::pow(std::max(err, 1e-300), expo1);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(facold_, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      facold_ = std::max(err, 1e-4);

      last_.t0 = t_;
      last_.h = h;
      const State ydiff = x1 - x_;
      const State bspl = h * k1_ - ydiff;
      last_.coef[0] = x_;
      last_.coef[1] = ydiff;
      last_.coef[2] = bspl;
      last_.coef[3] = ydiff - h * k7 - bspl;
      last_.coef[4] = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      x_prev_ = x_;
      x_ = x1;
      k1_ = k7;
      t_ = (h == remaining) ? t_stop : t_ + h;
      h_ = h_new;
      ++accepted_;
      return;
    }
    h_ = h / std::min(1.0 / kFacMin, fac11 / kSafe);
    ++rejected_;
    last_rejected = true;
  }
}

Trajectory integrate_field(const Field& f, State x0, double t0, double t1, const IntegratorConfig& cfg,
                           const std::vector<std::pair<double, double>>& windows, double window_cap) {
  if (!(t1 >= t0)) throw Error(ErrorKind::InvalidArgument, "t_span must be non-decreasing");
  cfg.validate();
  Trajectory traj(t0, x0);
  if (t1 == t0) return traj;
  if (t1 - t0 > cfg.max_time) throw Error(ErrorKind::InvalidArgument, "t_span exceeds max_time");
  Stepper stepper(f, t0, x0, cfg, t1 - t0);
  if (!windows.empty()) stepper.set_windows(windows, window_cap);
  while (stepper.t() < t1) {
    stepper.step(t1);
    traj.push(stepper.last_step(), stepper.t(), stepper.x());
  }
  return traj;
}

Field frozen_field(const ModelParams& params, double sign) {
  return [params, sign](double, const State& s) { return sign * rhs(s, params); };
}

Field forced_field(const ParameterPath& path, const InputShift& shift) {
  return [path, shift](double t, const State& s) { return rhs(s, path.at(eval_shift(shift, t))); };
}

Trajectory integrate_autonomous(const ModelParams& params, State x0, double t0, double t1,
                                const IntegratorConfig& cfg) {
  return integrate_field(frozen_field(params), x0, t0, t1, cfg);
}

Trajectory integrate_nonautonomous(const ParameterPath& path, const InputShift& shift, State x0, double t0,
                                   double t1, const IntegratorConfig& cfg) {
  shift.validate();
  return integrate_field(forced_field(path, shift), x0, t0, t1, cfg, fast_windows(shift), 0.1 / shift.r);
}

bool Section::triggered(double g_old, double g_new) const {
  switch (direction) {
    case 1: return g_old < 0.0 && g_new >= 0.0;
    case -1: return g_old > 0.0 && g_new <= 0.0;
    default: return (g_old < 0.0 && g_new >= 0.0) || (g_old > 0.0 && g_new <= 0.0);
  }
}

std::optional<Crossing> crossing_in_step(const DenseStep& step, const State& x0, const State& x1,
                                         const Section& section) {
  const double g0 = section.g(x0);
  const double g1 = section.g(x1);
  if (!section.triggered(g0, g1)) return std::nullopt;
  double lo = step.t0, hi = step.t0 + step.h;
  double glo = g0;
  const double tol = 1e-14 * std::max(1.0, std::abs(hi));
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = section.g(step.at(mid));
    if ((glo < 0.0) == (gm < 0.0) && gm != 0.0) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double tc = 0.5 * (lo + hi);
  const State sc = step.at(tc);
  if (section.admit && !section.admit(sc)) return std::nullopt;
  return Crossing{tc, sc};
}

std::vector<Crossing> find_section_crossings(const Trajectory& traj, const Section& section) {
  std::vector<Crossing> out;
  const auto& steps = traj.steps();
  const auto& states = traj.states();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (auto c = crossing_in_step(steps[i], states[i], states[i + 1], section)) out.push_back(*c);
  }
  if (out.empty()) throw Error(ErrorKind::NoCrossing, "no section crossing in the integration span");
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t stride) {
  if (stride == 0) stride = 1;
  out << "t,x,y\n";
  const auto& ts = traj.times();
  const auto& xs = traj.states();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i % stride != 0 && i + 1 != ts.size()) continue;
    out << fmt(ts[i]) << ',' << fmt(xs[i].x) << ',' << fmt(xs[i].y) << '\n';
  }
}

void write_trajectory_csv_uniform(std::ostream& out, const Trajectory& traj, double dt) {
  out << "t,x,y\n";
  const double t0 = traj.t_begin();
  const double t1 = traj.t_end();
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    const State s = traj.at(t);
    out << fmt(t) << ',' << fmt(s.x) << ',' << fmt(s.y) << '\n';
  }
}

}  // namespace rptip
