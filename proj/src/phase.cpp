#include "rptip/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rptip/csv.hpp"
#include "rptip/errors.hpp"

namespace rptip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t nearest_sample(const LimitCycle& c, const State& s) {
  std::size_t best = 0;
  double best_d = 1e300;
  for (std::size_t k = 0; k < c.intervals(); ++k) {
    const double dx = c.samples[k].x - s.x, dy = c.samples[k].y - s.y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

// Minimizes |gamma(t) - s|^2 over [a, b] by golden-section search.
double closest_time(const LimitCycle& c, const State& s, double a, double b) {
  auto d2 = [&](double t) {
    const State p = c.at_time(t);
    return (p.x - s.x) * (p.x - s.x) + (p.y - s.y) * (p.y - s.y);
  };
  constexpr double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = d2(x1), f2 = d2(x2);
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, c.period); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = d2(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = d2(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

PhasedCycle build_phased_cycle(const LimitCycle& cycle) {
  const std::size_t n = cycle.intervals();
  if (n < 4 || !(cycle.period > 0.0)) throw Error(ErrorKind::InvalidArgument, "cycle is not sampled");

  // Distinct local maxima of x with equal height leave the anchor undefined.
  std::vector<double> maxima;
  for (std::size_t k = 0; k < n; ++k) {
    const double xp = cycle.samples[(k + n - 1) % n].x;
    const double x = cycle.samples[k].x;
    const double xn = cycle.samples[(k + 1) % n].x;
    if (x >= xp && x > xn) maxima.push_back(x);
  }
  std::sort(maxima.begin(), maxima.end(), std::greater<>());
  if (maxima.size() >= 2 && maxima[0] - maxima[1] < 1e-8 * std::max(1.0, std::abs(maxima[0]))) {
    throw Error(ErrorKind::AmbiguousAnchor, "two maxima of x coincide");
  }

  std::size_t kmax = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (cycle.samples[k].x > cycle.samples[kmax].x) kmax = k;
  }
  // Quadratic refinement of the discrete argmax in time: root of the fitted xdot.
  const double h = cycle.dt();
  const double va = cycle.velocities[(kmax + n - 1) % n].x;
  const double vb = cycle.velocities[kmax].x;
  const double vc = cycle.velocities[(kmax + 1) % n].x;
  const double qa = 0.5 * (va - 2.0 * vb + vc), qb = 0.5 * (vc - va);
  double u = 0.0;
  if (std::abs(qa) > 1e-14 * (std::abs(qb) + std::abs(vb))) {
    const double disc = qb * qb - 4.0 * qa * vb;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double r1 = (-qb + sq) / (2.0 * qa), r2 = (-qb - sq) / (2.0 * qa);
      u = std::abs(r1) < std::abs(r2) ? r1 : r2;
    }
  } else if (qb != 0.0) {
    u = -vb / qb;
  }
  double offset = std::clamp(u, -1.0, 1.0) * h;
  const double t_anchor = static_cast<double>(kmax) * h + offset;

  PhasedCycle pc;
  pc.cycle = cycle;
  const bool aligned = kmax == 0 && std::abs(offset) < 1e-3 * h;
  if (!aligned) {
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = t_anchor + static_cast<double>(k) * h;
      pc.cycle.samples[k] = cycle.at_time(t);
    }
    for (std::size_t k = 0; k <= n; ++k) pc.cycle.velocities[k] = rhs(pc.cycle.samples[k], cycle.params);
    pc.cycle.samples[n] = pc.cycle.samples[0];
  }
  pc.cycle.anchor_index = 0;
  pc.anchor = pc.cycle.samples[0];
  pc.phases.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) pc.phases[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
  return pc;
}

namespace {

double nearest_time(const LimitCycle& c, const State& s, double* dist) {
  const std::size_t k = nearest_sample(c, s);
  const double h = c.dt();
  const double t_k = static_cast<double>(k) * h;
  double t = closest_time(c, s, t_k - h, t_k + h);
  *dist = distance(c.at_time(t), s);
  t = std::fmod(t, c.period);
  if (t < 0.0) t += c.period;
  if (c.period - t < 1e-12 * c.period) t = 0.0;
  return t;
}

}  // namespace

double time_of_point(const PhasedCycle& pc, const State& s) {
  double dist = 0.0;
  const double t = nearest_time(pc.cycle, s, &dist);
  if (dist > 1e-3 * pc.cycle.diameter()) throw Error(ErrorKind::NotOnCycle, "state is not on the cycle");
  return t;
}

double projected_phase(const PhasedCycle& pc, const State& s) {
  double dist = 0.0;
  return wrap_phase(kTwoPi * nearest_time(pc.cycle, s, &dist) / pc.cycle.period);
}

double phase_of_point(const PhasedCycle& pc, const State& s) {
  return wrap_phase(kTwoPi * time_of_point(pc, s) / pc.cycle.period);
}

State point_at_phase(const PhasedCycle& pc, double phi) {
  return pc.cycle.at_time(wrap_phase(phi) / kTwoPi * pc.cycle.period);
}

void write_phased_csv(std::ostream& out, const PhasedCycle& pc) {
  out << "index,x,y,phi\n";
  for (std::size_t k = 0; k < pc.cycle.intervals(); ++k) {
    out << k << ',' << fmt(pc.cycle.samples[k].x) << ',' << fmt(pc.cycle.samples[k].y) << ',' << fmt(pc.phases[k])
        << '\n';
  }
}

}  // namespace rptip
