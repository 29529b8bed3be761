#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rptip/basin.hpp"
#include "rptip/errors.hpp"
#include "rptip/phase.hpp"
#include "helpers.hpp"

using namespace rptip;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const PhasedCycle& vdp_base() {
  static const PhasedCycle pc = build_phased_cycle(find_stable_cycle(testing::vdp_path_base(), {6.0, 0.0}));
  return pc;
}

double phase_gap(double a, double b) {
  const double d = std::abs(wrap_phase(a) - wrap_phase(b));
  return std::min(d, kTwoPi - d);
}

}  // namespace

TEST_CASE("circle phases") {
  const PhasedCycle pc = build_phased_cycle(testing::circle_cycle());
  CHECK(std::abs(pc.anchor.x - 1.0) < 1e-12);
  CHECK(std::abs(pc.anchor.y) < 1e-12);
  CHECK(phase_of_point(pc, {0.0, -1.0}) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-9));
  CHECK(phase_of_point(pc, pc.anchor) < 1e-9);
  const std::size_t n = pc.cycle.intervals();
  for (std::size_t k : {1ul, 100ul, 1024ul, 2047ul}) {
    CHECK(phase_of_point(pc, pc.cycle.samples[k]) == doctest::Approx(kTwoPi * k / n).epsilon(1e-9));
  }
  CHECK_THROWS_AS(phase_of_point(pc, {0.0, 0.0}), Error);
}

TEST_CASE("phase round trip") {
  const PhasedCycle& pc = vdp_base();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 10000; ++i) {
    const double phi = u(rng);
    CHECK(phase_gap(phase_of_point(pc, point_at_phase(pc, phi)), phi) < 1e-6);
  }
  CHECK(distance(point_at_phase(pc, 0.0), pc.anchor) < 1e-12);
}

TEST_CASE("vdp anchor lies on y = 0") {
  CHECK(std::abs(vdp_base().anchor.y) < 1e-4);
  CHECK(vdp_base().phases.front() == 0.0);
}

TEST_CASE("phase advances uniformly along the flow") {
  const PhasedCycle& pc = vdp_base();
  const double T = pc.cycle.period;
  for (double phi : {0.3, 2.0, 5.1}) {
    for (double tau : {0.1 * T, 0.55 * T, 0.9 * T}) {
      const State end = integrate_autonomous(pc.cycle.params, point_at_phase(pc, phi), 0.0, tau).back();
      CHECK(phase_gap(phase_of_point(pc, end), phi + kTwoPi * tau / T) < 1e-4);
    }
  }
}

TEST_CASE("points at phase stay on the orbit") {
  const PhasedCycle& pc = vdp_base();
  const double T = pc.cycle.period;
  const double tol = 1e-3 * pc.cycle.diameter();
  const Trajectory tr = integrate_autonomous(pc.cycle.params, point_at_phase(pc, 1.234), 0.0, 3.0 * T);
  for (int j = 0; j <= 24; ++j) {
    const double t = T * j / 8.0;
    CHECK(distance(tr.at(t), point_at_phase(pc, 1.234 + kTwoPi * t / T)) < tol);
  }
}

TEST_CASE("rebuilding reproduces the phases") {
  const PhasedCycle other = build_phased_cycle(find_stable_cycle(testing::vdp_path_base(), {6.0, 0.0}));
  const State probe = point_at_phase(vdp_base(), 2.5);
  CHECK(std::abs(phase_of_point(other, probe) - 2.5) < 1e-6);
  // (4, 1.89) is not on this cycle; its projected phase is reproducible
  const double a = projected_phase(vdp_base(), {4.0, 1.89});
  const double b = projected_phase(other, {4.0, 1.89});
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("glycolysis phases increase along the cycle") {
  const PhasedCycle pc = build_phased_cycle(find_stable_cycle(testing::gly_at(0.275, 1.226), {75.71, 2.76}));
  for (std::size_t k = 1; k < pc.phases.size(); ++k) CHECK(pc.phases[k] > pc.phases[k - 1]);
  std::ostringstream out;
  write_phased_csv(out, pc);
  CHECK(out.str().rfind("index,x,y,phi\n0,", 0) == 0);
}

TEST_CASE("equal maxima are ambiguous") {
  LimitCycle c = testing::circle_cycle(2048);
  // two lobes of equal height: x = cos 2t
  for (std::size_t k = 0; k <= 2048; ++k) {
    const double t = c.period * k / 2048.0;
    c.samples[k] = {std::cos(2.0 * t), std::sin(t)};
    c.velocities[k] = {-2.0 * std::sin(2.0 * t), std::cos(t)};
  }
  CHECK_THROWS_AS(build_phased_cycle(c), Error);
}
