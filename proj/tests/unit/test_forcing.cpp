#include <doctest.h>

#include <cmath>

#include "rptip/errors.hpp"
#include "rptip/forcing.hpp"

using namespace rptip;

TEST_CASE("monotone shift") {
  const InputShift s = InputShift::monotone(1.52, 1.0, 2.0, 10.0);
  CHECK(eval_shift(s, 10.0) == doctest::Approx(0.52));
  CHECK(eval_shift(s, 50.0) == doctest::Approx(0.52));
  CHECK(std::abs(eval_shift(s, -20.0) - 1.52) < 1e-12);
  double prev = eval_shift(s, -10.0);
  for (double t = -10.0; t < 30.0; t += 0.01) {
    const double v = eval_shift(s, t);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  const ShiftLimits l = limits(s);
  CHECK(l.past == 1.52);
  CHECK(l.future == doctest::Approx(0.52));
  CHECK(settled_time(s, 1e-8) == 10.0);
}

TEST_CASE("nonmonotone shift") {
  const InputShift s = InputShift::nonmonotone(1.52, 1.25, 0.5, 20.0);
  CHECK(eval_shift(s, 20.0) == doctest::Approx(0.27));
  CHECK(std::abs(eval_shift(s, 20.0 + 61.0) - 1.52) < 1e-12);
  CHECK(std::abs(eval_shift(s, 20.0 - 61.0) - 1.52) < 1e-12);
  for (double tau = 0.0; tau < 30.0; tau += 0.37) {
    CHECK(eval_shift(s, 20.0 + tau) == doctest::Approx(eval_shift(s, 20.0 - tau)).epsilon(1e-14));
  }
  CHECK(limits(s).past == limits(s).future);
  // sech(z) < 1e-8 once z > ln(2e8) ~ 19.1
  const double offset = settled_time(s, 1e-8) - 20.0;
  CHECK(offset * s.r == doctest::Approx(std::acosh(1.25 / 1e-8)).epsilon(1e-12));
  const InputShift unit = InputShift::nonmonotone(1.0, 1.0, 2.0, 0.0);
  CHECK(settled_time(unit, 1e-8) * unit.r == doctest::Approx(std::log(2e8)).epsilon(1e-8));
  CHECK(settled_time(unit, 1e-8) * unit.r == doctest::Approx(19.1).epsilon(0.01));
}

TEST_CASE("impulse shift") {
  const InputShift s = InputShift::impulse(0.3, 3.2, 27.0, 30.0, 60.0);
  CHECK(eval_shift(s, 45.0) == doctest::Approx(3.5).epsilon(1e-6));
  CHECK(limits(s).past == 0.3);
  CHECK(limits(s).future == 0.3);
  const double ts = settled_time(s, 1e-8);
  CHECK(ts > 60.0);
  CHECK(std::abs(eval_shift(s, ts + 1e-9) - 0.3) < 1e-8);
  // long plateau: a rising tanh step of height b
  const InputShift step = InputShift::impulse(0.3, 1.0, 0.7, 5.0, 1e9);
  for (double t = 0.0; t < 20.0; t += 0.5) {
    CHECK(eval_shift(step, t) == doctest::Approx(0.3 + 0.5 * (1.0 + std::tanh(0.7 * (t - 5.0)))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(InputShift::impulse(0.3, 1.0, 1.0, 60.0, 30.0).validate(), Error);
}

TEST_CASE("shift bounds") {
  for (const auto& s : {InputShift::monotone(1.0, 0.4, 3.0, 2.0), InputShift::nonmonotone(1.0, 0.4, 3.0, 2.0)}) {
    for (double t = -10.0; t < 10.0; t += 0.05) {
      CHECK(eval_shift(s, t) >= 0.6 - 1e-15);
      CHECK(eval_shift(s, t) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("zero magnitude gives a constant input") {
  const InputShift s = InputShift::monotone(1.52, 0.0, 4.0, 3.0);
  CHECK(limits(s).past == 1.52);
  CHECK(limits(s).future == 1.52);
  CHECK(eval_shift(s, 3.0) == 1.52);
}

TEST_CASE("shift kind names round-trip") {
  for (auto k : {ShiftKind::monotone, ShiftKind::nonmonotone, ShiftKind::impulse}) {
    CHECK(parse_shift_kind(shift_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_shift_kind("ramp"), Error);
}

TEST_CASE("glycolysis diagonal path") {
  GlyParams g;
  g.v = 0.3;
  g.sigma_i = 1.226;
  const ParameterPath path = ParameterPath::gly_diagonal(g, 1.226, 0.7);
  const auto p = std::get<GlyParams>(path.at(0.9702));
  CHECK(p.sigma_i == 0.9702);
  CHECK(p.v == doctest::Approx((-0.9702 + 3.11) / 6.86));
  CHECK(p.v == doctest::Approx(0.312).epsilon(0.002));
  CHECK(path.slaved());
  const ParameterPath vp = ParameterPath::vdp_vertical(VdpParams{1.52, 0.093, 0.0019, -0.03}, 1.52, 0.3);
  CHECK(std::get<VdpParams>(vp.at(0.3)).mu == 0.3);
  CHECK(std::get<VdpParams>(vp.at(0.3)).d == -0.03);
}
