#include <doctest.h>

#include "rptip/config.hpp"
#include "rptip/errors.hpp"

using namespace rptip;

TEST_CASE("sections and presets") {
  const RunConfig c = RunConfig::from_string(
      "[model]\nkind = vdp\npreset = vdp_a093\n[params]\nmu = 1.4\n[shift]\nkind = monotone\nb = 1\nr = 4\n");
  const auto p = std::get<VdpParams>(c.params());
  CHECK(p.alpha == 0.093);
  CHECK(p.mu == 1.4);
  CHECK(p.d == -0.03);
  const InputShift s = c.shift(7.0);
  CHECK(s.t_c == doctest::Approx(28.0));
  CHECK(s.level == 1.4);
  CHECK(c.side() == BaseSide::outer);
}

TEST_CASE("unknown keys are rejected with their name") {
  try {
    RunConfig::from_string("[model]\nkind = vdp\ncolour = red\n");
    FAIL("accepted an unknown key");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("model.colour") != std::string::npos);
  }
  RunConfig c;
  CHECK_THROWS_AS(c.set("grid.nonsense=1"), ConfigError);
  CHECK_THROWS_AS(c.set("no equals sign"), ConfigError);
}

TEST_CASE("overrides and typed access") {
  RunConfig c = RunConfig::from_string("[model]\nkind = gly\n[grid]\ntc_list = 1, 2.5,4\n");
  c.set("params.sigma_i = 0.9");
  CHECK(std::get<GlyParams>(c.params()).sigma_i == 0.9);
  CHECK(c.list("grid.tc_list") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(c.side() == BaseSide::inner);
  c.set("params.n", "2.5");
  CHECK_THROWS_AS(c.params(), ConfigError);
  c.set("params.n", "2");
  CHECK_THROWS_AS(c.params(), ConfigError);
  c.set("params.n", "5");
  c.set("params.mu", "1");
  CHECK_THROWS_AS(c.params(), ConfigError);
}

TEST_CASE("bad values") {
  RunConfig c = RunConfig::from_string("[model]\nkind = vdp\n[integrator]\nrel_tol = fast\n");
  CHECK_THROWS_AS(c.integrator(), ConfigError);
  c.set("integrator.rel_tol", "0.1");
  CHECK_THROWS_AS(c.integrator(), ConfigError);
  c.set("model.kind", "lorenz");
  CHECK_THROWS_AS(c.model(), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_file("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("impulse series list") {
  RunConfig c = RunConfig::from_string(
      "[model]\nkind = vdp\npreset = vdp_a0938\n[path]\np_plus = 3.5\np_minus = 0.3\n"
      "[shift]\nkind = impulse\nb = 3.2\nr = 27\nt_c1 = 30\nt_c2 = 60\n"
      "[initial]\nlist = 6.45 -0.858; 5.77 -2.372\n");
  const auto xs = c.initial_list();
  REQUIRE(xs.size() == 2);
  CHECK(xs[1].y == -2.372);
  const InputShift s = c.shift(0.0);
  CHECK(s.kind == ShiftKind::impulse);
  CHECK(s.level == 0.3);
  c.set("initial.list", "1 2 3");
  CHECK_THROWS_AS(c.initial_list(), ConfigError);
}

TEST_CASE("model presets") {
  CHECK(model_preset("vdp_a0938").has_value());
  CHECK(model_preset("gly_birhythmic").has_value());
  CHECK(!model_preset("nope").has_value());
}
