#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rptip/errors.hpp"
#include "rptip/tipping.hpp"
#include "helpers.hpp"

using namespace rptip;

namespace {

struct GlySetup {
  GlyParams base = testing::gly_at(0.275, 1.226);
  ParameterPath path = ParameterPath::gly_diagonal(base, 1.226, 0.6);
  double T = 308.266;
};

}  // namespace

TEST_CASE("frozen picture at the birhythmic glycolysis point") {
  const FrozenPicture pic = frozen_picture(testing::gly_at(0.275, 1.226));
  REQUIRE(pic.boundary);
  REQUIRE(pic.gamma2);
  CHECK(pic.gamma1.amplitude() > pic.boundary->theta.amplitude());
  CHECK(pic.gamma2->amplitude() < pic.boundary->theta.amplitude());
  CHECK(attractor_of(pic, pic.gamma2->samples[3]) == "gamma2");
  CHECK(attractor_of(pic, pic.gamma1.samples[3]) == "gamma1");
}

TEST_CASE("zero magnitude always tracks") {
  const GlySetup g;
  const PhasedCycle base = build_phased_cycle(*frozen_picture(g.path.at(1.226)).gamma2);
  for (double r : {0.01, 1.0}) {
    for (double phi : {0.0, 2.0, 4.0}) {
      const Outcome o = classify(g.path, InputShift::monotone(1.226, 0.0, r, 4.0 * g.T), point_at_phase(base, phi),
                                 BaseSide::inner);
      CHECK(o.kind == OutcomeKind::Track);
      CHECK(o.dist_gamma2 < 1e-3 * base.cycle.diameter());
    }
  }
}

TEST_CASE("glycolysis monotone and nonmonotone outcomes") {
  const GlySetup g;
  CHECK(classify(g.path, InputShift::monotone(1.226, 0.35, 0.01, 4 * g.T), {75.71, 2.76}, BaseSide::inner).kind ==
        OutcomeKind::Track);
  CHECK(classify(g.path, InputShift::monotone(1.226, 0.35, 0.08, 4 * g.T), {75.71, 2.76}, BaseSide::inner).kind ==
        OutcomeKind::Tip);
  const OutcomeKind expect[] = {OutcomeKind::Track, OutcomeKind::Tip, OutcomeKind::Track};
  const double rates[] = {0.01, 0.032, 0.09};
  for (int i = 0; i < 3; ++i) {
    const auto o = classify(g.path, InputShift::nonmonotone(1.226, 0.37, rates[i], 4 * g.T), {68.91, 8.61},
                            BaseSide::inner);
    CHECK(o.kind == expect[i]);
  }
}

TEST_CASE("inputs past the fold are refused") {
  GlySetup g;
  g.path.set_fold(0.7068);
  CHECK_NOTHROW(check_path(g.path, InputShift::monotone(1.226, 0.5, 1.0, 0.0)));
  bool refused = false;
  try {
    check_path(g.path, InputShift::monotone(1.226, 0.6, 1.0, 0.0));
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::PathOutOfRegion;
  }
  CHECK(refused);
  TippingProblem pb{g.path, InputShift::monotone(1.226, 0.3, 1.0, 0.0), {75.71, 2.76}, BaseSide::inner, {}, 1};
  const auto grid = tipping_diagram(pb, {0.6}, {0.1}, 4 * g.T);
  CHECK(grid.at(0, 0).kind == OutcomeKind::Indeterminate);
  CHECK(grid.at(0, 0).reason == "PathOutOfRegion");
}

TEST_CASE("critical rates are genuinely critical") {
  const GlySetup g;
  TippingProblem pb{g.path, InputShift::nonmonotone(1.226, 0.37, 1.0, 0.0), {68.91, 8.61}, BaseSide::inner, {}, 1};
  const auto rc = critical_rates(pb, 0.37, logspace(0.005, 0.2, 10), 4 * g.T);
  REQUIRE(rc.size() == 2);
  for (double r : rc) {
    const auto lo = classify(g.path, InputShift::nonmonotone(1.226, 0.37, r * (1 - 2e-3), 4 * g.T), pb.x0, pb.side);
    const auto hi = classify(g.path, InputShift::nonmonotone(1.226, 0.37, r * (1 + 2e-3), 4 * g.T), pb.x0, pb.side);
    CHECK(lo.kind != hi.kind);
  }
}

TEST_CASE("diagram is independent of the worker count") {
  const GlySetup g;
  TippingProblem pb{g.path, InputShift::monotone(1.226, 0.3, 1.0, 0.0), {75.71, 2.76}, BaseSide::inner, {}, 1};
  const auto b = linspace(0.2, 0.4, 3);
  const auto r = logspace(0.01, 0.1, 4);
  std::ostringstream one, many;
  write_tipping_csv(one, tipping_diagram(pb, b, r, 4 * g.T));
  pb.workers = 4;
  write_tipping_csv(many, tipping_diagram(pb, b, r, 4 * g.T));
  CHECK(one.str() == many.str());
  CHECK(one.str().rfind("b,r,outcome,attractor,dist_gamma1,dist_gamma2\n", 0) == 0);
  const auto sweep = tc_sweep(pb, b, r, {4 * g.T});
  REQUIRE(sweep.size() == 1);
  std::ostringstream again;
  write_tipping_csv(again, sweep[0]);
  CHECK(again.str() == one.str());
}

TEST_CASE("slow inputs track at every phase") {
  const VdpParams p = testing::vdp_path_base();
  const ParameterPath path = ParameterPath::vdp_vertical(p, 1.52, 0.1);
  const FrozenPicture pic = frozen_picture(p);
  const PhasedCycle base = build_phased_cycle(pic.gamma1);
  TippingProblem pb{path, InputShift::monotone(1.52, 1.3, 1.0, 0.0), {}, BaseSide::outer, {}, 1};
  const auto pp = pace_vs_phase(pb, base, 1.3, {0.05}, linspace(0.0, 2 * std::numbers::pi * 15 / 16, 16),
                                4 * base.cycle.period);
  for (const auto& c : pp.grid.cells) CHECK(c.kind == OutcomeKind::Track);
  CHECK(pp.overlay.flag == BIFlag::partial);
}

TEST_CASE("grids") {
  const auto l = linspace(1.0, 2.0, 5);
  CHECK(l[2] == doctest::Approx(1.5));
  const auto g = logspace(0.01, 100.0, 5);
  CHECK(g.front() == 0.01);
  CHECK(g[2] == doctest::Approx(1.0));
  CHECK(g.back() == 100.0);
  CHECK_THROWS_AS(logspace(0.0, 1.0, 3), Error);
}

TEST_CASE("csv writers") {
  std::ostringstream a, b;
  write_critical_rates_csv(a, {{0.37, {0.02, 0.05}}});
  CHECK(a.str() == "b,rc_index,rc\n0.37,1,0.02\n0.37,2,0.05\n");
  write_series_csv(b, {{{1.0, 2.0}, "gamma1", "gamma2"}});
  CHECK(b.str() == "x0,y0,after_first,after_second\n1,2,gamma1,gamma2\n");
}
