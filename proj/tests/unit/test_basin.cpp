#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rptip/basin.hpp"
#include "rptip/errors.hpp"
#include "helpers.hpp"

using namespace rptip;

namespace {

// Forward-integration oracle written independently of the library helper.
int settle_side(const ModelParams& p, State s, const LimitCycle& outer, const LimitCycle& inner) {
  for (int chunk = 0; chunk < 60; ++chunk) {
    s = integrate_autonomous(p, s, 0.0, 2.0 * outer.period).back();
    if (dist_to_set(s, outer) < 1e-3 * outer.diameter()) return 1;
    if (dist_to_set(s, inner) < 1e-3 * inner.diameter()) return -1;
  }
  return 0;
}

}  // namespace

TEST_CASE("winding number and distance on a square") {
  const std::vector<State> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(winding_number(sq, {0.5, 0.5}) != 0);
  CHECK(winding_number(sq, {1.5, 0.5}) == 0);
  CHECK(polygon_distance(sq, {0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(polygon_distance(sq, {2.0, 0.5}) == doctest::Approx(1.0));
}

TEST_CASE("distance to the unit circle") {
  const LimitCycle c = testing::circle_cycle();
  CHECK(dist_to_set({0.0, 0.0}, c) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(dist_to_set(c.samples[37], c) < 1e-12);
  CHECK(dist_to_set({3.0, 0.0}, c) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("membership at the coexistence parameters") {
  const VdpParams p = testing::vdp_three_cycles();
  const BasinBoundary b(find_separatrix(p));
  CHECK(membership(b, {0.0, 0.0}) == Basin::inner);
  const LimitCycle g1 = find_stable_cycle(p, {6.0, 0.0});
  CHECK(membership(b, g1.samples[100]) == Basin::outer);
  CHECK(membership(b, b.theta.samples[10]) == Basin::band);
  CHECK(membership(ModelParams{p}, {0.0, 0.0}) == Basin::inner);
  CHECK(b.band == doctest::Approx(1e-3 * b.theta.diameter()));
}

TEST_CASE("no separatrix outside the coexistence region") {
  CHECK_THROWS_AS(find_separatrix(testing::gly_at(0.34, 0.7)), Error);
}

TEST_CASE("polygon membership agrees with forward integration") {
  const VdpParams p = testing::vdp_three_cycles();
  const BasinBoundary b(find_separatrix(p));
  const LimitCycle g1 = find_stable_cycle(p, {6.0, 0.0});
  const LimitCycle g2 = find_stable_cycle(p, {2.5, 0.0});
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  int agree = 0, used = 0;
  for (int i = 0; i < 300; ++i) {
    const State s{u(rng), u(rng)};
    const Basin m = membership(b, s);
    if (m == Basin::band) continue;
    const int side = settle_side(p, s, g1, g2);
    if (side == 0) continue;
    ++used;
    agree += (side > 0) == (m == Basin::outer);
    CHECK(forward_basin(p, s, g1, &g2, {}, 120.0 * g1.period) == m);
  }
  CHECK(used > 250);
  CHECK(agree >= 0.99 * used);
}

TEST_CASE("arcs against the base's own separatrix are empty") {
  const VdpParams p = testing::vdp_path_base();
  const PhasedCycle base = build_phased_cycle(find_stable_cycle(p, {6.0, 0.0}));
  const BasinBoundary own(find_separatrix(p));
  const auto arcs = unstable_arcs(base, own, BaseSide::outer);
  CHECK(arcs.arcs.empty());
  CHECK(arcs.flag == BIFlag::none);
  CHECK(arcs.max_violation < 0.0);
}

TEST_CASE("vdp arcs come in half-period pairs and grow along the path") {
  const VdpParams p = testing::vdp_path_base();
  const PhasedCycle base = build_phased_cycle(find_stable_cycle(p, {6.0, 0.0}));
  const double T = base.cycle.period;
  double prev_len = 0.0;
  for (double mu : {0.35, 0.3, 0.25}) {
    VdpParams q = p;
    q.mu = mu;
    const auto arcs = unstable_arcs(base, BasinBoundary(find_separatrix(q)), BaseSide::outer);
    REQUIRE(arcs.flag == BIFlag::partial);
    REQUIRE(arcs.arcs.size() == 2);
    const double shift = std::fmod(arcs.arcs[1].t_start - arcs.arcs[0].t_start + T, T);
    CHECK(std::abs(shift - 0.5 * T) < 1e-3);
    CHECK(arcs.arcs[0].length(T) == doctest::Approx(arcs.arcs[1].length(T)).epsilon(1e-3));
    CHECK(arcs.total_length() > prev_len);
    CHECK(arcs.total_length() < T);
    CHECK(arcs.contains_time(0.5 * (arcs.arcs[0].t_start + arcs.arcs[0].t_end)));
    prev_len = arcs.total_length();
  }
}

TEST_CASE("basin-instability grid") {
  const VdpParams p = testing::vdp_path_base();
  const PhasedCycle base = build_phased_cycle(find_stable_cycle(p, {6.0, 0.0}));
  const BIRegion own = bi_region(base, BaseSide::outer, p, -0.03, -0.03, 1, 1.52, 1.52, 1);
  CHECK(own.at(0, 0) == BIFlag::none);
  const BIRegion line = bi_region(base, BaseSide::outer, p, -0.03, -0.03, 1, 0.3, 1.4, 2);
  CHECK(line.at(0, 0) == BIFlag::partial);
  CHECK(line.at(0, 1) == BIFlag::none);
  std::ostringstream out;
  write_bi_region_csv(out, line);
  CHECK(out.str() == "p1,p2,flag\n-0.03,0.3,partial\n-0.03,1.4,none\n");
}

TEST_CASE("marginal onset") {
  const VdpParams p = testing::vdp_path_base();
  const PhasedCycle base = build_phased_cycle(find_stable_cycle(p, {6.0, 0.0}));
  const ParameterPath path = ParameterPath::vdp_vertical(p, 1.52, 0.3);
  const double pc = marginal_parameter(base, path, 1.52, 0.3, BaseSide::outer);
  CHECK(pc < 1.52);
  CHECK(pc > 0.3);
  VdpParams above = p, below = p;
  above.mu = pc + 2e-4;
  below.mu = pc - 2e-4;
  CHECK(unstable_arcs(base, BasinBoundary(find_separatrix(above)), BaseSide::outer).arcs.empty());
  CHECK(!unstable_arcs(base, BasinBoundary(find_separatrix(below)), BaseSide::outer).arcs.empty());
  CHECK_THROWS_AS(marginal_parameter(base, path, 1.52, 1.4, BaseSide::outer), Error);
}
