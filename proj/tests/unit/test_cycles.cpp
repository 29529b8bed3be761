#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rptip/cycles.hpp"
#include "rptip/errors.hpp"
#include "helpers.hpp"

using namespace rptip;

namespace {

// Dense sign scan of the amplitude polynomial in u = A^2.
std::vector<double> amplitude_scan(const VdpParams& p, int points) {
  auto f = [&](double a) {
    const double u = a * a;
    return p.mu * (1.0 - u / 4.0 + p.alpha * u * u / 8.0 - 5.0 * p.beta * u * u * u / 64.0) - p.d;
  };
  std::vector<double> roots;
  const double a_max = 20.0;
  double prev = f(1e-9);
  for (int k = 1; k <= points; ++k) {
    const double a = a_max * k / points;
    const double cur = f(a);
    if ((prev < 0.0) != (cur < 0.0)) roots.push_back(a - 0.5 * a_max / points);
    prev = cur;
  }
  return roots;
}

}  // namespace

TEST_CASE("classical van der Pol amplitude") {
  VdpParams p{1.0, 1e-12, 1e-12, 0.0};
  const auto r = amplitude_roots(p);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("amplitude roots agree with a dense scan") {
  const VdpParams p = testing::vdp_three_cycles();
  const auto r = amplitude_roots(p);
  const auto scan = amplitude_scan(p, 1000000);
  REQUIRE(r.size() == 3);
  REQUIRE(scan.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r[i] - scan[i]) < 2e-5);
  CHECK(std::is_sorted(r.begin(), r.end()));
}

TEST_CASE("equilibria") {
  const Equilibrium v = find_equilibrium(testing::vdp_three_cycles(), {0.1, 0.1});
  CHECK(std::abs(v.location.x) < 1e-12);
  CHECK(std::abs(v.location.y) < 1e-12);
  CHECK(principal_equilibrium(testing::gly_at(0.34, 1.6)).stability == Stability::stable);
  const Equilibrium e = principal_equilibrium(testing::gly_at(0.29, 1.15));
  CHECK(e.stability == Stability::unstable);
  CHECK(norm(gly_rhs(e.location, testing::gly_at(0.29, 1.15))) < 1e-10 * 40.0);
}

TEST_CASE("three cycles at the coexistence parameters") {
  const VdpParams p = testing::vdp_three_cycles();
  const LimitCycle g1 = find_stable_cycle(p, {6.0, 0.0});
  const LimitCycle g2 = find_stable_cycle(p, {2.5, 0.0});
  const LimitCycle th = find_unstable_cycle(p, {4.5, 0.0});
  CHECK(g2.amplitude() < th.amplitude());
  CHECK(th.amplitude() < g1.amplitude());
  CHECK(th.stability == Stability::unstable);
  const auto roots = amplitude_roots(p);
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(g2.amplitude() - roots[0]) < 0.15 * roots[0]);
  CHECK(std::abs(th.amplitude() - roots[1]) < 0.15 * roots[1]);
  CHECK(std::abs(g1.amplitude() - roots[2]) < 0.15 * roots[2]);
  CHECK(g1.samples.size() >= 2049);
  CHECK(g1.closure_error() < 1e-6 * g1.diameter());
  CHECK(g1.angular_frequency == doctest::Approx(2.0 * std::numbers::pi / g1.period));
  for (const auto& s : g1.samples) CHECK(s.x <= g1.samples[g1.anchor_index].x + 1e-12);
}

TEST_CASE("unstable cycle is a genuine orbit") {
  const VdpParams p = testing::vdp_three_cycles();
  const LimitCycle th = find_unstable_cycle(p, {4.5, 0.0});
  for (std::size_t k : {0ul, 500ul, 1300ul}) {
    const State end = integrate_autonomous(p, th.samples[k], 0.0, th.period).back();
    CHECK(distance(end, th.samples[k]) < 1e-4 * th.diameter());
  }
}

TEST_CASE("no separatrix in region IV") {
  const VdpParams p{0.05, 0.093, 0.0019, -0.15};
  bool failed = false;
  try {
    find_unstable_cycle(p, {3.0, 0.0});
  } catch (const Error& e) {
    failed = e.kind() == ErrorKind::WrongBasin || e.kind() == ErrorKind::NotPeriodic;
  }
  CHECK(failed);
}

TEST_CASE("stable cycle from a seed at the equilibrium fails") {
  CHECK_THROWS_AS(find_stable_cycle(testing::gly_at(0.34, 1.6), principal_equilibrium(testing::gly_at(0.34, 1.6)).location), Error);
}

TEST_CASE("region labels") {
  CHECK(classify_region(VdpParams{1.0, 0.093, 0.0019, -0.001}) == RegionLabel::I);
  CHECK(classify_region(testing::gly_at(0.34, 1.1)) == RegionLabel::II);
  CHECK(classify_region(testing::gly_at(0.34, 0.7)) == RegionLabel::IV);
  CHECK(classify_region(testing::gly_at(0.34, 1.6)) == RegionLabel::III);
  CHECK(classify_region(testing::gly_at(0.275, 1.226)) == RegionLabel::I);
}

TEST_CASE("amplitude root count predicts coexistence on a slice") {
  int agree = 0, total = 0;
  for (double mu = 0.1; mu <= 3.0; mu += 0.1) {
    const VdpParams p{mu, 0.093, 0.0019, -0.05};
    const bool three = amplitude_roots(p).size() == 3;
    const bool region_one = classify_region(p) == RegionLabel::I;
    agree += three == region_one;
    ++total;
  }
  CHECK(agree >= 0.9 * total);
}

TEST_CASE("one-parameter scan finds the lower fold") {
  ScanOptions opt;
  const auto scan = scan_one_param(VdpParams{1.0, 0.093, 0.0019, -0.03}, ScanAxis::input, 0.02, 0.2, 10, opt);
  REQUIRE(scan.folds_l1.size() == 1);
  CHECK(scan.folds_l1[0] == doctest::Approx(0.0472).epsilon(0.02));
  std::ostringstream out;
  write_branch_csv(out, scan);
  CHECK(out.str().rfind("param,branch,value\n", 0) == 0);
  CHECK(out.str().find(",F_l1,") != std::string::npos);
}

TEST_CASE("first Lyapunov coefficient") {
  // van der Pol damping with feedback, zero trace at mu = d: supercritical
  CHECK(first_lyapunov_coefficient(VdpParams{0.5, 1e-12, 1e-15, 0.5}) < 0.0);
  // glycolysis H changes criticality near v = 0.3914
  CHECK(first_lyapunov_coefficient(testing::gly_at(0.385, 0.54693)) < 0.0);
  CHECK(first_lyapunov_coefficient(testing::gly_at(0.395, 0.50489)) > 0.0);
}

TEST_CASE("two-parameter scan locates the generalized Hopf point") {
  const auto scan = scan_two_param(testing::gly_at(0.275, 1.226), 0.2, 0.45, 12, 0.3, 1.6, 12);
  REQUIRE(scan.gh);
  CHECK(std::hypot(scan.gh->p1 - 0.3914, scan.gh->p2 - 0.5195) < 0.02);
  CHECK(!scan.hopf.empty());
}
