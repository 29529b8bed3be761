#include <doctest.h>

#include <cmath>
#include <random>

#include "rptip/cycles.hpp"
#include "rptip/errors.hpp"
#include "rptip/models.hpp"
#include "helpers.hpp"

using namespace rptip;

namespace {

// Second, independent transcription of the glycolysis field.
State gly_reference(double x, double y, const GlyParams& p) {
  const double yn = std::pow(y, p.n);
  const double feedback = p.sigma_i * yn / (std::pow(p.K, p.n) + yn);
  const double a = (1.0 + x) * (1.0 + x) * (1.0 + y) * (1.0 + y);
  const double phi = x * (1.0 + x) * (1.0 + y) * (1.0 + y) / (p.L + a);
  return {p.v + feedback - p.sigma_M * phi, p.q * p.sigma_M * phi - p.k_s * y - p.q * feedback};
}

Mat2 vdp_jacobian_exact(const State& s, const VdpParams& p) {
  const double x = s.x, y = s.y;
  const double poly = 1.0 - x * x + p.alpha * std::pow(x, 4) - p.beta * std::pow(x, 6);
  const double dpoly = -2.0 * x + 4.0 * p.alpha * std::pow(x, 3) - 6.0 * p.beta * std::pow(x, 5);
  return {0.0, 1.0, p.mu * dpoly * y - 1.0 + p.d, p.mu * poly - p.d};
}

}  // namespace

TEST_CASE("vdp field values") {
  const State z = vdp_rhs({0.0, 0.0}, testing::vdp_three_cycles());
  CHECK(z.x == 0.0);
  CHECK(z.y == 0.0);
  const State f = vdp_rhs({1.0, 0.0}, testing::vdp_three_cycles());
  CHECK(f.x == doctest::Approx(0.0));
  CHECK(f.y == doctest::Approx(-1.1).epsilon(1e-14));
}

TEST_CASE("vdp field is odd") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  const VdpParams p = testing::vdp_path_base();
  for (int i = 0; i < 1000; ++i) {
    const State s{u(rng), u(rng)};
    const State a = vdp_rhs(s, p), b = vdp_rhs(-s, p);
    CHECK(std::abs(a.x + b.x) <= 1e-12 * std::max(1.0, std::abs(a.x)));
    CHECK(std::abs(a.y + b.y) <= 1e-12 * std::max(1.0, std::abs(a.y)));
  }
}

TEST_CASE("glycolysis field matches an independent transcription") {
  const GlyParams p = testing::gly_at(0.275, 1.226);
  const State a = gly_rhs({75.71, 2.76}, p);
  const State b = gly_reference(75.71, 2.76, p);
  CHECK(a.x == doctest::Approx(b.x).epsilon(1e-13));
  CHECK(a.y == doctest::Approx(b.y).epsilon(1e-13));

  const State o = gly_rhs({0.0, 0.0}, testing::gly_at(0.31, 1.0));
  CHECK(o.x == doctest::Approx(0.31));
  CHECK(o.y == doctest::Approx(0.0));
}

TEST_CASE("glycolysis mass balance with q = 1") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, 150.0), uy(0.0, 20.0);
  const GlyParams p = testing::gly_at(0.3, 1.1);
  for (int i = 0; i < 1000; ++i) {
    const State s{ux(rng), uy(rng)};
    const State f = gly_rhs(s, p);
    CHECK(std::abs(f.x + f.y + p.k_s * s.y - p.v) < 1e-12);
  }
}

TEST_CASE("rate of reaction stays in [0, 1)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1e4);
  for (int i = 0; i < 1000; ++i) {
    const double phi = reaction_rate(u(rng), u(rng), 3.6e6);
    CHECK(phi >= 0.0);
    CHECK(phi < 1.0);
  }
}

TEST_CASE("glycolysis domain guard") {
  const GlyParams p = testing::gly_at(0.3, 1.1);
  CHECK_NOTHROW(gly_rhs({-1e-10, 1.0}, p));
  CHECK_THROWS_AS(gly_rhs({-1e-6, 1.0}, p), Error);
  try {
    gly_rhs({1.0, -1e-3}, p);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainEscape);
  }
}

TEST_CASE("jacobian at the vdp origin") {
  const Mat2 j = jacobian(VdpParams{1.0, 0.093, 0.0019, 0.0}, {0.0, 0.0});
  CHECK(j.a11 == doctest::Approx(0.0));
  CHECK(j.a12 == doctest::Approx(1.0));
  CHECK(j.a21 == doctest::Approx(-1.0));
  CHECK(j.a22 == doctest::Approx(1.0));
}

TEST_CASE("finite-difference jacobian matches analytic derivatives") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  const VdpParams p = testing::vdp_three_cycles();
  for (int i = 0; i < 200; ++i) {
    const State s{u(rng), u(rng)};
    const Mat2 fd = jacobian(p, s), ex = vdp_jacobian_exact(s, p);
    const double scale = std::max({1.0, std::abs(ex.a21), std::abs(ex.a22)});
    CHECK(std::abs(fd.a11 - ex.a11) <= 1e-5 * scale);
    CHECK(std::abs(fd.a12 - ex.a12) <= 1e-5 * scale);
    CHECK(std::abs(fd.a21 - ex.a21) <= 1e-5 * scale);
    CHECK(std::abs(fd.a22 - ex.a22) <= 1e-5 * scale);
  }
}

TEST_CASE("glycolysis equilibrium in region III is stable") {
  const GlyParams p = testing::gly_at(0.34, 1.6);
  const Equilibrium e = principal_equilibrium(p);
  const auto ev = jacobian(p, e.location).eigenvalues();
  CHECK(ev[0].real() < 0.0);
  CHECK(ev[1].real() < 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(VdpParams({-1.0, 0.1, 0.01, 0.0}).validate(), Error);
  GlyParams g;
  g.n = 2;
  CHECK_THROWS_AS(g.validate(), Error);
  CHECK(input_parameter(VdpParams{0.7, 0.1, 0.01, 0.0}) == 0.7);
  CHECK(input_parameter(with_input_parameter(testing::gly_at(0.3, 1.0), 0.9)) == 0.9);
}
