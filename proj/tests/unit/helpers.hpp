#pragma once

#include <cmath>
#include <numbers>

#include "rptip/cycles.hpp"

namespace testing {

// Unit circle traversed clockwise from (1, 0): (cos t, -sin t), T = 2 pi.
inline rptip::LimitCycle circle_cycle(std::size_t n = 2048) {
  rptip::LimitCycle c;
  c.period = 2.0 * std::numbers::pi;
  c.angular_frequency = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = c.period * static_cast<double>(k) / static_cast<double>(n);
    c.samples.push_back({std::cos(t), -std::sin(t)});
    c.velocities.push_back({-std::sin(t), -std::cos(t)});
  }
  c.samples.back() = c.samples.front();
  return c;
}

inline rptip::VdpParams vdp_three_cycles() { return {0.6, 0.114, 0.003, -0.1}; }
inline rptip::VdpParams vdp_path_base() { return {1.52, 0.0938, 0.00194, -0.03}; }

inline rptip::GlyParams gly_at(double v, double sigma_i) {
  rptip::GlyParams g;
  g.v = v;
  g.sigma_i = sigma_i;
  return g;
}

}  // namespace testing
