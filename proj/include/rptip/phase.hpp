#pragma once

#include <iosfwd>
#include <vector>

#include "rptip/cycles.hpp"

namespace rptip {

/// Limit cycle with the time-proportional phase 2 pi t / T measured from the
/// max-x point gamma_0.
struct PhasedCycle {
  LimitCycle cycle;
  State anchor;
  std::vector<double> phases;  ///< phase of each sample, phases[0] = 0

  double period() const { return cycle.period; }
};

PhasedCycle build_phased_cycle(const LimitCycle& cycle);

/// Time along the cycle of the nearest interpolated cycle point, in [0, T).
/// Throws NotOnCycle beyond 1e-3 of the diameter.
double time_of_point(const PhasedCycle& pc, const State& s);

/// Phase in [0, 2 pi).
double phase_of_point(const PhasedCycle& pc, const State& s);

/// Phase of the nearest cycle point for any state, without the on-cycle check.
double projected_phase(const PhasedCycle& pc, const State& s);

State point_at_phase(const PhasedCycle& pc, double phi);

/// Wraps any angle into [0, 2 pi).
double wrap_phase(double phi);

/// CSV `index,x,y,phi`.
void write_phased_csv(std::ostream& out, const PhasedCycle& pc);

}  // namespace rptip
