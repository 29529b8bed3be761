#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "rptip/cycles.hpp"
#include "rptip/forcing.hpp"
#include "rptip/phase.hpp"

namespace rptip {

enum class Basin { inner, outer, band };

std::string_view basin_name(Basin b);

/// Unstable cycle theta as a closed polygon. Inside lies the basin of the
/// inner attractor (Gamma_2 or a stable e0), outside that of Gamma_1.
struct BasinBoundary {
  LimitCycle theta;
  std::vector<State> polygon;
  double band = 0.0;  ///< 1e-3 of the diameter of theta

  explicit BasinBoundary(LimitCycle cycle);
};

/// theta at the given parameters; NoSeparatrix when there is no unstable cycle.
LimitCycle find_separatrix(const ModelParams& params, const CycleOptions& opt = {});

/// Winding number of the polygon around p (0 outside).
int winding_number(const std::vector<State>& polygon, const State& p);

/// Distance from p to the closed polygon.
double polygon_distance(const std::vector<State>& polygon, const State& p);

/// Distance to the polygon, positive outside and negative inside.
double signed_clearance(const BasinBoundary& boundary, const State& p);

Basin membership(const BasinBoundary& boundary, const State& s);
Basin membership(const ModelParams& params, const State& s, const CycleOptions& opt = {});

/// Which side of theta holds the basin of the base cycle.
enum class BaseSide { outer, inner };

/// Default base cycle: Gamma_1 (outer) for vdp, Gamma_2 (inner) for glycolysis.
BaseSide default_base_side(ModelKind kind);

struct Arc {
  double t_start;
  double t_end;  ///< may be smaller than t_start when the arc wraps past the anchor
  double phi_start;
  double phi_end;

  double length(double period) const;
};

enum class BIFlag { none, partial, total, marginal, na };

std::string_view bi_flag_name(BIFlag f);

struct UnstableArcSet {
  std::vector<Arc> arcs;
  BIFlag flag = BIFlag::none;
  double max_violation = 0.0;  ///< deepest penetration into the wrong basin (<= 0 when none)
  double period = 0.0;

  double total_length() const;
  bool contains_time(double t) const;
};

/// Base cycle points lying in the wrong basin of the shifted separatrix.
UnstableArcSet unstable_arcs(const PhasedCycle& base, const BasinBoundary& boundary, BaseSide side);

/// Path coordinate of the first basin-instability onset between `from`
/// (no arcs) and `to` (arcs), refined to `tol`.
double marginal_parameter(const PhasedCycle& base, const ParameterPath& path, double from, double to,
                          BaseSide side, const CycleOptions& opt = {}, double tol = 1e-4);

struct BIRegion {
  std::vector<double> p1;  ///< secondary axis
  std::vector<double> p2;  ///< input axis
  std::vector<BIFlag> flags;

  BIFlag at(std::size_t i, std::size_t j) const { return flags[i * p2.size() + j]; }
};

BIRegion bi_region(const PhasedCycle& base, BaseSide side, const ModelParams& fixed, double p1_lo, double p1_hi,
                   std::size_t n1, double p2_lo, double p2_hi, std::size_t n2, const CycleOptions& opt = {},
                   unsigned workers = 1);

/// Basin by brute force: integrates the frozen system from s until it comes
/// within 1e-3 of a diameter of `outer_cycle` (outer) or of `inner_attractor`
/// (inner). Returns band when neither happens within `horizon`.
Basin forward_basin(const ModelParams& params, const State& s, const LimitCycle& outer_cycle,
                    const LimitCycle* inner_cycle, const State& inner_point, double horizon,
                    const IntegratorConfig& cfg = {});

/// Hausdorff semi-distance from s to the cycle.
double dist_to_set(const State& s, const LimitCycle& cycle);

void write_bi_region_csv(std::ostream& out, const BIRegion& region);
void write_arcs_csv(std::ostream& out, const UnstableArcSet& arcs);

}  // namespace rptip
