#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rptip/integrate.hpp"
#include "rptip/models.hpp"

namespace rptip {

enum class Stability { stable, unstable };

std::string_view stability_name(Stability s);

/// Periodic orbit sampled uniformly in time. `samples` holds N + 1 points over
/// [0, T]; the last one closes the loop. Index 0 is the max-x anchor.
struct LimitCycle {
  std::vector<State> samples;
  std::vector<State> velocities;
  double period = 0.0;
  double angular_frequency = 0.0;
  Stability stability = Stability::stable;
  std::size_t anchor_index = 0;
  ModelParams params{VdpParams{}};

  std::size_t intervals() const { return samples.size() - 1; }
  double dt() const { return period / static_cast<double>(intervals()); }

  /// Cubic Hermite interpolation at time t (taken modulo the period).
  State at_time(double t) const;

  double min_x() const;
  double max_x() const;
  double min_y() const;
  double max_y() const;
  /// Half the x-extent.
  double amplitude() const;
  double diameter() const;
  double closure_error() const;
};

struct Equilibrium {
  State location;
  std::array<std::complex<double>, 2> eigenvalues;
  Stability stability = Stability::unstable;

  double max_real_part() const { return eigenvalues[0].real(); }
};

enum class RegionLabel { I, II, III, IV, outside };

std::string_view region_name(RegionLabel r);

struct CycleOptions {
  IntegratorConfig integrator{};
  std::size_t samples = 2048;
  std::size_t max_returns = 500;
  double return_tol = 1e-9;  ///< scaled by the model size
};

Equilibrium find_equilibrium(const ModelParams& params, State seed);

/// e0: the origin for vdp; for glycolysis the interior steady state with
/// y = q v / k_s.
Equilibrium principal_equilibrium(const ModelParams& params);

/// Poincare section used for returns: vdp y = 0 falling with x > 0 (the max-x
/// event), glycolysis x = x_e rising. The section is parametrized by a scalar
/// s (x for vdp, y for glycolysis).
struct CycleSection {
  ModelKind kind;
  State e0;
  Section section;
  int outward = 1;  ///< +1 when larger s lies further from e0
  double scale = 1.0;
  double vdp_s_max = 12.0;

  State point(double s) const;
  double coordinate(const State& p) const;
  /// Interval of s on which returns are scanned.
  double s_min() const;
  double s_max() const;
};

CycleSection cycle_section(const ModelParams& params, const Equilibrium& e0);

struct Return {
  double s;
  double time;
  State state;
};

/// One Poincare return of the point with coordinate s. `sign` = -1 flows in
/// reversed time. Empty when no return happens within `horizon`.
std::optional<Return> poincare_return(const ModelParams& params, const CycleSection& cs, double s,
                                      const IntegratorConfig& cfg, double sign = 1.0,
                                      double horizon = 0.0);

struct CycleRoot {
  double s;
  Stability stability;
};

/// All periodic orbits crossing the section, found from sign changes of
/// P(s) - s on a grid of `resolution` points plus refinement of near-tangent
/// extrema. Ordered from the innermost orbit outward.
std::vector<CycleRoot> cycle_census(const ModelParams& params, const CycleSection& cs,
                                    const IntegratorConfig& cfg = {}, std::size_t resolution = 64);

/// Closes the orbit through section coordinate s and resamples it.
LimitCycle cycle_through(const ModelParams& params, const CycleSection& cs, double s, Stability stability,
                         const CycleOptions& opt = {});

LimitCycle find_stable_cycle(const ModelParams& params, State seed, const CycleOptions& opt = {});

/// Runs the negated field so the repelling orbit becomes attracting; the
/// result is returned in forward time orientation.
LimitCycle find_unstable_cycle(const ModelParams& params, State seed, const CycleOptions& opt = {});

/// Positive roots A of mu (1 - A^2/4 + alpha A^4/8 - 5 beta A^6/64) - d = 0.
std::vector<double> amplitude_roots(const VdpParams& p);

/// Stable vdp cycles above this half-extent are the large branch.
inline constexpr double kVdpLargeAmplitude = 4.5;
/// Glycolysis cycles above this half-extent in x are the large branch.
inline constexpr double kGlyLargeAmplitude = 18.0;

RegionLabel classify_region(const ModelParams& params, const CycleOptions& opt = {});

/// First Lyapunov coefficient of the Hopf normal form at e0; negative for a
/// supercritical and positive for a subcritical Hopf. Evaluated from the
/// trace-free part of the Jacobian, so it is meaningful on or near H. NaN when
/// e0 is not a focus.
double first_lyapunov_coefficient(const ModelParams& params);

/// Region label from a census and the stability of e0.
RegionLabel label_from_census(ModelKind kind, const std::vector<CycleRoot>& census, bool e0_stable,
                              double single_cycle_amplitude);

struct CycleSummary {
  double s;
  Stability stability;
  double period;
  double min_x, max_x, min_y, max_y;
};

/// Extents and period of the orbit through s, from one return.
CycleSummary summarize_cycle(const ModelParams& params, const CycleSection& cs, double s, Stability stability,
                             const IntegratorConfig& cfg = {});

struct BranchRow {
  double param;
  std::string branch;
  double value;
};

struct OneParamScan {
  std::vector<BranchRow> rows;
  std::vector<double> folds_l1;
  std::vector<double> folds_l2;
};

/// Which parameter of the record varies in scans: the input parameter (mu or
/// sigma_i) or the secondary one (d or v).
enum class ScanAxis { input, secondary };

double get_axis(const ModelParams& p, ScanAxis axis);
ModelParams set_axis(ModelParams p, ScanAxis axis, double value);

struct ScanOptions {
  IntegratorConfig integrator{};
  std::size_t census_resolution = 64;
  double refine_tol = 1e-4;
  unsigned workers = 1;
};

OneParamScan scan_one_param(const ModelParams& fixed, ScanAxis axis, double lo, double hi, std::size_t points,
                            const ScanOptions& opt = {});

void write_branch_csv(std::ostream& out, const OneParamScan& scan);

struct Point2 {
  double p1;
  double p2;
};

struct TwoParamScan {
  std::vector<double> p1;  ///< secondary axis (d or v)
  std::vector<double> p2;  ///< input axis (mu or sigma_i)
  std::vector<RegionLabel> labels;  ///< row-major, p1 index outer
  std::vector<Point2> hopf;
  std::vector<Point2> fold_l1;
  std::vector<Point2> fold_l2;
  std::optional<Point2> gh;

  RegionLabel at(std::size_t i, std::size_t j) const { return labels[i * p2.size() + j]; }
};

TwoParamScan scan_two_param(const ModelParams& base, double p1_lo, double p1_hi, std::size_t n1, double p2_lo,
                            double p2_hi, std::size_t n2, const ScanOptions& opt = {});

void write_region_csv(std::ostream& out, const TwoParamScan& scan);
void write_polyline_csv(std::ostream& out, const std::vector<Point2>& line);

}  // namespace rptip
