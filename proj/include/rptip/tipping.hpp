#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rptip/basin.hpp"
#include "rptip/cycles.hpp"
#include "rptip/forcing.hpp"
#include "rptip/integrate.hpp"
#include "rptip/phase.hpp"

namespace rptip {

enum class OutcomeKind { Track, Tip, Indeterminate };

std::string_view outcome_name(OutcomeKind k);

struct Outcome {
  OutcomeKind kind = OutcomeKind::Indeterminate;
  std::string attractor = "none";  ///< gamma1, gamma2, e0 or none
  double dist_gamma1 = 0.0;
  double dist_gamma2 = 0.0;
  std::string reason;  ///< error name when the run failed
  State final_state;
};

/// Attractors and separatrix of one frozen system.
struct FrozenPicture {
  ModelParams params{VdpParams{}};
  std::optional<BasinBoundary> boundary;
  LimitCycle gamma1;                ///< outer stable cycle
  std::optional<LimitCycle> gamma2;  ///< inner stable cycle (absent when e0 is the inner attractor)
};

FrozenPicture frozen_picture(const ModelParams& params, const CycleOptions& opt = {});

/// Basin id of a state in a frozen picture: gamma1 outside theta, gamma2 (or
/// e0) inside, none in the boundary band.
std::string attractor_of(const FrozenPicture& pic, const State& s);

struct ClassifyOptions {
  CycleOptions cycle{};
  IntegratorConfig integrator{};
  double settle_eps = 1e-8;
  double future_periods = 5.0;
};

/// Everything a tipping run needs except the swept quantities.
struct TippingProblem {
  ParameterPath path;
  InputShift shift;  ///< template; b, r, t_c and phase-dependent x0 are set per cell
  State x0;
  BaseSide side = BaseSide::outer;
  ClassifyOptions options{};
  unsigned workers = 1;
};

/// Integrates to settled_time + 5 future periods and tests the basin at the
/// future limit. `future` may be supplied to avoid recomputing it.
Outcome classify(const ParameterPath& path, const InputShift& shift, State x0, BaseSide side,
                 const ClassifyOptions& opt = {}, const FrozenPicture* future = nullptr);

/// Path coordinate between `from` (birhythmic) and `to` where the separatrix
/// and its inner partner collide, refined by bisection to `tol`.
double path_fold(const ParameterPath& path, double from, double to, const IntegratorConfig& cfg = {},
                 double tol = 1e-4);

/// Throws PathOutOfRegion when the input would be driven past the path fold.
void check_path(const ParameterPath& path, const InputShift& shift);

enum class GridAxes { b_r, phi_r };

struct TippingGrid {
  GridAxes axes = GridAxes::b_r;
  std::vector<double> rows;  ///< b values or phases
  std::vector<double> rates;
  double t_c = 0.0;
  std::vector<Outcome> cells;  ///< row-major, row index outer

  const Outcome& at(std::size_t i, std::size_t j) const { return cells[i * rates.size() + j]; }
};

TippingGrid tipping_diagram(const TippingProblem& problem, const std::vector<double>& b_grid,
                            const std::vector<double>& r_grid, double t_c);

/// Track/Tip transitions along r at fixed b, each bracketed to 1e-3 relative.
std::vector<double> critical_rates(const TippingProblem& problem, double b, const std::vector<double>& r_grid,
                                   double t_c);

/// Same, reusing the outcomes of an existing grid row.
std::vector<double> critical_rates(const TippingProblem& problem, const TippingGrid& grid, double b);

std::vector<TippingGrid> tc_sweep(const TippingProblem& problem, const std::vector<double>& b_grid,
                                  const std::vector<double>& r_grid, const std::vector<double>& tc_list);

struct PacePhase {
  TippingGrid grid;
  UnstableArcSet overlay;  ///< basin-unstable phases at the far end of the path
};

PacePhase pace_vs_phase(const TippingProblem& problem, const PhasedCycle& base, double b,
                        const std::vector<double>& r_grid, const std::vector<double>& phi_grid, double t_c);

struct SeriesResult {
  State x0;
  std::string after_first;
  std::string after_second;
};

/// Impulse runs checked at mid-plateau against the frozen p+ system and after
/// the second switch against the frozen p- system.
std::vector<SeriesResult> series_demo(const ParameterPath& path, const InputShift& impulse,
                                      const std::vector<State>& x0s, const ClassifyOptions& opt = {},
                                      unsigned workers = 1);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

void write_tipping_csv(std::ostream& out, const TippingGrid& grid);
void write_critical_rates_csv(std::ostream& out, const std::vector<std::pair<double, std::vector<double>>>& curve);
void write_series_csv(std::ostream& out, const std::vector<SeriesResult>& series);

}  // namespace rptip
