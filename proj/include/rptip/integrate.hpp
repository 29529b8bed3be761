#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "rptip/forcing.hpp"
#include "rptip/models.hpp"
#include "rptip/state.hpp"

namespace rptip {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = std::numeric_limits<double>::infinity();
  double max_time = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// Right-hand side of a planar system ds/dt = f(t, s).
using Field = std::function<State(double, const State&)>;

/// Dormand-Prince 5(4) step with its continuous extension.
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State, 5> coef{};

  State at(double t) const;
};

/// Accepted-step trajectory with dense output.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(double t0, State x0);

  void push(const DenseStep& step, double t1, const State& x1);

  const std::vector<double>& times() const { return times_; }
  const std::vector<State>& states() const { return states_; }
  std::size_t size() const { return times_.size(); }
  int interpolation_order() const { return 4; }

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const State& front() const { return states_.front(); }
  const State& back() const { return states_.back(); }

  /// Dense output at any t inside [t_begin, t_end].
  State at(double t) const;

  /// Index of the step containing t.
  std::size_t step_index(double t) const;
  const std::vector<DenseStep>& steps() const { return steps_; }

 private:
  std::vector<double> times_;
  std::vector<State> states_;
  std::vector<DenseStep> steps_;
};

/// Step-by-step driver. Holds private state; not shareable between threads.
class Stepper {
 public:
  /// `span` sets the underflow threshold 1e-12 * span.
  Stepper(Field f, double t0, State x0, const IntegratorConfig& cfg, double span);

  /// Caps the step to `cap` inside each window [lo, hi] and shortens the step
  /// approaching a window so its start is not overshot.
  void set_windows(std::vector<std::pair<double, double>> windows, double cap);

  /// Advances by one accepted step, never past `t_stop`.
  void step(double t_stop);

  double t() const { return t_; }
  const State& x() const { return x_; }
  double t_prev() const { return last_.t0; }
  const State& x_prev() const { return x_prev_; }
  const DenseStep& last_step() const { return last_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

 private:
  double initial_step(double direction_span) const;
  double step_cap() const;
  State eval(double t, const State& s);

  Field f_;
  IntegratorConfig cfg_;
  double span_;
  double t_;
  State x_;
  State x_prev_;
  State k1_;
  double h_ = 0.0;
  double facold_ = 1e-4;
  bool reject_last_ = false;
  DenseStep last_;
  std::vector<std::pair<double, double>> windows_;
  double window_cap_ = std::numeric_limits<double>::infinity();
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

/// Integrates ds/dt = f over [t0, t1] (t1 >= t0). A zero-length span returns
/// the single point x0.
Trajectory integrate_field(const Field& f, State x0, double t0, double t1, const IntegratorConfig& cfg,
                           const std::vector<std::pair<double, double>>& windows = {},
                           double window_cap = std::numeric_limits<double>::infinity());

Field frozen_field(const ModelParams& params, double sign = 1.0);
Field forced_field(const ParameterPath& path, const InputShift& shift);

Trajectory integrate_autonomous(const ModelParams& params, State x0, double t0, double t1,
                                const IntegratorConfig& cfg = {});

/// The input parameter of `path` follows p(rt) at every stage; slaved
/// coordinates follow the path map.
Trajectory integrate_nonautonomous(const ParameterPath& path, const InputShift& shift, State x0, double t0,
                                   double t1, const IntegratorConfig& cfg = {});

/// Signed scalar event g(s) with crossing direction: +1 rising, -1 falling,
/// 0 either. `admit` filters crossing states.
struct Section {
  std::function<double(const State&)> g;
  int direction = 0;
  std::function<bool(const State&)> admit;

  bool triggered(double g_old, double g_new) const;
};

struct Crossing {
  double t;
  State state;
};

/// Locates the crossing inside one dense step by bisection.
std::optional<Crossing> crossing_in_step(const DenseStep& step, const State& x0, const State& x1,
                                         const Section& section);

/// All crossings along a trajectory; throws NoCrossing if there are none.
std::vector<Crossing> find_section_crossings(const Trajectory& traj, const Section& section);

/// CSV with header `t,x,y`, every `stride`-th accepted point plus the last.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t stride = 1);

/// CSV on a uniform time grid through the dense output.
void write_trajectory_csv_uniform(std::ostream& out, const Trajectory& traj, double dt);

}  // namespace rptip
