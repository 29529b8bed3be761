#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rptip/models.hpp"

namespace rptip {

enum class ShiftKind { monotone, nonmonotone, impulse };

std::string_view shift_kind_name(ShiftKind kind);
ShiftKind parse_shift_kind(std::string_view name);

/// Time-dependent input law p(rt).
///
/// monotone:    a - b sech(r (t - t_c)) for t <= t_c, then a - b
/// nonmonotone: a - b sech(r (t - t_c))
/// impulse:     base + b [tanh(r (t - t_c1)) - tanh(r (t - t_c2))] / 2
///
/// `level` is the reference level: the past limit a for the sech laws and the
/// base level mu^- for the impulse.
struct InputShift {
  ShiftKind kind = ShiftKind::monotone;
  double level = 0.0;
  double b = 0.0;
  double r = 1.0;
  double t_c = 0.0;
  double t_c1 = 0.0;
  double t_c2 = 0.0;

  static InputShift monotone(double a, double b, double r, double t_c);
  static InputShift nonmonotone(double a, double b, double r, double t_c);
  static InputShift impulse(double base_level, double b, double r, double t_c1, double t_c2);

  void validate() const;
};

/// Numerically safe hyperbolic secant.
double sech(double z);

double eval_shift(const InputShift& shift, double t);

struct ShiftLimits {
  double past;
  double future;
};

ShiftLimits limits(const InputShift& shift);

/// Smallest t beyond which |p(rt) - future limit| < eps. May be -inf when the
/// input never leaves the eps-band.
double settled_time(const InputShift& shift, double eps);

/// Time windows where the input changes quickly; the integrator caps its step
/// to 0.1/r inside them.
std::vector<std::pair<double, double>> fast_windows(const InputShift& shift);

/// Parameter path Delta_p: a one-dimensional family of frozen systems indexed
/// by the input parameter. An optional slaved map moves a second coordinate
/// with it (the glycolysis diagonal path).
class ParameterPath {
 public:
  ParameterPath() = default;
  ParameterPath(ModelParams base, double p_plus, double p_minus);

  /// Glycolysis diagonal path v = (-sigma_i + 3.11) / 6.86.
  static ParameterPath gly_diagonal(GlyParams base, double sigma_plus, double sigma_minus);
  static ParameterPath vdp_vertical(VdpParams base, double mu_plus, double mu_minus);

  ModelParams at(double coordinate) const;
  ModelKind kind() const { return kind_of(base_); }
  const ModelParams& base() const { return base_; }
  double p_plus() const { return p_plus_; }
  double p_minus() const { return p_minus_; }
  bool slaved() const { return slaved_; }

  /// Path coordinate beyond which the frozen system leaves the birhythmic
  /// region (the fold F_l1). Inputs must not be driven past it.
  std::optional<double> fold() const { return fold_; }
  void set_fold(double coordinate) { fold_ = coordinate; }

 private:
  ModelParams base_{VdpParams{}};
  double p_plus_ = 0.0;
  double p_minus_ = 0.0;
  bool slaved_ = false;
  std::optional<double> fold_;
};

/// v on the glycolysis diagonal path.
double gly_diagonal_v(double sigma_i);

}  // namespace rptip
