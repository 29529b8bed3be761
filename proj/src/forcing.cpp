#include "rptip/forcing.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rptip/errors.hpp"

namespace rptip {

std::string_view shift_kind_name(ShiftKind kind) {
  switch (kind) {
    case ShiftKind::monotone: return "monotone";
    case ShiftKind::nonmonotone: return "nonmonotone";
    case ShiftKind::impulse: return "impulse";
  }
  return "monotone";
}

ShiftKind parse_shift_kind(std::string_view name) {
  if (name == "monotone") return ShiftKind::monotone;
  if (name == "nonmonotone") return ShiftKind::nonmonotone;
  if (name == "impulse") return ShiftKind::impulse;
  throw Error(ErrorKind::InvalidArgument, "unknown shift kind '" + std::string(name) + "'");
}

InputShift InputShift::monotone(double a, double b, double r, double t_c) {
  return {ShiftKind::monotone, a, b, r, t_c, 0.0, 0.0};
}

InputShift InputShift::nonmonotone(double a, double b, double r, double t_c) {
  return {ShiftKind::nonmonotone, a, b, r, t_c, 0.0, 0.0};
}

InputShift InputShift::impulse(double base_level, double b, double r, double t_c1, double t_c2) {
  return {ShiftKind::impulse, base_level, b, r, 0.0, t_c1, t_c2};
}

void InputShift::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::InvalidArgument, "shift rate r must be > 0");
  if (!(b >= 0.0) || !std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "shift magnitude b must be >= 0");
  if (kind == ShiftKind::impulse && !(t_c2 > t_c1)) {
    throw Error(ErrorKind::InvalidArgument, "impulse requires t_c2 > t_c1");
  }
}

double sech(double z) {
  const double a = std::abs(z);
  if (a > 710.0) return 0.0;
  const double e = std::exp(-a);
  return 2.0 * e / (1.0 + e * e);
}

double eval_shift(const InputShift& s, double t) {
  switch (s.kind) {
    case ShiftKind::monotone:
      return t <= s.t_c ? s.level - s.b * sech(s.r * (t - s.t_c)) : s.level - s.b;
    case ShiftKind::nonmonotone:
      return s.level - s.b * sech(s.r * (t - s.t_c));
    case ShiftKind::impulse:
      return s.level + 0.5 * s.b * (std::tanh(s.r * (t - s.t_c1)) - std::tanh(s.r * (t - s.t_c2)));
  }
  return s.level;
}

ShiftLimits limits(const InputShift& s) {
  if (s.kind == ShiftKind::monotone) return {s.level, s.level - s.b};
  return {s.level, s.level};
}

double settled_time(const InputShift& s, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "settled_time requires eps > 0");
  switch (s.kind) {
    case ShiftKind::monotone:
      return s.t_c;
    case ShiftKind::nonmonotone: {
      // b sech(z) < eps  <=>  z > asech(eps / b)
      const double w = eps / s.b;
      if (!(w < 1.0)) return -std::numeric_limits<double>::infinity();
      return s.t_c + std::log((1.0 + std::sqrt(1.0 - w * w)) / w) / s.r;
    }
    case ShiftKind::impulse: {
      // b [tanh(z1) - tanh(z2)] / 2 <= b [1 - tanh(z2)] / 2 < eps
      const double w = 2.0 * eps / s.b;
      if (!(w < 1.0)) return -std::numeric_limits<double>::infinity();
      return s.t_c2 + std::atanh(1.0 - w) / s.r;
    }
  }
  return s.t_c;
}

std::vector<std::pair<double, double>> fast_windows(const InputShift& s) {
  const double half = 40.0 / s.r;
  if (s.b == 0.0) return {};
  if (s.kind == ShiftKind::impulse) return {{s.t_c1 - half, s.t_c1 + half}, {s.t_c2 - half, s.t_c2 + half}};
  return {{s.t_c - half, s.t_c + half}};
}

double gly_diagonal_v(double sigma_i) { return (-sigma_i + 3.11) / 6.86; }

ParameterPath::ParameterPath(ModelParams base, double p_plus, double p_minus)
    : base_(std::move(base)), p_plus_(p_plus), p_minus_(p_minus) {}

ParameterPath ParameterPath::gly_diagonal(GlyParams base, double sigma_plus, double sigma_minus) {
  ParameterPath path(base, sigma_plus, sigma_minus);
  path.slaved_ = true;
  return path;
}

ParameterPath ParameterPath::vdp_vertical(VdpParams base, double mu_plus, double mu_minus) {
  return ParameterPath(base, mu_plus, mu_minus);
}

ModelParams ParameterPath::at(double coordinate) const {
  ModelParams p = with_input_parameter(base_, coordinate);
  if (slaved_) std::get<GlyParams>(p).v = gly_diagonal_v(coordinate);
  return p;
}

}  // namespace rptip
