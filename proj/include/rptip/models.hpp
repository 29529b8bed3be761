#pragma once

#include <string_view>
#include <variant>

#include "rptip/state.hpp"

namespace rptip {

/// Birhythmic van der Pol oscillator with linear feedback.
struct VdpParams {
  double mu = 1.0;  ///< external input parameter
  double alpha = 0.093;
  double beta = 0.0019;
  double d = 0.0;  ///< feedback strength

  void validate() const;
};

/// Decroly-Goldbeter glycolysis model. Defaults are the birhythmic setting
/// used throughout the glycolysis analyses.
struct GlyParams {
  double v = 0.31;        ///< substrate input
  double sigma_i = 1.0;   ///< recycling-enzyme rate (input parameter)
  double K = 10.0;
  double L = 3.6e6;
  double sigma_M = 10.0;
  int n = 5;              ///< Hill coefficient
  double q = 1.0;
  double k_s = 0.06;

  void validate() const;
};

using ModelParams = std::variant<VdpParams, GlyParams>;

enum class ModelKind { vdp, gly };

ModelKind kind_of(const ModelParams& p);
std::string_view model_name(ModelKind kind);

/// Negative-concentration slack for the glycolysis guard.
inline constexpr double kDomainTolerance = 1e-9;

State vdp_rhs(const State& s, const VdpParams& p);

/// Throws DomainEscape when either concentration is below -kDomainTolerance.
State gly_rhs(const State& s, const GlyParams& p);

/// Allosteric rate-of-reaction function of the glycolysis model.
double reaction_rate(double x, double y, double L);

State rhs(const State& s, const ModelParams& p);

/// Central finite differences, step 1e-6 * max(1, |coordinate|).
Mat2 jacobian(const ModelParams& p, const State& s);

/// The parameter driven by the time-dependent input: mu for vdp, sigma_i for gly.
double input_parameter(const ModelParams& p);
ModelParams with_input_parameter(ModelParams p, double value);

/// Characteristic phase-space size of a model (vdp 4, gly 40).
double model_scale(ModelKind kind);

}  // namespace rptip
