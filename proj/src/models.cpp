#include "rptip/models.hpp"

#include <cmath>
#include <string>

#include "rptip/errors.hpp"

namespace rptip {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace

void VdpParams::validate() const {
  require(std::isfinite(mu) && mu > 0.0, "vdp: mu must be > 0");
  require(std::isfinite(alpha) && alpha > 0.0, "vdp: alpha must be > 0");
  require(std::isfinite(beta) && beta > 0.0, "vdp: beta must be > 0");
  require(std::isfinite(d), "vdp: d must be finite");
}

void GlyParams::validate() const {
  require(std::isfinite(v) && v >= 0.0, "gly: v must be >= 0");
  require(std::isfinite(sigma_i) && sigma_i >= 0.0, "gly: sigma_i must be >= 0");
  require(K > 0.0 && L > 0.0 && sigma_M > 0.0 && q > 0.0 && k_s > 0.0,
          "gly: K, L, sigma_M, q, k_s must be > 0");
  require(n >= 3, "gly: Hill coefficient n must be >= 3");
}

ModelKind kind_of(const ModelParams& p) {
  return std::holds_alternative<VdpParams>(p) ? ModelKind::vdp : ModelKind::gly;
}

std::string_view model_name(ModelKind kind) { return kind == ModelKind::vdp ? "vdp" : "gly"; }

State vdp_rhs(const State& s, const VdpParams& p) {
  const double x2 = s.x * s.x;
  const double damping = 1.0 - x2 + x2 * x2 * (p.alpha - p.beta * x2);
  return {s.y, p.mu * damping * s.y - s.x - p.d * (s.y - s.x)};
}

double reaction_rate(double x, double y, double L) {
  const double gx = 1.0 + x;
  const double gy = (1.0 + y) * (1.0 + y);
  return x * gx * gy / (L + gx * gx * gy);
}

State gly_rhs(const State& s, const GlyParams& p) {
  if (s.x < -kDomainTolerance || s.y < -kDomainTolerance || !s.finite()) {
    throw Error(ErrorKind::DomainEscape,
                "glycolysis state left the physical quadrant at (" + std::to_string(s.x) + ", " +
                    std::to_string(s.y) + ")");
  }
  const double yn = std::pow(s.y, p.n);
  const double feedback = p.sigma_i * yn / (std::pow(p.K, p.n) + yn);
  const double phi = p.sigma_M * reaction_rate(s.x, s.y, p.L);
  return {p.v + feedback - phi, p.q * phi - p.k_s * s.y - p.q * feedback};
}

State rhs(const State& s, const ModelParams& p) {
  return std::visit(
      [&](const auto& params) -> State {
        if constexpr (std::is_same_v<std::decay_t<decltype(params)>, VdpParams>) {
          return vdp_rhs(s, params);
        } else {
          return gly_rhs(s, params);
        }
      },
      p);
}

Mat2 jacobian(const ModelParams& p, const State& s) {
  const double hx = 1e-6 * std::max(1.0, std::abs(s.x));
  const double hy = 1e-6 * std::max(1.0, std::abs(s.y));
  const State fxp = rhs({s.x + hx, s.y}, p);
  const State fxm = rhs({s.x - hx, s.y}, p);
  const State fyp = rhs({s.x, s.y + hy}, p);
  const State fym = rhs({s.x, s.y - hy}, p);
  return {(fxp.x - fxm.x) / (2 * hx), (fyp.x - fym.x) / (2 * hy), (fxp.y - fxm.y) / (2 * hx),
          (fyp.y - fym.y) / (2 * hy)};
}

double input_parameter(const ModelParams& p) {
  if (const auto* v = std::get_if<VdpParams>(&p)) return v->mu;
  return std::get<GlyParams>(p).sigma_i;
}

ModelParams with_input_parameter(ModelParams p, double value) {
  if (auto* v = std::get_if<VdpParams>(&p)) {
    v->mu = value;
  } else {
    std::get<GlyParams>(p).sigma_i = value;
  }
  return p;
}

double model_scale(ModelKind kind) { return kind == ModelKind::vdp ? 4.0 : 40.0; }

}  // namespace rptip
