#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "rptip/cycles.hpp"
#include "rptip/models.hpp"
#include "rptip/tipping.hpp"

#define RPTIP_STR_(x) #x
#define RPTIP_STR(x) RPTIP_STR_(x)

namespace py = pybind11;
using namespace rptip;

namespace {

VdpParams vdp(double mu, double alpha, double beta, double d) { return VdpParams{mu, alpha, beta, d}; }

GlyParams gly(double v, double sigma_i) {
  GlyParams g;
  g.v = v;
  g.sigma_i = sigma_i;
  return g;
}

std::pair<double, double> as_pair(const State& s) { return {s.x, s.y}; }

py::dict picture(const ModelParams& p) {
  const FrozenPicture pic = frozen_picture(p);
  py::dict out;
  out["gamma1_period"] = pic.gamma1.period;
  out["gamma1_amplitude"] = pic.gamma1.amplitude();
  out["gamma2_period"] = pic.gamma2 ? py::cast(pic.gamma2->period) : py::none();
  out["gamma2_amplitude"] = pic.gamma2 ? py::cast(pic.gamma2->amplitude()) : py::none();
  out["theta_period"] = pic.boundary ? py::cast(pic.boundary->theta.period) : py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Birhythmic oscillator and rate-induced tipping toolkit";
  m.attr("__version__") = RPTIP_STR(VERSION_INFO);

  m.def(
      "vdp_rhs",
      [](double x, double y, double mu, double alpha, double beta, double d) {
        return as_pair(vdp_rhs({x, y}, vdp(mu, alpha, beta, d)));
      },
      py::arg("x"), py::arg("y"), py::arg("mu"), py::arg("alpha") = 0.093, py::arg("beta") = 0.0019,
      py::arg("d") = 0.0);
  m.def(
      "gly_rhs", [](double x, double y, double v, double sigma_i) { return as_pair(gly_rhs({x, y}, gly(v, sigma_i))); },
      py::arg("x"), py::arg("y"), py::arg("v"), py::arg("sigma_i"));
  m.def(
      "vdp_picture",
      [](double mu, double alpha, double beta, double d) {
        const ModelParams p = vdp(mu, alpha, beta, d);
        return picture(p);
      },
      py::arg("mu"), py::arg("alpha") = 0.093, py::arg("beta") = 0.0019, py::arg("d") = 0.0);
  m.def(
      "gly_picture", [](double v, double sigma_i) { return picture(gly(v, sigma_i)); }, py::arg("v"),
      py::arg("sigma_i"));
  m.def(
      "vdp_amplitude_roots",
      [](double mu, double alpha, double beta, double d) { return amplitude_roots(vdp(mu, alpha, beta, d)); },
      py::arg("mu"), py::arg("alpha") = 0.093, py::arg("beta") = 0.0019, py::arg("d") = 0.0);
}
