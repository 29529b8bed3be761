#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

namespace rptip {

/// A point in the planar phase space of either model.
struct State {
  double x = 0.0;
  double y = 0.0;

  constexpr State& operator+=(const State& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr State& operator-=(const State& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr State& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr State operator+(State a, const State& b) { return a += b; }
  friend constexpr State operator-(State a, const State& b) { return a -= b; }
  friend constexpr State operator-(const State& a) { return {-a.x, -a.y}; }
  friend constexpr State operator*(double s, State a) { return a *= s; }
  friend constexpr State operator*(State a, double s) { return a *= s; }
  friend constexpr bool operator==(const State&, const State&) = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double norm(const State& s) { return std::hypot(s.x, s.y); }
inline double distance(const State& a, const State& b) { return norm(a - b); }

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }

  State operator*(const State& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }

  /// Eigenvalues from the characteristic polynomial, larger real part first.
  std::array<std::complex<double>, 2> eigenvalues() const {
    const double half_tr = 0.5 * trace();
    const double disc = half_tr * half_tr - det();
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      return {std::complex<double>(half_tr + s, 0.0), std::complex<double>(half_tr - s, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(half_tr, s), std::complex<double>(half_tr, -s)};
  }

  /// Solves A z = b; caller guarantees det != 0.
  State solve(const State& b) const {
    const double d = det();
    return {(a22 * b.x - a12 * b.y) / d, (-a21 * b.x + a11 * b.y) / d};
  }
};

}  // namespace rptip
