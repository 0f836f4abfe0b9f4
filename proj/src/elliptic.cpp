#include "cmewave/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cmewave {

namespace {

void check_param(double m) {
  if (!(m >= 0.0 && m < 1.0))
    throw std::invalid_argument("elliptic: parameter m must lie in [0,1)");
}

}  // namespace

double elliptic_K(double m) {
  check_param(m);
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-17 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

double jacobi_sn(double x, const EllipticParams& params) {
  const double m = params.m;
  check_param(m);
  if (m == 0.0) return std::sin(x);

  // reduce to one period for accuracy of the phase recursion
  const double period = 4.0 * elliptic_K(m);
  x -= period * std::floor(x / period);

  // AGM scale: a_{i+1} = (a_i+b_i)/2, b_{i+1} = sqrt(a_i b_i), c_{i+1} = (a_i-b_i)/2
  double a[64], c[64];
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (n < 62 && std::abs(c[n]) > 1e-17 * a[n]) {
    const double an = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    a[n + 1] = an;
    ++n;
  }

  double phi = std::ldexp(a[n] * x, n);
  for (int i = n; i >= 1; --i) {
    const double s = std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(s));
  }
  return std::sin(phi);
}

}  // namespace cmewave
