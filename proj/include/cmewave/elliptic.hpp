#pragma once

namespace cmewave {

/// Jacobi elliptic parameters; m is the PARAMETER (m = k^2 in terms of the
/// modulus k). The finite-band example sn^2(x; 1/2) uses m = 0.5, which is
/// what reproduces the quoted period P = 2K(0.5) ~ 3.7081.
struct EllipticParams {
  double m = 0.5;
};

/// Complete elliptic integral of the first kind K(m), m in [0,1).
double elliptic_K(double m);

/// Jacobi elliptic sine sn(x; m) computed by the descending Landen / AGM
/// transformation with phase back-recursion. Periodic with period 4K(m).
double jacobi_sn(double x, const EllipticParams& params);

}  // namespace cmewave
