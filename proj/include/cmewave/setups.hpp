#pragma once

#include <string>

#include "cmewave/cme.hpp"

namespace cmewave {

/// Frozen parameter bundles reproducing the reference experiments:
///   sec611: V = 2(cos x + 1), sigma = -1, k0 = 1/5, band 2, W = cos(2 k0 x)
///   sec612: same carrier, W = cos(2k0 x) + cos(4k0 x)/2 + cos(10k0 x)/3
///   sec62:  V = sn^2(x; 1/2) (finite band), W = cos(4 pi/P x), double point
///           at k = 0; carrier and coefficients computed on the 4K cell
/// dx/dt/t_end follow the stated discretization (dx = 0.05, dt = 0.02,
/// t_end = t_factor / eps); domain lengths and the epsilon lists are
/// artifact defaults.
struct NamedSetup {
  std::string id;
  PeriodicFunction V, W, sigma;
  double period = 0.0;  // carrier/CME cell
  Wavenumber k0;
  int band_hint = 0;
  double v = 0.5;
  double delta = 1.5707963267948966;
  double dx_target = 0.05;
  double dt = 0.02;
  double t_factor = 2.0;  // t_end = t_factor / eps
  std::vector<double> epsilons;
  double rate_min = 0.0, rate_max = 0.0;
  int m_pw = 64;
  bool relaxed_case_b = false;  // sec62: rate >= rate_min only, with caveat
  double x_cell = 0.0;          // commensurate unit for domain rounding
};

NamedSetup make_named_setup(const std::string& id);
bool is_named_setup(const std::string& id);

/// Carrier selection, W-splitting, phase fixing and CME coefficients for a
/// setup, run in the spec'd order.
struct SetupArtifacts {
  CarrierPair pair;
  WSplitting split;
  CmeCoefficients coeffs;
  GapReport gap;
};

SetupArtifacts prepare(const NamedSetup& setup);

}  // namespace cmewave
