#pragma once

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cmewave/bloch.hpp"
#include "cmewave/periodic_function.hpp"

namespace cmewave {

/// Inner products follow the paper's convention <f,g> = int conj(f) g dx
/// over one period, computed by trapezoidal quadrature on a uniform grid
/// (spectrally accurate for smooth periodic integrands).

struct PeriodCell {
  double period = 0.0;
  double dx = 0.0;
  Eigen::VectorXd x;
};

PeriodCell make_period_cell(double period, int n = 4096);

/// Samples sum_m c_m exp(i unit m x) on the given points.
Eigen::VectorXcd sample_planewave(const Eigen::VectorXcd& coeffs, int m_pw,
                                  double unit, const Eigen::VectorXd& x);
/// Samples the x-derivative of the plane-wave sum.
Eigen::VectorXcd sample_planewave_deriv(const Eigen::VectorXcd& coeffs, int m_pw,
                                        double unit, const Eigen::VectorXd& x);

std::complex<double> inner_product(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                                   double dx);

/// The three-way splitting of the perturbation W relative to a carrier
/// pair. w1 and w2_plus/w2_minus live on the lattice (integer harmonics);
/// w3_plus/w3_minus keep the original spacing of W. Reassembly
///   W = w1 + w2_pm * exp(-2 i k_pm x) + w3_pm
/// is exact on coefficients by integer index bookkeeping.
struct WSplitting {
  PeriodicFunction w1;
  PeriodicFunction w2_plus, w2_minus;
  PeriodicFunction w3_plus, w3_minus;
  enum class Class { W1, W2, W3 };
  std::map<int, Class> classes_plus, classes_minus;  // original harmonic n -> class
  CarrierCase case_tag = CarrierCase::SimplePair;
};

WSplitting split_w(const PeriodicFunction& w, const CarrierPair& pair);

struct GapReport {
  bool necessary_ok = false;   // arithmetic condition on k_W (class non-empty)
  double kappa_abs = 0.0;      // |coupling inner product| (phase independent)
  bool kappa_nonzero = false;  // kappa_abs > 1e-8
};

GapReport check_gap_conditions(const WSplitting& split, const CarrierPair& pair);

struct CmeCoefficients {
  double c_g = 0.0;
  double kappa = 0.0;
  double kappa_s = 0.0;
  double alpha = 0.0;
  std::complex<double> beta{0.0, 0.0};
  std::complex<double> gamma{0.0, 0.0};
  std::optional<int> scaled_by_N;
  double cross_check_delta = 0.0;  // max disagreement among redundant routes
};

/// All CME coefficients by spectral quadrature, with every redundant
/// expression in the coefficient block evaluated and cross-checked
/// (disagreement above 1e-6 is an internal-consistency error).
CmeCoefficients compute_coefficients(const CarrierPair& pair, const WSplitting& split,
                                     const PeriodicFunction& sigma);

/// Q-cell rescaling for rational k_pm with denominator N: nonlinear
/// coefficients divide by N, linear ones are unchanged. Recomputes kappa
/// and kappa_s directly on the Q cell with W_Q^(1) and q_pm as a
/// cross-check (must agree to 1e-8).
CmeCoefficients rational_reduction(const CarrierPair& pair, const WSplitting& split,
                                   const PeriodicFunction& w,
                                   const PeriodicFunction& sigma,
                                   const CmeCoefficients& coeffs);

/// Envelope pair on slow-variable grids; A_plus/A_minus are (nT x nX).
struct EnvelopePair {
  Eigen::VectorXd X;
  Eigen::VectorXd T;
  Eigen::MatrixXcd A_plus;
  Eigen::MatrixXcd A_minus;
};

struct CmeResidual {
  Eigen::MatrixXcd r_plus;   // interior points only
  Eigen::MatrixXcd r_minus;
  double sup_plus = 0.0;
  double sup_minus = 0.0;
  double max_amplitude = 0.0;
};

/// Evaluates both coupled mode equations (including the beta and gamma
/// terms) with 4th-order centered differences; boundary layers are dropped
/// from the sup norms. Errors out when fewer than 5 grid points resolve the
/// envelope width.
CmeResidual cme_residual(const EnvelopePair& env, const CmeCoefficients& coeffs);

}  // namespace cmewave
