#pragma once

#include <complex>
#include <map>

#include <Eigen/Dense>

#include "cmewave/rational.hpp"

namespace cmewave {

using complexd = std::complex<double>;

/// A periodic function stored as a finite Fourier series
///   f(x) = sum_n a_n exp(i n k_base x),   k_base = base.value() * lattice_unit,
/// where `base` is the harmonic spacing in lattice units and `lattice_unit`
/// is the primitive reciprocal wavenumber 2*pi/P of the ambient lattice.
/// For the 2*pi-periodic potentials of the standard setups lattice_unit = 1
/// and all numbers coincide with the usual conventions.
class PeriodicFunction {
 public:
  PeriodicFunction() = default;
  PeriodicFunction(Wavenumber base, double lattice_unit,
                   std::map<int, complexd> coeffs, bool is_real);

  const Wavenumber& base() const { return base_; }
  double lattice_unit() const { return lattice_unit_; }
  double base_abs() const { return base_.value() * lattice_unit_; }
  const std::map<int, complexd>& coeffs() const { return coeffs_; }
  bool is_real() const { return is_real_; }
  bool empty() const;

  complexd coeff(int n) const;
  double coeff_l1() const;  // sum_n |a_n|

  complexd operator()(double x) const;
  Eigen::VectorXcd evaluate(const Eigen::VectorXd& x) const;
  /// Evaluates and strips the imaginary part after checking it is below
  /// 1e-12 * coeff_l1(); requires the realness flag.
  Eigen::VectorXd evaluate_real(const Eigen::VectorXd& x) const;

  /// sum_n a cos(n_k * k_base * x) style builders -------------------------

  static PeriodicFunction constant(double c, double lattice_unit = 1.0);
  /// amplitude * cos(harmonic * k_base * x) added on an existing spacing.
  static PeriodicFunction cosine(Wavenumber base, double lattice_unit,
                                 int harmonic, double amplitude);
  static PeriodicFunction from_harmonics(Wavenumber base, double lattice_unit,
                                         std::map<int, complexd> coeffs,
                                         bool enforce_real);

  PeriodicFunction plus(const PeriodicFunction& other) const;

 private:
  Wavenumber base_{Rational{1, 1}};
  double lattice_unit_ = 1.0;
  std::map<int, complexd> coeffs_;
  bool is_real_ = false;
};

/// Discrete Fourier analysis of uniform samples over exactly one period of
/// the target series (period = 2*pi / (base * lattice_unit)). Needs at
/// least 2*n_max+1 samples. Round-trips with evaluate() to spectral
/// accuracy on smooth inputs.
PeriodicFunction fourier_coefficients_from_samples(const Eigen::VectorXcd& samples,
                                                   int n_max, Wavenumber base,
                                                   double lattice_unit,
                                                   bool enforce_real = false);

}  // namespace cmewave
