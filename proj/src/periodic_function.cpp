#include "cmewave/periodic_function.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cmewave {

PeriodicFunction::PeriodicFunction(Wavenumber base, double lattice_unit,
                                   std::map<int, complexd> coeffs, bool is_real)
    : base_(base), lattice_unit_(lattice_unit), coeffs_(std::move(coeffs)), is_real_(is_real) {
  if (lattice_unit_ <= 0.0) throw std::invalid_argument("PeriodicFunction: lattice_unit <= 0");
}

bool PeriodicFunction::empty() const {
  for (const auto& [n, a] : coeffs_)
    if (std::abs(a) > 0.0) return false;
  return true;
}

complexd PeriodicFunction::coeff(int n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? complexd{0.0, 0.0} : it->second;
}

double PeriodicFunction::coeff_l1() const {
  double s = 0.0;
  for (const auto& [n, a] : coeffs_) s += std::abs(a);
  return s;
}

complexd PeriodicFunction::operator()(double x) const {
  const double kb = base_abs();
  complexd acc{0.0, 0.0};
  for (const auto& [n, a] : coeffs_)
    acc += a * std::exp(complexd{0.0, n * kb * x});
  return acc;
}

Eigen::VectorXcd PeriodicFunction::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(x.size());
  const double kb = base_abs();
  for (const auto& [n, a] : coeffs_) {
    const double w = n * kb;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      out[j] += a * std::exp(complexd{0.0, w * x[j]});
  }
  return out;
}

Eigen::VectorXd PeriodicFunction::evaluate_real(const Eigen::VectorXd& x) const {
  if (!is_real_) throw std::logic_error("PeriodicFunction: realness flag not set");
  Eigen::VectorXcd z = evaluate(x);
  const double tol = 1e-12 * std::max(coeff_l1(), 1e-300);
  if (z.imag().cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("PeriodicFunction: imaginary residue above tolerance");
  return z.real();
}

PeriodicFunction PeriodicFunction::constant(double c, double lattice_unit) {
  return {Wavenumber(Rational{1, 1}), lattice_unit, {{0, complexd{c, 0.0}}}, true};
}

PeriodicFunction PeriodicFunction::cosine(Wavenumber base, double lattice_unit,
                                          int harmonic, double amplitude) {
  std::map<int, complexd> c;
  c[harmonic] += complexd{amplitude / 2.0, 0.0};
  c[-harmonic] += complexd{amplitude / 2.0, 0.0};
  return {base, lattice_unit, std::move(c), true};
}

PeriodicFunction PeriodicFunction::from_harmonics(Wavenumber base, double lattice_unit,
                                                  std::map<int, complexd> coeffs,
                                                  bool enforce_real) {
  if (enforce_real) {
    // project exactly onto the conjugate-symmetric part
    std::map<int, complexd> sym;
    for (const auto& [n, a] : coeffs)
      sym[n] = 0.5 * (a + std::conj(coeffs.count(-n) ? coeffs[-n] : complexd{0.0, 0.0}));
    coeffs = std::move(sym);
  }
  return {base, lattice_unit, std::move(coeffs), enforce_real};
}

PeriodicFunction PeriodicFunction::plus(const PeriodicFunction& other) const {
  if (std::abs(base_abs() - other.base_abs()) > 1e-14)
    throw std::invalid_argument("PeriodicFunction::plus: incompatible harmonic spacing");
  std::map<int, complexd> c = coeffs_;
  for (const auto& [n, a] : other.coeffs_) c[n] += a;
  return {base_, lattice_unit_, std::move(c), is_real_ && other.is_real_};
}

PeriodicFunction fourier_coefficients_from_samples(const Eigen::VectorXcd& samples,
                                                   int n_max, Wavenumber base,
                                                   double lattice_unit, bool enforce_real) {
  const Eigen::Index N = samples.size();
  if (N < 2 * n_max + 1)
    throw std::invalid_argument("fourier_coefficients_from_samples: need >= 2*n_max+1 samples");
  std::map<int, complexd> c;
  for (int n = -n_max; n <= n_max; ++n) {
    complexd acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < N; ++j) {
      const double ph = -2.0 * std::numbers::pi * n * static_cast<double>(j) / static_cast<double>(N);
      acc += samples[j] * std::exp(complexd{0.0, ph});
    }
    c[n] = acc / static_cast<double>(N);
  }
  return PeriodicFunction::from_harmonics(base, lattice_unit, std::move(c), enforce_real);
}

}  // namespace cmewave
