#include "cmewave/setups.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cmewave/elliptic.hpp"

namespace cmewave {

namespace {

constexpr double pi = std::numbers::pi;

PeriodicFunction sn_squared_potential(double q_period, int n_max) {
  const EllipticParams ell{0.5};
  const int n_samp = 4096;
  Eigen::VectorXcd samples(n_samp);
  for (int j = 0; j < n_samp; ++j) {
    const double s = jacobi_sn(j * q_period / n_samp, ell);
    samples[j] = complexd{s * s, 0.0};
  }
  PeriodicFunction v = fourier_coefficients_from_samples(
      samples, n_max, Wavenumber(Rational{1, 1}), 2.0 * pi / q_period, true);
  // drop roundoff-level harmonics (odd ones vanish: sn^2 has period Q/2)
  std::map<int, complexd> pruned;
  for (const auto& [n, a] : v.coeffs())
    if (std::abs(a) > 1e-15) pruned[n] = a;
  return PeriodicFunction::from_harmonics(v.base(), v.lattice_unit(), std::move(pruned), true);
}

}  // namespace

bool is_named_setup(const std::string& id) {
  return id == "sec611" || id == "sec612" || id == "sec62";
}

NamedSetup make_named_setup(const std::string& id) {
  NamedSetup s;
  s.id = id;

  if (id == "sec611" || id == "sec612") {
    s.period = 2.0 * pi;
    s.m_pw = 64;
    s.V = PeriodicFunction::from_harmonics(
        Wavenumber(Rational{1, 1}), 1.0,
        {{0, {2.0, 0.0}}, {1, {1.0, 0.0}}, {-1, {1.0, 0.0}}}, true);
    s.sigma = PeriodicFunction::constant(-1.0, 1.0);
    s.k0 = Wavenumber(Rational{1, 5});
    s.band_hint = 2;
    s.t_factor = 2.0;
    s.epsilons = {0.01, 0.02, 0.03, 0.04, 0.05};
    s.x_cell = s.period * 5.0;  // common period of V and exp(i k0 x)
    const Wavenumber kw(Rational{2, 5});
    if (id == "sec611") {
      s.W = PeriodicFunction::cosine(kw, 1.0, 1, 1.0);
      s.rate_min = 1.45;
      s.rate_max = 1.90;
    } else {
      s.W = PeriodicFunction::from_harmonics(
          kw, 1.0,
          {{1, {0.5, 0.0}}, {-1, {0.5, 0.0}},
           {2, {0.25, 0.0}}, {-2, {0.25, 0.0}},
           {5, {1.0 / 6.0, 0.0}}, {-5, {1.0 / 6.0, 0.0}}}, true);
      s.rate_min = 1.40;
      s.rate_max = 1.85;
    }
    return s;
  }

  if (id == "sec62") {
    // carrier cell = 4K (the sn period, twice the sn^2 period P = 2K); the
    // reference beta/gamma values are quadratures on this cell
    const double K = elliptic_K(0.5);
    const double Q = 4.0 * K;
    s.period = Q;
    s.m_pw = 96;
    s.V = sn_squared_potential(Q, 80);
    s.sigma = PeriodicFunction::constant(-1.0, 2.0 * pi / Q);
    // W = cos(4 pi / P x) = cos(4 * (2 pi / Q) x)
    s.W = PeriodicFunction::cosine(Wavenumber(Rational{4, 1}), 2.0 * pi / Q, 1, 1.0);
    s.k0 = Wavenumber(Rational{0, 1});
    s.band_hint = 4;
    s.t_factor = 1.0;
    s.epsilons = {0.01, 0.02, 0.03, 0.04};
    s.rate_min = 1.0;
    s.rate_max = 1e9;  // relaxed acceptance: rate >= 1 only
    s.relaxed_case_b = true;
    s.x_cell = Q;
    return s;
  }

  throw std::invalid_argument("make_named_setup: unknown setup id '" + id + "'");
}

SetupArtifacts prepare(const NamedSetup& setup) {
  const BlochProblem problem{setup.V, setup.period, setup.m_pw};
  SetupArtifacts art;
  art.pair = select_carrier_pair(problem, setup.k0, setup.band_hint);
  art.split = split_w(setup.W, art.pair);
  art.pair = fix_phases(art.pair, art.split);
  art.gap = check_gap_conditions(art.split, art.pair);
  art.coeffs = compute_coefficients(art.pair, art.split, setup.sigma);
  return art;
}

}  // namespace cmewave
