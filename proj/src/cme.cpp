#include "cmewave/cme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cmewave {

namespace {
constexpr std::complex<double> I{0.0, 1.0};
}

PeriodCell make_period_cell(double period, int n) {
  PeriodCell cell;
  cell.period = period;
  cell.dx = period / n;
  cell.x.resize(n);
  for (int j = 0; j < n; ++j) cell.x[j] = j * cell.dx;
  return cell;
}

Eigen::VectorXcd sample_planewave(const Eigen::VectorXcd& coeffs, int m_pw,
                                  double unit, const Eigen::VectorXd& x) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(x.size());
  for (int i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == complexd{0.0, 0.0}) continue;
    const double w = (i - m_pw) * unit;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      out[j] += coeffs[i] * std::exp(complexd{0.0, w * x[j]});
  }
  return out;
}

Eigen::VectorXcd sample_planewave_deriv(const Eigen::VectorXcd& coeffs, int m_pw,
                                        double unit, const Eigen::VectorXd& x) {
  Eigen::VectorXcd d = coeffs;
  for (int i = 0; i < d.size(); ++i) d[i] *= I * ((i - m_pw) * unit);
  return sample_planewave(d, m_pw, unit, x);
}

std::complex<double> inner_product(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                                   double dx) {
  return f.dot(g) * dx;  // Eigen's dot conjugates the first factor
}

WSplitting split_w(const PeriodicFunction& w, const CarrierPair& pair) {
  if (!w.is_real())
    throw std::invalid_argument("split_w: W must be real (H2)");
  if (std::abs(w.coeff(0)) != 0.0)
    throw std::invalid_argument("split_w: W must have zero mean (a_0 = 0)");
  if (std::abs(w.lattice_unit() - pair.lattice_unit()) >
      1e-12 * std::abs(pair.lattice_unit()))
    throw std::invalid_argument("split_w: W and carrier live on different lattices");

  const double unit = pair.lattice_unit();
  WSplitting s;
  s.case_tag = pair.case_tag;

  std::map<int, complexd> w1c, w2pc, w2mc, w3pc, w3mc;
  const Wavenumber two_kp = pair.k_plus.times(2);
  const Wavenumber two_km = pair.k_minus.times(2);

  for (const auto& [n, a] : w.coeffs()) {
    if (n == 0) continue;
    const Wavenumber freq = w.base().times(n);
    if (freq.is_integer()) {
      w1c[static_cast<int>(freq.as_integer())] += a;
      s.classes_plus[n] = WSplitting::Class::W1;
      s.classes_minus[n] = WSplitting::Class::W1;
      continue;
    }
    const Wavenumber shift_p = freq.plus(two_kp);
    if (shift_p.is_integer()) {
      w2pc[static_cast<int>(shift_p.as_integer())] += a;
      s.classes_plus[n] = WSplitting::Class::W2;
    } else {
      w3pc[n] = a;
      s.classes_plus[n] = WSplitting::Class::W3;
    }
    const Wavenumber shift_m = freq.plus(two_km);
    if (shift_m.is_integer()) {
      w2mc[static_cast<int>(shift_m.as_integer())] += a;
      s.classes_minus[n] = WSplitting::Class::W2;
    } else {
      w3mc[n] = a;
      s.classes_minus[n] = WSplitting::Class::W3;
    }
  }

  const Wavenumber one{Rational{1, 1}};
  s.w1 = PeriodicFunction(one, unit, std::move(w1c), true);
  s.w2_plus = PeriodicFunction(one, unit, std::move(w2pc), false);
  s.w2_minus = PeriodicFunction(one, unit, std::move(w2mc), false);
  s.w3_plus = PeriodicFunction(w.base(), unit, std::move(w3pc), false);
  s.w3_minus = PeriodicFunction(w.base(), unit, std::move(w3mc), false);
  return s;
}

GapReport check_gap_conditions(const WSplitting& split, const CarrierPair& pair) {
  GapReport rep;
  const PeriodicFunction& coupling =
      pair.case_tag == CarrierCase::SimplePair ? split.w2_plus : split.w1;
  rep.necessary_ok = !coupling.empty();

  const PeriodCell cell = make_period_cell(pair.period);
  const double unit = pair.lattice_unit();
  const Eigen::VectorXcd pp = sample_planewave(pair.p_plus, pair.m_pw, unit, cell.x);
  const Eigen::VectorXcd pm = sample_planewave(pair.p_minus, pair.m_pw, unit, cell.x);
  const Eigen::VectorXcd wv = coupling.evaluate(cell.x);
  rep.kappa_abs = std::abs(inner_product(wv.cwiseProduct(pp), pm, cell.dx));
  rep.kappa_nonzero = rep.kappa_abs > 1e-8;
  return rep;
}

namespace {

double require_consistent(const char* name, std::initializer_list<complexd> routes,
                          double* max_delta) {
  const complexd first = *routes.begin();
  for (const complexd& r : routes) {
    const double d = std::abs(r - first);
    *max_delta = std::max(*max_delta, d);
    if (d > 1e-6) {
      std::ostringstream msg;
      msg << "compute_coefficients: redundant expressions for " << name
          << " disagree by " << d;
      throw std::runtime_error(msg.str());
    }
  }
  double imax = 0.0;
  for (const complexd& r : routes) imax = std::max(imax, std::abs(r.imag()));
  if (imax > 1e-6)
    throw std::runtime_error(std::string("compute_coefficients: ") + name +
                             " has imaginary residue above tolerance");
  return first.real();
}

complexd require_consistent_complex(const char* name, std::initializer_list<complexd> routes,
                                    double* max_delta) {
  const complexd first = *routes.begin();
  for (const complexd& r : routes) {
    const double d = std::abs(r - first);
    *max_delta = std::max(*max_delta, d);
    if (d > 1e-6) {
      std::ostringstream msg;
      msg << "compute_coefficients: redundant expressions for " << name
          << " disagree by " << d;
      throw std::runtime_error(msg.str());
    }
  }
  return first;
}

}  // namespace

CmeCoefficients compute_coefficients(const CarrierPair& pair, const WSplitting& split,
                                     const PeriodicFunction& sigma) {
  if (!pair.phases_fixed)
    throw std::logic_error("compute_coefficients: phases must be fixed first");

  const PeriodCell cell = make_period_cell(pair.period);
  const double unit = pair.lattice_unit();
  const double dx = cell.dx;

  const Eigen::VectorXcd pp = sample_planewave(pair.p_plus, pair.m_pw, unit, cell.x);
  const Eigen::VectorXcd pm = sample_planewave(pair.p_minus, pair.m_pw, unit, cell.x);
  const Eigen::VectorXcd dpp = sample_planewave_deriv(pair.p_plus, pair.m_pw, unit, cell.x);
  const Eigen::VectorXcd dpm = sample_planewave_deriv(pair.p_minus, pair.m_pw, unit, cell.x);
  const Eigen::VectorXcd w1 = split.w1.evaluate(cell.x);
  const Eigen::VectorXcd w2p = split.w2_plus.evaluate(cell.x);
  const Eigen::VectorXcd w2m = split.w2_minus.evaluate(cell.x);
  const Eigen::VectorXcd sg = sigma.evaluate(cell.x);

  CmeCoefficients co;
  double delta = 0.0;

  // c_g = 2<k+ p+ - i p+', p+> = -2<k- p- - i p-', p->
  const Eigen::VectorXcd fp = pair.k_plus_abs() * pp - I * dpp;
  const Eigen::VectorXcd fm = pair.k_minus_abs() * pm - I * dpm;
  co.c_g = require_consistent("c_g",
                              {2.0 * inner_product(fp, pp, dx),
                               -2.0 * inner_product(fm, pm, dx)},
                              &delta);

  // kappa_s = -<W1 p+, p+> = -<W1 p-, p->
  co.kappa_s = require_consistent("kappa_s",
                                  {-inner_product(w1.cwiseProduct(pp), pp, dx),
                                   -inner_product(w1.cwiseProduct(pm), pm, dx)},
                                  &delta);

  // kappa: case a uses W2-+, case b uses W1
  if (pair.case_tag == CarrierCase::SimplePair) {
    co.kappa = require_consistent("kappa",
                                  {-inner_product(w2m.cwiseProduct(pm), pp, dx),
                                   -inner_product(w2p.cwiseProduct(pp), pm, dx)},
                                  &delta);
  } else {
    co.kappa = require_consistent("kappa",
                                  {-inner_product(w1.cwiseProduct(pm), pp, dx),
                                   -inner_product(w1.cwiseProduct(pp), pm, dx)},
                                  &delta);
  }

  // alpha, four redundant routes
  const Eigen::VectorXcd pp2 = pp.cwiseProduct(pp);
  const Eigen::VectorXcd pm2 = pm.cwiseProduct(pm);
  const Eigen::VectorXcd app2 = pp.cwiseAbs2().cast<complexd>();
  const Eigen::VectorXcd apm2 = pm.cwiseAbs2().cast<complexd>();
  co.alpha = require_consistent(
      "alpha",
      {-inner_product(sg.cwiseProduct(pp2), pp2, dx),
       -inner_product(sg.cwiseProduct(pm2), pm2, dx),
       -inner_product(sg.cwiseProduct(apm2).cwiseProduct(pp), pp, dx),
       -inner_product(sg.cwiseProduct(app2).cwiseProduct(pm), pm, dx)},
      &delta);

  const bool quarter =
      pair.k_plus.exact()
          ? (pair.k_plus.rational() == Rational{1, 4})
          : std::abs(pair.k_plus.value() - 0.25) < Wavenumber::integer_tol;

  if (pair.case_tag == CarrierCase::DoublePoint) {
    co.beta = require_consistent_complex(
        "beta",
        {-inner_product(sg.cwiseProduct(app2).cwiseProduct(pm), pp, dx),
         -std::conj(inner_product(sg.cwiseProduct(app2).cwiseProduct(pp), pm, dx)),
         -inner_product(sg.cwiseProduct(apm2).cwiseProduct(pm), pp, dx),
         -std::conj(inner_product(sg.cwiseProduct(apm2).cwiseProduct(pp), pm, dx))},
        &delta);
    co.gamma = require_consistent_complex(
        "gamma",
        {-inner_product(sg.cwiseProduct(pm2).cwiseProduct(pp.conjugate()), pp, dx),
         -std::conj(inner_product(sg.cwiseProduct(pp2).cwiseProduct(pm.conjugate()), pm, dx))},
        &delta);
  } else if (quarter) {
    Eigen::VectorXcd em(cell.x.size()), ep(cell.x.size());
    for (Eigen::Index j = 0; j < cell.x.size(); ++j) {
      em[j] = std::exp(complexd{0.0, -unit * cell.x[j]});
      ep[j] = std::exp(complexd{0.0, unit * cell.x[j]});
    }
    co.beta = complexd{0.0, 0.0};
    co.gamma = require_consistent_complex(
        "gamma",
        {-inner_product(sg.cwiseProduct(pm2).cwiseProduct(pp.conjugate()).cwiseProduct(em), pp, dx),
         -std::conj(inner_product(sg.cwiseProduct(pp2).cwiseProduct(pm.conjugate()).cwiseProduct(ep), pm, dx))},
        &delta);
  } else {
    co.beta = complexd{0.0, 0.0};   // exact in case a away from k+ = 1/4
    co.gamma = complexd{0.0, 0.0};
  }

  co.cross_check_delta = delta;
  return co;
}

CmeCoefficients rational_reduction(const CarrierPair& pair, const WSplitting& split,
                                   const PeriodicFunction& w,
                                   const PeriodicFunction& sigma,
                                   const CmeCoefficients& coeffs) {
  if (!pair.k_plus.exact())
    throw std::invalid_argument("rational_reduction: k_+ is not rational");
  const Rational kr = pair.k_plus.rational();
  const long long N = kr.den;

  CmeCoefficients scaled = coeffs;
  scaled.alpha /= static_cast<double>(N);
  scaled.beta /= static_cast<double>(N);
  scaled.gamma /= static_cast<double>(N);
  scaled.scaled_by_N = static_cast<int>(N);

  // direct Q-cell recomputation of the linear coefficients as a cross-check
  const double P = pair.period;
  const double Q = static_cast<double>(N) * P;
  const double unit_q = pair.lattice_unit() / static_cast<double>(N);
  const int M = pair.m_pw;
  const long long r = kr.num;  // k+ * N
  const int MQ = static_cast<int>(N) * M + static_cast<int>(std::llabs(r));

  Eigen::VectorXcd qc = Eigen::VectorXcd::Zero(2 * MQ + 1);
  const double rt = 1.0 / std::sqrt(static_cast<double>(N));
  for (int i = 0; i < 2 * M + 1; ++i) {
    const long long j = static_cast<long long>(i - M) * N + r;
    qc[static_cast<int>(j) + MQ] = rt * pair.p_plus[i];
  }
  const Eigen::VectorXcd qmc = conjugate_eigenvector(qc, Wavenumber(Rational{0, 1}));

  // W_Q^(1): harmonics with n k_W in (1/N) Z
  std::map<int, complexd> wq1c;
  for (const auto& [n, a] : w.coeffs()) {
    if (n == 0) continue;
    const Wavenumber freq_q = w.base().times(n).times(N);  // in Q-lattice units
    if (freq_q.is_integer()) wq1c[static_cast<int>(freq_q.as_integer())] += a;
  }
  const PeriodicFunction wq1(Wavenumber(Rational{1, 1}), unit_q, std::move(wq1c), true);

  const int nq = std::max(4096, 8 * MQ);
  const PeriodCell cell = make_period_cell(Q, nq);
  const Eigen::VectorXcd qp = sample_planewave(qc, MQ, unit_q, cell.x);
  const Eigen::VectorXcd qm = sample_planewave(qmc, MQ, unit_q, cell.x);
  const Eigen::VectorXcd dqp = sample_planewave_deriv(qc, MQ, unit_q, cell.x);
  const Eigen::VectorXcd w1x = wq1.evaluate(cell.x);
  const Eigen::VectorXcd sgx = sigma.evaluate(cell.x);
  const double dx = cell.dx;

  const double cg_q = (2.0 * I * inner_product(dqp, qp, dx)).real();
  const double kappa_q = (-inner_product(w1x.cwiseProduct(qp), qm, dx)).real();
  const double kappas_q = (-inner_product(w1x.cwiseProduct(qp), qp, dx)).real();
  const Eigen::VectorXcd qp2 = qp.cwiseProduct(qp);
  const double alpha_q = (-inner_product(sgx.cwiseProduct(qp2), qp2, dx)).real();

  const auto bad = [](double a, double b) { return std::abs(a - b) > 1e-8 * (1.0 + std::abs(b)); };
  if (bad(cg_q, coeffs.c_g) || bad(kappa_q, coeffs.kappa) ||
      bad(kappas_q, coeffs.kappa_s) || bad(alpha_q, scaled.alpha)) {
    std::ostringstream msg;
    msg << "rational_reduction: Q-cell cross-check failed (dc_g="
        << cg_q - coeffs.c_g << ", dkappa=" << kappa_q - coeffs.kappa
        << ", dkappa_s=" << kappas_q - coeffs.kappa_s
        << ", dalpha=" << alpha_q - scaled.alpha << ")";
    throw std::runtime_error(msg.str());
  }
  (void)split;
  return scaled;
}

CmeResidual cme_residual(const EnvelopePair& env, const CmeCoefficients& coeffs) {
  const Eigen::Index nT = env.T.size();
  const Eigen::Index nX = env.X.size();
  if (nT < 5 || nX < 5)
    throw std::invalid_argument("cme_residual: need at least 5 points per direction");
  if (env.A_plus.rows() != nT || env.A_plus.cols() != nX ||
      env.A_minus.rows() != nT || env.A_minus.cols() != nX)
    throw std::invalid_argument("cme_residual: envelope/grid shape mismatch");

  // envelope width resolution check: at least 5 points above half maximum
  const Eigen::Index mid = nT / 2;
  double amax = 0.0;
  for (Eigen::Index j = 0; j < nX; ++j)
    amax = std::max(amax, std::abs(env.A_plus(mid, j)) + std::abs(env.A_minus(mid, j)));
  Eigen::Index above = 0;
  for (Eigen::Index j = 0; j < nX; ++j)
    if (std::abs(env.A_plus(mid, j)) + std::abs(env.A_minus(mid, j)) >= 0.5 * amax) ++above;
  if (amax > 0.0 && above < 5)
    throw std::invalid_argument("cme_residual: grid too coarse for the envelope width");

  const double dX = env.X[1] - env.X[0];
  const double dT = env.T[1] - env.T[0];

  auto d4_x = [&](const Eigen::MatrixXcd& F, Eigen::Index t, Eigen::Index j) {
    return (-F(t, j + 2) + 8.0 * F(t, j + 1) - 8.0 * F(t, j - 1) + F(t, j - 2)) / (12.0 * dX);
  };
  auto d4_t = [&](const Eigen::MatrixXcd& F, Eigen::Index t, Eigen::Index j) {
    return (-F(t + 2, j) + 8.0 * F(t + 1, j) - 8.0 * F(t - 1, j) + F(t - 2, j)) / (12.0 * dT);
  };

  CmeResidual res;
  res.r_plus.resize(nT - 4, nX - 4);
  res.r_minus.resize(nT - 4, nX - 4);
  res.max_amplitude =
      std::max(env.A_plus.cwiseAbs().maxCoeff(), env.A_minus.cwiseAbs().maxCoeff());

  const complexd beta_c = std::conj(coeffs.beta);
  const complexd gamma_c = std::conj(coeffs.gamma);
  for (Eigen::Index t = 2; t < nT - 2; ++t) {
    for (Eigen::Index j = 2; j < nX - 2; ++j) {
      const complexd Ap = env.A_plus(t, j);
      const complexd Am = env.A_minus(t, j);
      const double ap2 = std::norm(Ap), am2 = std::norm(Am);
      const complexd r1 = I * (d4_t(env.A_plus, t, j) + coeffs.c_g * d4_x(env.A_plus, t, j)) +
                          coeffs.kappa * Am + coeffs.kappa_s * Ap +
                          coeffs.alpha * (ap2 + 2.0 * am2) * Ap +
                          coeffs.beta * (am2 + 2.0 * ap2) * Am +
                          beta_c * Ap * Ap * std::conj(Am) +
                          coeffs.gamma * Am * Am * std::conj(Ap);
      const complexd r2 = I * (d4_t(env.A_minus, t, j) - coeffs.c_g * d4_x(env.A_minus, t, j)) +
                          coeffs.kappa * Ap + coeffs.kappa_s * Am +
                          coeffs.alpha * (am2 + 2.0 * ap2) * Am +
                          beta_c * (ap2 + 2.0 * am2) * Ap +
                          coeffs.beta * Am * Am * std::conj(Ap) +
                          gamma_c * Ap * Ap * std::conj(Am);
      res.r_plus(t - 2, j - 2) = r1;
      res.r_minus(t - 2, j - 2) = r2;
      res.sup_plus = std::max(res.sup_plus, std::abs(r1));
      res.sup_minus = std::max(res.sup_minus, std::abs(r2));
    }
  }
  return res;
}

}  // namespace cmewave
