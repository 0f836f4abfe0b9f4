#include "cmewave/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "cmewave/cme.hpp"

namespace cmewave {

namespace {

constexpr double pi = std::numbers::pi;

int harmonic_offset(const PeriodicFunction& v, int n) {
  const Wavenumber off = v.base().times(n);
  if (!off.is_integer())
    throw std::invalid_argument("bloch: potential harmonic off the lattice (non-integer offset)");
  return static_cast<int>(off.as_integer());
}

}  // namespace

Eigen::MatrixXcd assemble_bloch_matrix(const BlochProblem& problem, double khat) {
  if (std::abs(khat) > 0.5 + 1e-12)
    throw std::invalid_argument("assemble_bloch_matrix: k outside the closed Brillouin zone");
  const int M = problem.plane_wave_cutoff;
  if (M < 8) throw std::invalid_argument("assemble_bloch_matrix: plane_wave_cutoff < 8");
  const double unit = problem.lattice_unit();
  const int size = 2 * M + 1;

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    const double m = static_cast<double>(i - M);
    A(i, i) = ((khat + m) * unit) * ((khat + m) * unit);
  }
  for (const auto& [n, a] : problem.potential.coeffs()) {
    const int d = harmonic_offset(problem.potential, n);
    for (int j = 0; j < size; ++j) {
      const int i = j + d;
      if (i >= 0 && i < size) A(i, j) += a;
    }
  }
  return A;
}

void solve_at_k(const BlochProblem& problem, double khat,
                Eigen::VectorXd& eigenvalues, Eigen::MatrixXcd& eigenvectors) {
  const Eigen::MatrixXcd A = assemble_bloch_matrix(problem, khat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "bloch eigensolver failed at k=" << khat
        << " (matrix norm " << A.norm() << ", size " << A.rows() << ")";
    throw std::runtime_error(msg.str());
  }
  eigenvalues = es.eigenvalues();
  eigenvectors = es.eigenvectors() / std::sqrt(problem.period);
}

std::vector<double> brillouin_grid(int n, const std::vector<double>& densify_near) {
  std::vector<double> k;
  k.reserve(n);
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) k.push_back(-0.5 + (i + 1) * h);
  for (double c : densify_near) {
    for (int j = -200; j <= 200; ++j) {
      const double kk = c + j * (h / 10.0);
      if (std::abs(kk - c) <= 0.02 && kk > -0.5 && kk <= 0.5) k.push_back(kk);
    }
  }
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-13; }),
          k.end());
  return k;
}

BlochBandSet solve_bands(const BlochProblem& problem, int n_bands,
                         std::vector<double> k_grid, int threads) {
  const int M = problem.plane_wave_cutoff;
  if (n_bands > 2 * M + 1 - 4)
    throw std::invalid_argument("solve_bands: n_bands too close to the plane-wave cutoff");
  if (k_grid.empty()) k_grid = brillouin_grid();
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(k_grid.size())));

  BlochBandSet out;
  out.k_grid = k_grid;
  out.period = problem.period;
  out.m_pw = M;
  const int nk = static_cast<int>(k_grid.size());
  out.omega.resize(nk, n_bands);
  out.vectors.assign(nk, Eigen::MatrixXcd());

  auto work = [&](int begin, int end) {
    Eigen::VectorXd ev;
    Eigen::MatrixXcd vec;
    for (int i = begin; i < end; ++i) {
      solve_at_k(problem, k_grid[i], ev, vec);
      out.omega.row(i) = ev.head(n_bands).transpose();
      out.vectors[i] = vec.leftCols(n_bands);
    }
  };

  if (threads == 1) {
    work(0, nk);
  } else {
    std::vector<std::future<void>> jobs;
    const int chunk = (nk + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int b = t * chunk, e = std::min(nk, b + chunk);
      if (b < e) jobs.push_back(std::async(std::launch::async, work, b, e));
    }
    for (auto& j : jobs) j.get();
  }
  return out;
}

Eigen::VectorXcd conjugate_eigenvector(const Eigen::VectorXcd& coeffs, const Wavenumber& k) {
  const int size = static_cast<int>(coeffs.size());
  const int M = (size - 1) / 2;
  // p e^{ikx} conjugated is a Bloch wave at -k; at k in {0, 1/2} that is the
  // same BZ point, with a one-slot coefficient shift at the edge.
  int shift = 0;
  if (std::abs(k.value() - 0.5) < 1e-12) shift = 1;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size);
  for (int i = 0; i < size; ++i) {
    const int m = i - M;
    const int src = -m - shift;
    if (src >= -M && src <= M) out[i] = std::conj(coeffs[src + M]);
  }
  return out;
}

double group_velocity(const CarrierPair& pair) {
  const int M = pair.m_pw;
  const double unit = pair.lattice_unit();
  const double k_abs = pair.k_plus_abs();
  double acc = 0.0;
  for (int i = 0; i < pair.p_plus.size(); ++i) {
    const double m = static_cast<double>(i - M);
    acc += (k_abs + m * unit) * std::norm(pair.p_plus[i]);
  }
  return 2.0 * pair.period * acc;
}

double group_velocity_fd(const BlochProblem& problem, double khat, int band, double h_lattice) {
  Eigen::VectorXd wp, wm;
  Eigen::MatrixXcd dummy;
  solve_at_k(problem, khat + h_lattice, wp, dummy);
  solve_at_k(problem, khat - h_lattice, wm, dummy);
  return (wp[band - 1] - wm[band - 1]) / (2.0 * h_lattice * problem.lattice_unit());
}

namespace {

// slope operator dL/dk_abs in the plane-wave basis (diagonal)
Eigen::VectorXd slope_diagonal(const BlochProblem& problem, double khat) {
  const int M = problem.plane_wave_cutoff;
  const double unit = problem.lattice_unit();
  Eigen::VectorXd d(2 * M + 1);
  for (int i = 0; i < 2 * M + 1; ++i)
    d[i] = 2.0 * (khat + static_cast<double>(i - M)) * unit;
  return d;
}

std::complex<double> ip_coeff(double period, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return period * a.dot(b);  // Eigen dot conjugates the first argument
}

}  // namespace

CarrierPair select_carrier_pair(const BlochProblem& problem, Wavenumber k0,
                                int band_hint, double gap_tol) {
  const double kv = k0.value();
  if (kv <= -0.5 - 1e-12 || kv > 0.5 + 1e-12)
    throw std::invalid_argument("select_carrier_pair: k0 outside the Brillouin zone");
  const int M = problem.plane_wave_cutoff;
  if (band_hint < 1 || band_hint + 1 > 2 * M + 1 - 4)
    throw std::invalid_argument("select_carrier_pair: band_hint out of the resolved range");

  Eigen::VectorXd ev;
  Eigen::MatrixXcd vec;
  solve_at_k(problem, kv, ev, vec);

  const int h = band_hint - 1;  // 0-based
  const double scale = 1.0 + std::abs(ev[h]);
  const double gap_below = h > 0 ? (ev[h] - ev[h - 1]) / scale : 1e300;
  const double gap_above = (ev[h + 1] - ev[h]) / scale;

  const bool at_edge = std::abs(kv) < 1e-12 || std::abs(kv - 0.5) < 1e-12;

  CarrierPair pair;
  pair.period = problem.period;
  pair.m_pw = M;

  if (at_edge) {
    if (gap_above >= gap_tol) {
      throw DegenerateGapError(
          "select_carrier_pair: no double eigenvalue at the requested edge point",
          gap_below, gap_above);
    }
    if (gap_below < gap_tol * 100.0 && h > 0) {
      throw DegenerateGapError(
          "select_carrier_pair: ambiguous multiplicity (three nearby eigenvalues)",
          gap_below, gap_above);
    }
    // case b: diagonalize the slope operator in the 2D degenerate subspace
    const Eigen::VectorXd dL = slope_diagonal(problem, kv);
    Eigen::Matrix2cd S;
    Eigen::MatrixXcd basis(vec.rows(), 2);
    basis.col(0) = vec.col(h);
    basis.col(1) = vec.col(h + 1);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        S(a, b) = ip_coeff(problem.period, basis.col(a),
                           dL.asDiagonal() * basis.col(b));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(S);
    const double cg = es.eigenvalues()[1];
    if (cg <= gap_tol)
      throw std::runtime_error("select_carrier_pair: crossing is not transversal (c_g ~ 0)");

    pair.case_tag = CarrierCase::DoublePoint;
    pair.k_plus = k0;
    pair.k_minus = k0;
    pair.omega0 = 0.5 * (ev[h] + ev[h + 1]);
    pair.band_index = band_hint;
    pair.p_plus = basis * es.eigenvectors().col(1);
    pair.p_minus = conjugate_eigenvector(pair.p_plus, k0);
    pair.c_g = cg;

    // the conjugate must be the -c_g curve member (checks the relabeling and
    // realizes the transversal-crossing labeling without symbolic analysis)
    const std::complex<double> sm =
        ip_coeff(problem.period, pair.p_minus, dL.asDiagonal() * pair.p_minus);
    if (std::abs(sm.real() + cg) > 1e-8 * (1.0 + cg))
      throw std::runtime_error("select_carrier_pair: conjugate pair slope mismatch");

    // local continuity (H1) near the crossing: the +c_g member continues to
    // the upper of the two curves on the k side inside the zone
    const double dk = 1e-3;
    const bool right_edge = std::abs(kv - 0.5) < 1e-12;
    const double probe = right_edge ? kv - dk : kv + dk;
    const int cont_idx = right_edge ? h : h + 1;
    Eigen::VectorXd evp;
    Eigen::MatrixXcd vecp;
    solve_at_k(problem, probe, evp, vecp);
    const double overlap =
        std::abs(ip_coeff(problem.period, vecp.col(cont_idx), pair.p_plus));
    if (overlap < 0.9)
      throw std::runtime_error("select_carrier_pair: eigenvector continuity check failed");
    return pair;
  }

  // interior point: needs a clearly simple eigenvalue
  if (std::min(gap_below, gap_above) < gap_tol * 100.0) {
    throw DegenerateGapError(
        "select_carrier_pair: ambiguous multiplicity at interior k0",
        gap_below, gap_above);
  }
  if (kv < 0.0)
    throw std::invalid_argument("select_carrier_pair: choose k0 in (0, 1/2) for case a");

  pair.case_tag = CarrierCase::SimplePair;
  pair.k_plus = k0;
  pair.k_minus = k0.exact() ? Wavenumber(k0.rational() * -1) : Wavenumber(-kv);
  pair.omega0 = ev[h];
  pair.band_index = band_hint;
  pair.p_plus = vec.col(h);
  pair.p_minus = conjugate_eigenvector(pair.p_plus, pair.k_plus);
  pair.c_g = group_velocity(pair);
  return pair;
}

CarrierPair fix_phases(const CarrierPair& pair, const WSplitting& split) {
  const PeriodicFunction& coupling =
      pair.case_tag == CarrierCase::SimplePair ? split.w2_plus : split.w1;

  const PeriodCell cell = make_period_cell(pair.period);
  const Eigen::VectorXcd pp = sample_planewave(pair.p_plus, pair.m_pw, pair.lattice_unit(), cell.x);
  const Eigen::VectorXcd pm = sample_planewave(pair.p_minus, pair.m_pw, pair.lattice_unit(), cell.x);
  const Eigen::VectorXcd w = coupling.evaluate(cell.x);

  const std::complex<double> z0 = inner_product(w.cwiseProduct(pp), pm, cell.dx);
  if (std::abs(z0) < 1e-12)
    throw std::runtime_error("fix_phases: no coupling; gap condition fails");

  // p+ -> e^{i phi} p+ sends z to e^{-2 i phi} z; pick z = -|z| so kappa >= 0
  const double phi = 0.5 * (std::arg(z0) - pi);
  const std::complex<double> rot = std::exp(std::complex<double>(0.0, phi));

  CarrierPair fixed = pair;
  fixed.p_plus = pair.p_plus * rot;
  fixed.p_minus = conjugate_eigenvector(fixed.p_plus, fixed.k_plus);
  fixed.phases_fixed = true;
  return fixed;
}

}  // namespace cmewave
