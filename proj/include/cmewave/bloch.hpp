#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cmewave/periodic_function.hpp"

namespace cmewave {

struct WSplitting;  // cme module

/// Bloch eigenproblem -(d/dx + ik)^2 p + V(x) p = omega p on one period,
/// discretized in the plane-wave basis exp(i m (2*pi/P) x), m = -M..M.
///
/// Wavenumbers are carried in lattice units: khat = k / (2*pi/P), so the
/// Brillouin zone is (-1/2, 1/2] for every period. For 2*pi-periodic V the
/// lattice unit is 1 and khat equals the usual k.
struct BlochProblem {
  PeriodicFunction potential;  // harmonics must sit on the lattice (integer offsets)
  double period = 2.0 * 3.14159265358979323846;
  int plane_wave_cutoff = 64;  // M_pw >= 8

  double lattice_unit() const { return 2.0 * 3.14159265358979323846 / period; }
};

struct BlochBandSet {
  std::vector<double> k_grid;                    // lattice units, subset of (-1/2, 1/2]
  Eigen::MatrixXd omega;                         // (nk x n_bands), size-ordered rows
  std::vector<Eigen::MatrixXcd> vectors;         // per k: (2M+1) x n_bands, L2(0,P)-normalized
  double period = 0.0;
  int m_pw = 0;
};

enum class CarrierCase { SimplePair, DoublePoint };

/// The two selected carrier Bloch modes. p_plus/p_minus are plane-wave
/// coefficient vectors of the periodic parts, normalized on (0,P); c_g is
/// the group velocity in absolute units (d omega / d k_abs).
struct CarrierPair {
  CarrierCase case_tag = CarrierCase::SimplePair;
  Wavenumber k_plus, k_minus;  // lattice units
  double omega0 = 0.0;
  int band_index = 0;          // n0 (case a) / n_star (case b), 1-based
  Eigen::VectorXcd p_plus, p_minus;
  double c_g = 0.0;
  double period = 0.0;
  int m_pw = 0;
  bool phases_fixed = false;

  double lattice_unit() const { return 2.0 * 3.14159265358979323846 / period; }
  double k_plus_abs() const { return k_plus.value() * lattice_unit(); }
  double k_minus_abs() const { return k_minus.value() * lattice_unit(); }
};

struct DegenerateGapError : std::runtime_error {
  double gap_below, gap_above;
  DegenerateGapError(const std::string& msg, double below, double above)
      : std::runtime_error(msg), gap_below(below), gap_above(above) {}
};

/// Hermitian plane-wave matrix of the Bloch operator at khat (lattice units).
Eigen::MatrixXcd assemble_bloch_matrix(const BlochProblem& problem, double khat);

/// Eigenpairs at a single k. Eigenvectors come back normalized on (0,P).
void solve_at_k(const BlochProblem& problem, double khat,
                Eigen::VectorXd& eigenvalues, Eigen::MatrixXcd& eigenvectors);

/// Uniform Brillouin-zone grid with n points, right endpoint 1/2 included,
/// densified (x10 spacing) within +-0.02 of each requested center.
std::vector<double> brillouin_grid(int n = 201, const std::vector<double>& densify_near = {});

/// Band structure over a k grid; parallelized over k. n_bands must stay at
/// least 4 bands away from the plane-wave cutoff.
BlochBandSet solve_bands(const BlochProblem& problem, int n_bands,
                         std::vector<double> k_grid = {}, int threads = 0);

/// Selects the carrier pair at k0. Interior k0 must be a simple eigenvalue
/// (case a, with k_- = -k_+ and p_- = conj p_+); k0 in {0, 1/2} with a
/// double eigenvalue at band_hint/band_hint+1 gives case b, where the two
/// eigenvectors are the transversally-crossing curve combinations (slopes
/// -+c_g from first-order degenerate perturbation of dL/dk).
CarrierPair select_carrier_pair(const BlochProblem& problem, Wavenumber k0,
                                int band_hint, double gap_tol = 1e-6);

/// Group velocity by the inner-product formula 2<k p - i p', p> (absolute
/// units); agrees with the finite-difference band slope.
double group_velocity(const CarrierPair& pair);

/// Centered finite-difference band slope d omega / d k_abs (oracle).
double group_velocity_fd(const BlochProblem& problem, double khat, int band,
                         double h_lattice = 1e-5);

/// Fixes the free phase of p_+ so that the coupling inner product (case a:
/// <W2+ p+, p->, case b: <W1 p+, p->) is real, choosing the branch that
/// makes kappa >= 0, and rebuilds p_- from p_+ by conjugation. Throws when
/// the coupling product is below 1e-12 (spectral-gap condition fails).
CarrierPair fix_phases(const CarrierPair& pair, const WSplitting& split);

/// Periodic part of conj(p e^{i k x}) re-expressed at the wavenumber k
/// (valid for k in {0, 1/2} and for negating interior k).
Eigen::VectorXcd conjugate_eigenvector(const Eigen::VectorXcd& coeffs, const Wavenumber& k);

}  // namespace cmewave
