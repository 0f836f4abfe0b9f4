#pragma once

#include <string>
#include <vector>

#include "cmewave/pnls.hpp"
#include "cmewave/setups.hpp"
#include "cmewave/soliton.hpp"

namespace cmewave {

/// Wavepacket ansatz sqrt(eps) e^{-i omega0 t} (A+ p+ e^{i k+ x} + A- p- e^{i k- x})
/// with the envelopes taken from the explicit soliton family at the exact
/// slow variables (X, T) = (eps x, eps t).
struct AnsatzSpec {
  CarrierPair pair;
  SolitonParams soliton;
  double epsilon = 0.0;
};

Eigen::VectorXcd build_uapp(const AnsatzSpec& spec, const Eigen::VectorXd& x, double t);

/// Rational-case construction through the Q-cell functions q_pm (agrees
/// with build_uapp to 1e-10 for rational k_pm; cross-check path).
Eigen::VectorXcd build_uapp_qform(const AnsatzSpec& spec, const Eigen::VectorXd& x, double t);

/// Ansatz from tabulated envelopes: T must match a tabulated slice, X is
/// linearly interpolated; errors out when the grid does not cover eps*x.
struct TabulatedAnsatzSpec {
  CarrierPair pair;
  EnvelopePair envelopes;
  double epsilon = 0.0;
};

Eigen::VectorXcd build_uapp(const TabulatedAnsatzSpec& spec, const Eigen::VectorXd& x, double t);

double sup_error(const Eigen::VectorXcd& u, const Eigen::VectorXcd& uapp);

struct ConvergenceRun {
  double epsilon = 0.0;
  double sup_err = 0.0;
  double t_end = 0.0;
  double mass_drift = 0.0;
  double dx = 0.0;
  double domain_length = 0.0;
  int grid_n = 0;
  long long steps = 0;
  double boundary_tail = 0.0;  // |u| at the domain edge (diagnostic)
};

struct ConvergenceReport {
  std::string setup_id;
  std::vector<ConvergenceRun> runs;  // sorted by epsilon
  double fitted_rate = 0.0;
  double fit_residual = 0.0;  // RMS deviation of the log-log fit
  bool monotone = false;
  bool window_pass = false;
  double rate_min = 0.0, rate_max = 0.0;
  bool caveat_beta_gamma = false;  // envelope substitutes beta = gamma = 0
};

/// One PDE run: start from u_app(.,0), integrate to t_end = t_factor/eps,
/// compare against u_app(.,t_end) built from the exact envelopes.
ConvergenceRun run_epsilon(const NamedSetup& setup, const SetupArtifacts& art, double eps);

/// The eps-sweep; independent runs execute concurrently (threads <= 0 picks
/// the hardware count). Least-squares rate fit in log-log coordinates.
ConvergenceReport convergence_study(const NamedSetup& setup, const SetupArtifacts& art,
                                    std::vector<double> epsilons = {}, int threads = 0);

/// Case-(b) study with the explicit-soliton envelope substitute (beta and
/// gamma dropped); relaxed acceptance rate >= rate_min and a caveat flag.
ConvergenceReport case_b_study(const NamedSetup& setup, const SetupArtifacts& art,
                               std::vector<double> epsilons = {}, int threads = 0);

/// Simulation domain for a given setup/epsilon: 20 soliton decay lengths
/// plus travel margin, rounded up to the commensurate cell, grid size
/// FFT-friendly with dx within 1% of the 0.05 target.
SimulationConfig make_simulation_config(const NamedSetup& setup, const SetupArtifacts& art,
                                        double eps);

}  // namespace cmewave
