#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cmewave/periodic_function.hpp"

namespace cmewave {

struct SimulationConfig {
  double half_length = 0.0;  // domain [-L, L), periodic
  double dx = 0.05;
  double dt = 0.02;
  double epsilon = 0.0;
  double t_end = 0.0;
  PeriodicFunction V, W, sigma;

  int grid_size() const;  // 2L/dx, validated integer
};

struct SimulationState {
  Eigen::VectorXd x;
  Eigen::VectorXcd u;
  double t = 0.0;
  double mass = 0.0;  // discrete ||u||_2^2
};

/// Smallest 7-smooth integer >= n (FFT-friendly transform length).
int next_fft_friendly(int n);

/// Strang splitting for i u_t + u_xx - (V + eps W) u - sigma |u|^2 u = 0 on
/// a uniform periodic grid: exact Fourier phase for the kinetic flow, exact
/// pointwise phase rotation for the potential+nonlinear flow. Both substeps
/// preserve the discrete l2 norm to roundoff.
class SplitStepSolver {
 public:
  explicit SplitStepSolver(const SimulationConfig& config);
  ~SplitStepSolver();
  SplitStepSolver(const SplitStepSolver&) = delete;
  SplitStepSolver& operator=(const SplitStepSolver&) = delete;

  SimulationState initial_state(const Eigen::VectorXcd& u0) const;
  const Eigen::VectorXd& grid() const { return x_; }

  void kinetic_half_step(SimulationState& state, double dt_half);
  void potential_nonlinear_step(SimulationState& state, double dt);
  void strang_step(SimulationState& state, double dt);

  double mass_of(const Eigen::VectorXcd& u) const;

 private:
  void fft_forward();
  void fft_inverse();

  int n_ = 0;
  double dx_ = 0.0;
  Eigen::VectorXd x_, veff_, sigma_x_, xi2_;
  double cached_half_dt_ = -1.0;
  Eigen::VectorXcd kinetic_phase_;
  struct FftwState;
  std::unique_ptr<FftwState> fftw_;
};

struct Trajectory {
  std::vector<SimulationState> snapshots;  // one per requested time, in order
  double max_mass_drift = 0.0;             // relative to the initial mass
  std::vector<double> adjusted_final_dt;   // per snapshot segment
  long long steps_taken = 0;
};

/// Deterministic stepping with snapshots at the requested times (hit
/// exactly via final-substep adjustment). Aborts with the offending step
/// index when the field stops being finite.
Trajectory simulate(const SimulationConfig& config, const Eigen::VectorXcd& u0,
                    const std::vector<double>& snapshot_times);

}  // namespace cmewave
