#include "cmewave/pnls.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cmewave {

namespace {

constexpr std::complex<double> I{0.0, 1.0};
std::mutex fftw_plan_mutex;  // FFTW plan creation is not thread-safe

void check_commensurate(const char* name, const PeriodicFunction& f, double length) {
  if (f.empty()) return;
  bool constant_only = true;
  for (const auto& [n, a] : f.coeffs())
    if (n != 0 && std::abs(a) > 0.0) constant_only = false;
  if (constant_only) return;
  const double periods = length * f.base_abs() / (2.0 * std::numbers::pi);
  if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods)) {
    std::ostringstream msg;
    msg << "pnls: domain length " << length << " is not commensurate with the period of "
        << name << " (" << periods << " periods)";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

int SimulationConfig::grid_size() const {
  const double n_real = 2.0 * half_length / dx;
  const int n = static_cast<int>(std::llround(n_real));
  if (n < 4 || std::abs(n_real - n) > 1e-6)
    throw std::invalid_argument("SimulationConfig: 2L/dx must be a (reasonably sized) integer");
  return n;
}

int next_fft_friendly(int n) {
  for (int c = std::max(n, 1);; ++c) {
    int r = c;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return c;
  }
}

struct SplitStepSolver::FftwState {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  ~FftwState() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
};

SplitStepSolver::SplitStepSolver(const SimulationConfig& config) {
  n_ = config.grid_size();
  dx_ = 2.0 * config.half_length / n_;
  const double L = config.half_length;

  check_commensurate("V", config.V, 2.0 * L);
  check_commensurate("W", config.W, 2.0 * L);
  check_commensurate("sigma", config.sigma, 2.0 * L);

  x_.resize(n_);
  for (int j = 0; j < n_; ++j) x_[j] = -L + j * dx_;

  veff_ = config.V.evaluate_real(x_);
  if (!config.W.empty() && config.epsilon != 0.0)
    veff_ += config.epsilon * config.W.evaluate_real(x_);
  sigma_x_ = config.sigma.evaluate_real(x_);

  xi2_.resize(n_);
  const double dxi = 2.0 * std::numbers::pi / (2.0 * L);
  for (int j = 0; j < n_; ++j) {
    const int m = j <= n_ / 2 ? j : j - n_;
    xi2_[j] = (dxi * m) * (dxi * m);
  }

  fftw_ = std::make_unique<FftwState>();
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_->buf = fftw_alloc_complex(n_);
    // FFTW_ESTIMATE: deterministic plans (no runtime measurement)
    fftw_->fwd = fftw_plan_dft_1d(n_, fftw_->buf, fftw_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_->bwd = fftw_plan_dft_1d(n_, fftw_->buf, fftw_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!fftw_->fwd || !fftw_->bwd) throw std::runtime_error("pnls: FFTW planning failed");
}

SplitStepSolver::~SplitStepSolver() = default;

SimulationState SplitStepSolver::initial_state(const Eigen::VectorXcd& u0) const {
  if (u0.size() != n_) throw std::invalid_argument("pnls: initial data off the grid");
  SimulationState s;
  s.x = x_;
  s.u = u0;
  s.t = 0.0;
  s.mass = mass_of(u0);
  return s;
}

double SplitStepSolver::mass_of(const Eigen::VectorXcd& u) const {
  return u.squaredNorm() * dx_;
}

void SplitStepSolver::fft_forward() { fftw_execute(fftw_->fwd); }
void SplitStepSolver::fft_inverse() { fftw_execute(fftw_->bwd); }

void SplitStepSolver::kinetic_half_step(SimulationState& state, double dt_half) {
  if (dt_half != cached_half_dt_) {
    kinetic_phase_.resize(n_);
    const double inv_n = 1.0 / n_;  // fold the FFT normalization into the phase
    for (int j = 0; j < n_; ++j)
      kinetic_phase_[j] = std::exp(-I * (xi2_[j] * dt_half)) * inv_n;
    cached_half_dt_ = dt_half;
  }
  auto* buf = reinterpret_cast<std::complex<double>*>(fftw_->buf);
  for (int j = 0; j < n_; ++j) buf[j] = state.u[j];
  fft_forward();
  for (int j = 0; j < n_; ++j) buf[j] *= kinetic_phase_[j];
  fft_inverse();
  for (int j = 0; j < n_; ++j) state.u[j] = buf[j];
}

void SplitStepSolver::potential_nonlinear_step(SimulationState& state, double dt) {
  for (int j = 0; j < n_; ++j) {
    const double phase = (veff_[j] + sigma_x_[j] * std::norm(state.u[j])) * dt;
    state.u[j] *= std::exp(-I * phase);
  }
}

void SplitStepSolver::strang_step(SimulationState& state, double dt) {
  kinetic_half_step(state, dt / 2.0);
  potential_nonlinear_step(state, dt);
  kinetic_half_step(state, dt / 2.0);
  state.t += dt;
}

Trajectory simulate(const SimulationConfig& config, const Eigen::VectorXcd& u0,
                    const std::vector<double>& snapshot_times) {
  SplitStepSolver solver(config);
  SimulationState state = solver.initial_state(u0);
  const double mass0 = state.mass;
  if (!(mass0 >= 0.0) || !std::isfinite(mass0))
    throw std::invalid_argument("simulate: non-finite initial data");

  Trajectory out;
  long long step_index = 0;
  for (double target : snapshot_times) {
    if (target < state.t - 1e-12)
      throw std::invalid_argument("simulate: snapshot times must be nondecreasing");
    double adjusted = config.dt;
    while (state.t < target - 1e-12) {
      double dt = config.dt;
      if (state.t + dt > target + 1e-12) {
        dt = target - state.t;  // final-substep adjustment, not interpolation
        adjusted = dt;
      }
      solver.strang_step(state, dt);
      ++step_index;
      if (step_index % 512 == 0 && !state.u.allFinite()) {
        std::ostringstream msg;
        msg << "simulate: non-finite field at step " << step_index << " (t=" << state.t << ")";
        throw std::runtime_error(msg.str());
      }
    }
    state.t = target;
    if (!state.u.allFinite()) {
      std::ostringstream msg;
      msg << "simulate: non-finite field at step " << step_index << " (t=" << state.t << ")";
      throw std::runtime_error(msg.str());
    }
    state.mass = solver.mass_of(state.u);
    if (mass0 > 0.0)
      out.max_mass_drift = std::max(out.max_mass_drift, std::abs(state.mass - mass0) / mass0);
    out.snapshots.push_back(state);
    out.adjusted_final_dt.push_back(adjusted);
  }
  out.steps_taken = step_index;
  return out;
}

}  // namespace cmewave
