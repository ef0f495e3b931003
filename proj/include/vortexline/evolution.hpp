#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexline/spectral.hpp"
#include "vortexline/state.hpp"

namespace vortexline {

enum class Scheme { linear_spectral, nonlinear_rk4 };

struct SolverConfig {
  double dt = 1e-3;  // seconds
  long steps = 1;
  Scheme scheme = Scheme::linear_spectral;
  bool dealias = true;  // 2/3 rule for the nonlinear term

  void validate() const {
    if (!std::isfinite(dt) || dt <= 0.0)
      throw std::invalid_argument("SolverConfig: dt must be positive");
    if (steps < 1)
      throw std::invalid_argument("SolverConfig: steps must be >= 1");
    if (!std::isfinite(dt * static_cast<double>(steps)))
      throw std::invalid_argument("SolverConfig: total time not finite");
  }
};

// Angular frequency of mode k under the linearized dispersion,
// omega_l = c k^2 with c = Gamma*log_eps/(4 pi).
inline double omega_linear(double k, const FluidParams& params) {
  return params.lia_coefficient() * k * k;
}

// Amplitude-dependent frequency of a helix of radius a,
// omega_n = c k^2 / sqrt(1 + a^2 k^2).
inline double omega_nonlinear(double a, double k, const FluidParams& params) {
  return omega_linear(k, params) / std::sqrt(1.0 + a * a * k * k);
}

struct DispersionPoint {
  double k = 0.0;
  double omega_n = 0.0;
  double omega_l = 0.0;
  double amplitude = 0.0;
};

inline DispersionPoint dispersion(double a, double k,
                                  const FluidParams& params) {
  params.validate();
  if (a < 0.0 || k < 0.0)
    throw std::invalid_argument("dispersion: a and k must be >= 0");
  DispersionPoint p;
  p.k = k;
  p.amplitude = a;
  p.omega_l = omega_linear(k, params);
  p.omega_n = omega_nonlinear(a, k, params);
  return p;
}

// Exact spectral step of the linear equation: every Fourier coefficient is
// multiplied by exp(-i omega_l(k_m) dt). Unitary in the discrete 2-norm.
inline FilamentState step_linear(const FilamentState& s,
                                 const FluidParams& params, double dt) {
  params.validate();
  std::vector<cdouble> hat = fft(s.psi);
  for (int bin = 0; bin < s.grid.count; ++bin) {
    const double k = s.grid.wavenumber(s.grid.mode_of_bin(bin));
    const double w = omega_linear(k, params);
    hat[bin] *= cdouble(std::cos(w * dt), -std::sin(w * dt));
  }
  std::vector<cdouble> out = ifft(std::move(hat));
  for (const cdouble& v : out)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::runtime_error("step_linear: non-finite sample after step");
  return FilamentState(s.grid, std::move(out), s.time + dt);
}

namespace detail {

// Right-hand side of the nonlinear local-induction equation,
//   dpsi/dt = i c ( psi' / sqrt(1 + |psi'|^2) )',
// with spectral derivatives; optional 2/3-rule dealiasing of the
// nonlinear factor.
inline std::vector<cdouble> nonlinear_rhs(const std::vector<cdouble>& psi,
                                          const ZGrid& grid,
                                          const FluidParams& params,
                                          bool dealias) {
  const double c = params.lia_coefficient();
  std::vector<cdouble> hat = fft(psi);
  if (dealias) apply_dealias_mask(hat, grid);
  // first derivative in place on the (possibly masked) spectrum
  std::vector<cdouble> dhat(hat);
  for (int bin = 0; bin < grid.count; ++bin) {
    if (bin == grid.count / 2) {
      dhat[bin] = 0.0;
      continue;
    }
    const double k = grid.wavenumber(grid.mode_of_bin(bin));
    dhat[bin] *= cdouble(0.0, k);
  }
  std::vector<cdouble> dpsi = ifft(std::move(dhat));
  for (cdouble& v : dpsi) v /= std::sqrt(1.0 + std::norm(v));
  std::vector<cdouble> ghat = fft(std::move(dpsi));
  if (dealias) apply_dealias_mask(ghat, grid);
  for (int bin = 0; bin < grid.count; ++bin) {
    if (bin == grid.count / 2) {
      ghat[bin] = 0.0;
      continue;
    }
    const double k = grid.wavenumber(grid.mode_of_bin(bin));
    ghat[bin] *= cdouble(0.0, k) * cdouble(0.0, c);
  }
  return ifft(std::move(ghat));
}

}  // namespace detail

// One classical fourth-order Runge-Kutta step of the nonlinear equation.
// Stable for dt below roughly 2.8 / omega_l(k_max); throws if the step
// produces non-finite samples (blow-up).
inline FilamentState step_nonlinear(const FilamentState& s,
                                    const FluidParams& params, double dt,
                                    bool dealias = true) {
  params.validate();
  if (!std::isfinite(dt) || dt <= 0.0)
    throw std::invalid_argument("step_nonlinear: dt must be positive");
  const std::size_t n = s.psi.size();
  auto rhs = [&](const std::vector<cdouble>& psi) {
    return detail::nonlinear_rhs(psi, s.grid, params, dealias);
  };
  std::vector<cdouble> k1 = rhs(s.psi);
  std::vector<cdouble> tmp(n);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = s.psi[j] + 0.5 * dt * k1[j];
  std::vector<cdouble> k2 = rhs(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = s.psi[j] + 0.5 * dt * k2[j];
  std::vector<cdouble> k3 = rhs(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = s.psi[j] + dt * k3[j];
  std::vector<cdouble> k4 = rhs(tmp);
  std::vector<cdouble> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = s.psi[j] +
             (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    if (!std::isfinite(out[j].real()) || !std::isfinite(out[j].imag()))
      throw std::runtime_error("step_nonlinear: non-finite sample after step "
                               "(blow-up; reduce dt)");
  }
  return FilamentState(s.grid, std::move(out), s.time + dt);
}

// Time for the linear and nonlinear phases of a helix (a, k) to drift apart
// by pi/2:  T0 = 2 pi^2 / (k^2 Gamma log_eps (1 - 1/sqrt(1 + a^2 k^2))).
inline double characteristic_time(double a, double k,
                                  const FluidParams& params) {
  params.validate();
  if (!(a > 0.0) || !(k > 0.0))
    throw std::invalid_argument(
        "characteristic_time: requires a > 0 and k > 0 (phases never diverge "
        "otherwise)");
  const double ak2 = a * a * k * k;
  const double denom = k * k * params.circulation * params.log_eps *
                       (1.0 - 1.0 / std::sqrt(1.0 + ak2));
  return 2.0 * std::numbers::pi * std::numbers::pi / denom;
}

// Largest helix radius whose nonlinear phase stays within pi/2 of the linear
// one up to the horizon T0:
//   a < 2 pi sqrt(k^2 T0 Gamma log_eps - pi^2) / (k (k^2 T0 Gamma log_eps - 2 pi^2)).
inline double llia_amplitude_bound(double k, double t0,
                                   const FluidParams& params) {
  params.validate();
  if (!(k > 0.0) || !(t0 > 0.0))
    throw std::invalid_argument("llia_amplitude_bound: k > 0 and T0 > 0");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double d = k * k * t0 * params.circulation * params.log_eps;
  if (!(d > 2.0 * pi2))
    throw std::invalid_argument(
        "llia_amplitude_bound: k^2 T0 Gamma log_eps = " + std::to_string(d) +
        " must exceed 2 pi^2 = " + std::to_string(2.0 * pi2));
  return 2.0 * std::numbers::pi * std::sqrt(d - pi2) / (k * (d - 2.0 * pi2));
}

// Accumulated rotation phases of the dominant mode under the linear and
// nonlinear flows, sampled once per step. Phases are unwrapped and count
// rotation as positive, so gap(t) = phase_linear - phase_nonlinear grows
// like (omega_l - omega_n) t.
struct PhaseSeries {
  std::vector<double> t;
  std::vector<double> phase_linear;
  std::vector<double> phase_nonlinear;

  double gap(std::size_t i) const { return phase_linear[i] - phase_nonlinear[i]; }
};

namespace detail {

class PhaseTracker {
 public:
  explicit PhaseTracker(const cdouble& c0) : prev_arg_(std::arg(c0)) {}

  // accumulated -delta(arg), unwrapped step by step
  double update(const cdouble& c) {
    const double a = std::arg(c);
    double delta = a - prev_arg_;
    while (delta > std::numbers::pi) delta -= 2.0 * std::numbers::pi;
    while (delta < -std::numbers::pi) delta += 2.0 * std::numbers::pi;
    accumulated_ -= delta;
    prev_arg_ = a;
    return accumulated_;
  }

  double accumulated() const { return accumulated_; }

 private:
  double prev_arg_;
  double accumulated_ = 0.0;
};

}  // namespace detail

// Evolve one Kelvin wave under both steppers and record the accumulated
// phase of its dominant Fourier coefficient after every step.
inline PhaseSeries phase_divergence_experiment(const KelvinWaveSpec& spec,
                                               const FluidParams& params,
                                               const ZGrid& grid,
                                               const SolverConfig& config) {
  params.validate();
  config.validate();
  FilamentState lin = make_kelvin_wave(spec, grid);
  FilamentState non = lin;
  const int bin = spec.mode >= 0 ? spec.mode : grid.count + spec.mode;

  PhaseSeries series;
  series.t.reserve(config.steps + 1);
  series.phase_linear.reserve(config.steps + 1);
  series.phase_nonlinear.reserve(config.steps + 1);
  series.t.push_back(0.0);
  series.phase_linear.push_back(0.0);
  series.phase_nonlinear.push_back(0.0);

  if (spec.amplitude == 0.0) {
    // straight line: both flows are fixed points, the gap is identically zero
    for (long i = 1; i <= config.steps; ++i) {
      series.t.push_back(i * config.dt);
      series.phase_linear.push_back(0.0);
      series.phase_nonlinear.push_back(0.0);
    }
    return series;
  }

  detail::PhaseTracker track_lin(fft(lin.psi)[bin]);
  detail::PhaseTracker track_non(fft(non.psi)[bin]);
  for (long i = 1; i <= config.steps; ++i) {
    try {
      lin = step_linear(lin, params, config.dt);
      non = step_nonlinear(non, params, config.dt, config.dealias);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("phase_divergence_experiment: step " +
                               std::to_string(i) + ": " + e.what());
    }
    series.t.push_back(i * config.dt);
    series.phase_linear.push_back(track_lin.update(fft(lin.psi)[bin]));
    series.phase_nonlinear.push_back(track_non.update(fft(non.psi)[bin]));
  }
  return series;
}

}  // namespace vortexline
