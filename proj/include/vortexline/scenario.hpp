#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexline/config.hpp"
#include "vortexline/correspondence.hpp"
#include "vortexline/evolution.hpp"
#include "vortexline/induction.hpp"
#include "vortexline/io.hpp"
#include "vortexline/observables.hpp"
#include "vortexline/state.hpp"

namespace vortexline {
namespace detail {

inline FilamentState initial_state(const ScenarioConfig& cfg) {
  switch (cfg.init_type) {
    case InitKind::kelvin:
      return make_kelvin_wave(cfg.init_kelvin, cfg.grid);
    case InitKind::wavepacket: {
      WavepacketSpec spec;
      spec.center = cfg.init_center;
      spec.width = cfg.init_width;
      spec.carrier_mode = cfg.init_carrier;
      return make_wavepacket(spec, cfg.grid);
    }
    case InitKind::file: {
      FilamentState s = read_snapshot(cfg.init_path);
      if (!(s.grid == cfg.grid))
        throw std::invalid_argument(
            "init.path: snapshot grid does not match the configured grid");
      return s;
    }
  }
  throw std::logic_error("initial_state: unhandled init type");
}

inline void run_evolve(const ScenarioConfig& cfg, RunRecord& record) {
  record.columns = {"t", "V", "p_z", "L_z", "H", "hbar_eff"};
  FilamentState state = initial_state(cfg);
  auto emit = [&](long step, const FilamentState& s) {
    const ObservableSet o = observe(s, cfg.fluid);
    record.rows.push_back({o.t, o.volume, o.p_z, o.l_z, o.energy, o.hbar_eff});
    if (cfg.output_snapshots) record.snapshots.push_back({step, s});
  };
  emit(0, state);
  for (long i = 1; i <= cfg.solver.steps; ++i) {
    try {
      state = cfg.solver.scheme == Scheme::linear_spectral
                  ? step_linear(state, cfg.fluid, cfg.solver.dt)
                  : step_nonlinear(state, cfg.fluid, cfg.solver.dt,
                                   cfg.solver.dealias);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("evolve: step " + std::to_string(i) + ": " +
                               e.what());
    }
    if (i % cfg.output_cadence == 0) emit(i, state);
  }
}

inline void run_phase_divergence(const ScenarioConfig& cfg, RunRecord& record) {
  record.columns = {"t", "phase_l", "phase_n", "phase_gap"};
  const PhaseSeries series = phase_divergence_experiment(
      cfg.init_kelvin, cfg.fluid, cfg.grid, cfg.solver);
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    if (i % static_cast<std::size_t>(cfg.output_cadence) != 0) continue;
    record.rows.push_back({series.t[i], series.phase_linear[i],
                           series.phase_nonlinear[i], series.gap(i)});
  }
  const double k = cfg.grid.wavenumber(cfg.init_kelvin.mode);
  if (cfg.init_kelvin.amplitude > 0.0 && k != 0.0)
    record.metadata.emplace_back(
        "# characteristic_time",
        format_double(characteristic_time(cfg.init_kelvin.amplitude,
                                          std::abs(k), cfg.fluid)));
}

inline void run_dispersion(const ScenarioConfig& cfg, RunRecord& record) {
  record.columns = {"k", "omega_n", "omega_l"};
  for (int m = 1; m <= cfg.dispersion_max_mode; ++m) {
    const DispersionPoint p = dispersion(
        cfg.dispersion_amplitude, cfg.grid.wavenumber(m), cfg.fluid);
    record.rows.push_back({p.k, p.omega_n, p.omega_l});
  }
  record.metadata.emplace_back("# dispersion.amplitude",
                               format_double(cfg.dispersion_amplitude));
}

inline void run_validity(const ScenarioConfig& cfg, RunRecord& record) {
  record.columns = {"a", "k", "T0", "horizon", "amplitude_bound"};
  const double t0 = characteristic_time(cfg.validity_amplitude,
                                        cfg.validity_wavenumber, cfg.fluid);
  const double bound = llia_amplitude_bound(cfg.validity_wavenumber,
                                            cfg.validity_horizon, cfg.fluid);
  record.rows.push_back({cfg.validity_amplitude, cfg.validity_wavenumber, t0,
                         cfg.validity_horizon, bound});
}

inline void run_observables(const ScenarioConfig& cfg, RunRecord& record) {
  record.columns = {"t",       "V",        "p_z",  "L_z",
                    "H",       "H_full",   "hbar_eff", "m_eff"};
  const FilamentState state = initial_state(cfg);
  const ObservableSet o = observe(state, cfg.fluid);
  record.rows.push_back({o.t, o.volume, o.p_z, o.l_z, o.energy,
                         energy(state, cfg.fluid, EnergyMode::lia), o.hbar_eff,
                         o.m_eff});
}

inline void run_propagate(const ScenarioConfig& cfg, RunRecord& record) {
  record.columns = {"mode", "k", "eigenphase", "expected_phase", "phase_error"};
  const FilamentState state = initial_state(cfg);
  const double vol = volume(state);
  const PropagatorKernel kernel =
      build_kernel(cfg.grid, cfg.propagate_time, cfg.fluid, vol,
                   cfg.propagate_slices);

  std::vector<cdouble> gen(cfg.grid.count);
  for (int n = 0; n < cfg.grid.count; ++n) gen[n] = kernel.at(n, 0);
  const int band = cfg.grid.count / 3;
  for (int m = -band; m <= band; ++m) {
    const cdouble lambda = detail::generator_eigenvalue(gen, cfg.grid, m);
    const double k = cfg.grid.wavenumber(m);
    const double expected =
        std::remainder(-omega_linear(k, cfg.fluid) * cfg.propagate_time,
                       2.0 * std::numbers::pi);
    const double phase = std::arg(lambda);
    const double err = std::abs(
        std::remainder(phase - expected, 2.0 * std::numbers::pi));
    record.rows.push_back({static_cast<double>(m), k, phase, expected, err});
  }

  // cross-check the kernel action against the spectral step on the initial state
  const std::vector<cdouble> via_kernel = kernel.apply(state.psi);
  FilamentState spectral = state;
  for (int s = 0; s < cfg.propagate_slices; ++s)
    spectral = step_linear(spectral, cfg.fluid,
                           cfg.propagate_time / cfg.propagate_slices);
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < cfg.grid.count; ++j) {
    worst = std::max(worst, std::abs(via_kernel[j] - spectral.psi[j]));
    scale = std::max(scale, std::abs(state.psi[j]));
  }
  record.metadata.emplace_back(
      "# max_action_deviation",
      format_double(scale > 0.0 ? worst / scale : worst));
}

inline void run_biot_savart_compare(const ScenarioConfig& cfg,
                                    RunRecord& record) {
  record.columns = {"z", "cosine_similarity", "bs_speed", "lia_speed"};
  const FilamentState state = make_kelvin_wave(cfg.init_kelvin, cfg.grid);
  const Curve3D curve = curve_from_state(state);
  const VelocityField bs =
      biot_savart_velocity(curve, cfg.fluid, cfg.biot_images);
  const VelocityField lia = lia_velocity(state, cfg.fluid);

  double omega_sum = 0.0;
  for (int j = 0; j < cfg.grid.count; ++j) {
    const auto& a = bs.velocities[j];
    const auto& b = lia.velocities[j];
    const double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const double cos_sim = (na > 0.0 && nb > 0.0) ? dot / (na * nb) : 0.0;
    record.rows.push_back({cfg.grid.z(j), cos_sim, na, nb});
    const cdouble vt(a[0], a[1]);
    omega_sum += -std::imag(vt / state.psi[j]);
  }
  const double omega_bs = omega_sum / cfg.grid.count;
  const double k = std::abs(cfg.grid.wavenumber(cfg.init_kelvin.mode));
  const double lambda_fit =
      omega_bs * 4.0 * std::numbers::pi / (cfg.fluid.circulation * k * k) *
      std::sqrt(1.0 + cfg.init_kelvin.amplitude * cfg.init_kelvin.amplitude *
                          k * k);
  record.metadata.emplace_back("# fitted_log_factor",
                               format_double(lambda_fit));
  record.metadata.emplace_back(
      "# ln_inv_k_sigma",
      format_double(std::log(1.0 / (k * cfg.fluid.core_radius))));
}

}  // namespace detail

// Execute one validated scenario. Deterministic: a fixed config always
// produces the same rows and snapshots.
inline RunRecord run_scenario(const ScenarioConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  try {
    switch (cfg.scenario) {
      case ScenarioKind::evolve: detail::run_evolve(cfg, record); break;
      case ScenarioKind::phase_divergence:
        detail::run_phase_divergence(cfg, record);
        break;
      case ScenarioKind::dispersion: detail::run_dispersion(cfg, record); break;
      case ScenarioKind::validity: detail::run_validity(cfg, record); break;
      case ScenarioKind::observables: detail::run_observables(cfg, record); break;
      case ScenarioKind::propagate: detail::run_propagate(cfg, record); break;
      case ScenarioKind::biot_savart_compare:
        detail::run_biot_savart_compare(cfg, record);
        break;
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("scenario '") +
                                to_string(cfg.scenario) + "': " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("scenario '") +
                             to_string(cfg.scenario) + "': " + e.what());
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("# version", kVersionTag);
  meta.emplace_back("# wall_clock_seconds", format_double(elapsed.count()));
  for (const auto& kv : cfg.resolved) meta.emplace_back(kv.first, kv.second);
  for (const auto& kv : record.metadata) meta.emplace_back(kv.first, kv.second);
  record.metadata = std::move(meta);
  return record;
}

}  // namespace vortexline
