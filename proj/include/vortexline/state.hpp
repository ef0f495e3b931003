#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vortexline/grid.hpp"

namespace vortexline {

using cdouble = std::complex<double>;

// Dimensional constants of the fluid model. log_eps stores the value of the
// logarithmic prefactor itself, not its argument. core_radius enters only
// the direct Biot-Savart summation.
struct FluidParams {
  double circulation = 1.0;   // Gamma, m^2/s
  double density = 1.0;       // rho, kg/m^3
  double log_eps = 0.8;       // dimensionless
  double core_radius = 1e-4;  // sigma_c, m

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!std::isfinite(v) || v <= 0.0)
        throw std::invalid_argument(std::string("FluidParams: ") + name +
                                    " must be positive and finite");
    };
    positive(circulation, "circulation");
    positive(density, "density");
    positive(log_eps, "log_eps");
    positive(core_radius, "core_radius");
  }

  // Gamma*log_eps/(4 pi), the coefficient of the local-induction velocity law
  double lia_coefficient() const {
    return circulation * log_eps / (4.0 * std::numbers::pi);
  }
};

// Transverse filament displacement sampled on the periodic grid,
// psi_j = x_j + i*y_j at z_j = j*dz. Immutable value after construction.
struct FilamentState {
  ZGrid grid;
  std::vector<cdouble> psi;
  double time = 0.0;

  FilamentState(ZGrid g, std::vector<cdouble> samples, double t = 0.0)
      : grid(g), psi(std::move(samples)), time(t) {
    if (static_cast<int>(psi.size()) != grid.count)
      throw std::invalid_argument(
          "FilamentState: sample count " + std::to_string(psi.size()) +
          " does not match grid count " + std::to_string(grid.count));
    for (const cdouble& v : psi)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("FilamentState: non-finite sample");
  }
};

// Helical traveling-wave family psi(z) = amplitude * exp(i*(k z + phase)),
// k = 2*pi*mode/length.
struct KelvinWaveSpec {
  double amplitude = 0.0;  // m, >= 0
  int mode = 0;
  double phase = 0.0;  // radians
};

inline FilamentState make_kelvin_wave(const KelvinWaveSpec& spec,
                                      const ZGrid& grid) {
  if (!std::isfinite(spec.amplitude) || spec.amplitude < 0.0)
    throw std::invalid_argument("make_kelvin_wave: amplitude must be >= 0");
  if (std::abs(spec.mode) > grid.count / 2 - 1)
    throw std::invalid_argument(
        "make_kelvin_wave: mode " + std::to_string(spec.mode) +
        " not resolvable on a grid of " + std::to_string(grid.count) +
        " points (|mode| must be <= " + std::to_string(grid.count / 2 - 1) +
        ")");
  const double k = grid.wavenumber(spec.mode);
  std::vector<cdouble> psi(grid.count);
  for (int j = 0; j < grid.count; ++j) {
    const double arg = k * grid.z(j) + spec.phase;
    psi[j] = spec.amplitude * cdouble(std::cos(arg), std::sin(arg));
  }
  return FilamentState(grid, std::move(psi), 0.0);
}

// Swept volume pi * sum |psi_j|^2 dz of the tube traced by the filament.
inline double volume(const FilamentState& s) {
  double sum = 0.0;
  for (const cdouble& v : s.psi) sum += std::norm(v);
  return std::numbers::pi * sum * s.grid.dz();
}

// Rescale so that sum |psi_j|^2 dz = 1; undefined for the straight line.
inline FilamentState normalize(const FilamentState& s) {
  const double vol = volume(s);
  if (vol <= 0.0)
    throw std::invalid_argument(
        "normalize: zero-volume state (straight line) cannot be normalized");
  const double factor = std::sqrt(std::numbers::pi / vol);
  std::vector<cdouble> psi(s.psi);
  for (cdouble& v : psi) v *= factor;
  return FilamentState(s.grid, std::move(psi), s.time);
}

// Subtract the discrete mean so the centerline of the helix is the z-axis.
inline FilamentState recenter(const FilamentState& s) {
  cdouble mean(0.0, 0.0);
  for (const cdouble& v : s.psi) mean += v;
  mean /= static_cast<double>(s.grid.count);
  std::vector<cdouble> psi(s.psi);
  for (cdouble& v : psi) v -= mean;
  return FilamentState(s.grid, std::move(psi), s.time);
}

}  // namespace vortexline
