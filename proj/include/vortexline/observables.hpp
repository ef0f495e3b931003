#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexline/spectral.hpp"
#include "vortexline/state.hpp"

namespace vortexline {

// Effective Planck constant Gamma*rho*V/(2 pi) of a filament of swept
// volume V.
inline double hbar_effective(const FluidParams& params, double vol) {
  return params.circulation * params.density * vol /
         (2.0 * std::numbers::pi);
}

// Effective mass rho*V/log_eps of the emergent free particle.
inline double m_effective(const FluidParams& params, double vol) {
  return params.density * vol / params.log_eps;
}

// Fluid momentum along z,  p_z = -i (Gamma rho / 2) sum psi* psi' dz,
// with the spectral derivative. The sum is purely imaginary for a periodic
// state; a real residual above 1e-10 relative signals a corrupted state.
inline double momentum_z(const FilamentState& s, const FluidParams& params) {
  params.validate();
  const std::vector<cdouble> d1 = spectral_derivative(s.psi, s.grid, 1);
  cdouble sum(0.0, 0.0);
  for (std::size_t j = 0; j < s.psi.size(); ++j)
    sum += std::conj(s.psi[j]) * d1[j];
  sum *= s.grid.dz();
  const double mag = std::abs(sum);
  if (!std::isfinite(mag))
    throw std::runtime_error("momentum_z: non-finite sum");
  if (mag > 0.0 && std::abs(sum.real()) > 1e-10 * mag)
    throw std::runtime_error(
        "momentum_z: spurious real residual " + std::to_string(sum.real()) +
        " (non-periodic or corrupted state)");
  return 0.5 * params.circulation * params.density * sum.imag();
}

// Effective angular momentum along z after subtracting the straight-line
// baseline:  L_z = -(Gamma rho / 2) sum |psi|^2 dz = -Gamma rho V / (2 pi).
inline double angular_momentum_z(const FilamentState& s,
                                 const FluidParams& params) {
  params.validate();
  double sum = 0.0;
  for (const cdouble& v : s.psi) sum += std::norm(v);
  return -0.5 * params.circulation * params.density * sum * s.grid.dz();
}

enum class EnergyMode { lia, llia };

// Kinetic energy of the filament. lia returns the full arclength form
//   (rho Gamma^2 log_eps / 4 pi) * sum sqrt(1 + |psi'|^2) dz
// including the straight-line baseline; llia returns the quadratic form
//   (rho Gamma^2 log_eps / 8 pi) * sum |psi'|^2 dz  >= 0
// with the baseline subtracted.
inline double energy(const FilamentState& s, const FluidParams& params,
                     EnergyMode mode) {
  params.validate();
  const std::vector<cdouble> d1 = spectral_derivative(s.psi, s.grid, 1);
  const double g2 = params.circulation * params.circulation;
  double sum = 0.0;
  if (mode == EnergyMode::lia) {
    for (const cdouble& v : d1) sum += std::sqrt(1.0 + std::norm(v));
    return params.density * g2 * params.log_eps /
           (4.0 * std::numbers::pi) * sum * s.grid.dz();
  }
  for (const cdouble& v : d1) sum += std::norm(v);
  return params.density * g2 * params.log_eps / (8.0 * std::numbers::pi) *
         sum * s.grid.dz();
}

// Hamiltonian operator at frozen volume V applied to the samples:
//   H psi = -(rho V Gamma^2 log_eps / 8 pi^2) psi''  (spectral).
inline std::vector<cdouble> hamiltonian_apply(const FilamentState& s,
                                              const FluidParams& params,
                                              double vol) {
  params.validate();
  if (!(vol > 0.0))
    throw std::invalid_argument(
        "hamiltonian_apply: zero-volume state has no Hamiltonian scale");
  const double coef = params.density * vol * params.circulation *
                      params.circulation * params.log_eps /
                      (8.0 * std::numbers::pi * std::numbers::pi);
  std::vector<cdouble> d2 = spectral_derivative(s.psi, s.grid, 2);
  for (cdouble& v : d2) v *= -coef;
  return d2;
}

inline std::vector<cdouble> hamiltonian_apply(const FilamentState& s,
                                              const FluidParams& params) {
  return hamiltonian_apply(s, params, volume(s));
}

struct DeBroglieCheck {
  double p_z = 0.0;
  double hbar_k = 0.0;  // hbar_eff times the dominant wavenumber
  double gap = 0.0;     // |p_z - hbar_k| / |p_z|
};

// Momentum-wavenumber relation p_z = hbar_eff * k on a single-mode state.
// Rejects states whose dominant mode carries less than 99.9% of the power.
inline DeBroglieCheck de_broglie_check(const FilamentState& s,
                                       const FluidParams& params) {
  params.validate();
  const DominantMode dom = dominant_mode(s.psi, s.grid);
  if (dom.power_fraction < 0.999)
    throw std::invalid_argument(
        "de_broglie_check: no dominant mode (fraction " +
        std::to_string(dom.power_fraction) + " < 0.999)");
  DeBroglieCheck r;
  r.p_z = momentum_z(s, params);
  r.hbar_k = hbar_effective(params, volume(s)) *
             s.grid.wavenumber(dom.mode);
  r.gap = r.p_z != 0.0 ? std::abs(r.p_z - r.hbar_k) / std::abs(r.p_z)
                       : std::abs(r.hbar_k);
  return r;
}

// Pointwise defect of the position-momentum commutator,
//   max | (z p - p z) psi - i hbar_eff psi | / max |psi|
// with p = -i hbar_eff d/dz (spectral), evaluated over the interior
// (grid indices at least count/8 away from the periodic seam). Multiplying
// by z is only meaningful away from the seam, where z itself jumps; states
// must vanish there for the defect to be small. Returns 0 for psi == 0.
inline double commutator_check(const FilamentState& s,
                               const FluidParams& params) {
  params.validate();
  const double hbar = hbar_effective(params, volume(s));
  double peak = 0.0;
  for (const cdouble& v : s.psi) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;

  const int n = s.grid.count;
  std::vector<cdouble> zpsi(n);
  for (int j = 0; j < n; ++j) zpsi[j] = s.grid.z(j) * s.psi[j];
  const std::vector<cdouble> d_zpsi = spectral_derivative(zpsi, s.grid, 1);
  const std::vector<cdouble> d_psi = spectral_derivative(s.psi, s.grid, 1);

  // (z p - p z) psi = i hbar (D(z psi) - z D psi); defect vs i hbar psi
  const int margin = n / 8;
  double worst = 0.0;
  for (int j = margin; j < n - margin; ++j) {
    const cdouble defect =
        cdouble(0.0, hbar) * (d_zpsi[j] - s.grid.z(j) * d_psi[j]) -
        cdouble(0.0, hbar) * s.psi[j];
    worst = std::max(worst, std::abs(defect));
  }
  return worst / peak;
}

// The quantities of one state evaluated at one instant. By construction
// L_z = -hbar_eff (both are Gamma rho V / 2 pi up to sign) and
// hbar_eff / (2 m_eff) = Gamma log_eps / (4 pi).
struct ObservableSet {
  double volume = 0.0;    // m^3
  double p_z = 0.0;       // kg m / s
  double l_z = 0.0;       // kg m^2 / s
  double energy = 0.0;    // J, quadratic (baseline-subtracted) form
  double hbar_eff = 0.0;  // J s
  double m_eff = 0.0;     // kg
  double t = 0.0;         // s
};

inline ObservableSet observe(const FilamentState& s,
                             const FluidParams& params) {
  ObservableSet o;
  o.volume = volume(s);
  o.p_z = momentum_z(s, params);
  o.hbar_eff = hbar_effective(params, o.volume);
  o.l_z = -o.hbar_eff;
  o.energy = energy(s, params, EnergyMode::llia);
  o.m_eff = m_effective(params, o.volume);
  o.t = s.time;
  return o;
}

// Microscopic constants of a quantized vortex: one atom species of mass
// atom_mass, atom_count atoms inside the swept volume, Planck constant
// planck.
struct QuantizedVortexParams {
  double atom_mass = 0.0;  // kg
  long atom_count = 1;
  double planck = 6.62607015e-34;  // J s
};

struct QuantizedVortexConstants {
  double circulation = 0.0;  // h/m
  double density = 0.0;      // n m / V
  double hbar_eff = 0.0;     // n h / (2 pi)
  double m_eff = 0.0;        // n m / log_eps
};

// Circulation quantum h/m, the matching density for the given volume, and
// the effective constants. hbar_eff is built as atom_count * (h / 2 pi), so
// the integer-multiple identity is exact by construction.
inline QuantizedVortexConstants quantized_vortex_constants(
    const QuantizedVortexParams& qv, double vol, double log_eps) {
  if (!(qv.atom_mass > 0.0) || qv.atom_count < 1 || !(qv.planck > 0.0))
    throw std::invalid_argument(
        "quantized_vortex_constants: atom_mass > 0, atom_count >= 1, "
        "planck > 0 required");
  if (!(vol > 0.0) || !(log_eps > 0.0))
    throw std::invalid_argument(
        "quantized_vortex_constants: vol > 0 and log_eps > 0 required");
  QuantizedVortexConstants c;
  const double n = static_cast<double>(qv.atom_count);
  c.circulation = qv.planck / qv.atom_mass;
  c.density = n * qv.atom_mass / vol;
  c.hbar_eff = n * (qv.planck / (2.0 * std::numbers::pi));
  c.m_eff = n * qv.atom_mass / log_eps;
  return c;
}

}  // namespace vortexline
