#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexline/evolution.hpp"
#include "vortexline/format.hpp"
#include "vortexline/observables.hpp"
#include "vortexline/spectral.hpp"
#include "vortexline/state.hpp"

namespace vortexline {

// Position-momentum overlap <z|p> = exp(i p z / hbar) / sqrt(2 pi hbar).
inline cdouble plane_wave_overlap(double p, double z, double hbar_eff) {
  if (!(hbar_eff > 0.0))
    throw std::invalid_argument("plane_wave_overlap: hbar_eff must be > 0");
  const double phase = p * z / hbar_eff;
  const double amp = 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar_eff);
  return amp * cdouble(std::cos(phase), std::sin(phase));
}

// Free-particle transition amplitude over time dt on the line,
//   sqrt(m / (2 pi i hbar dt)) * exp(i m (z_to - z_from)^2 / (2 hbar dt)),
// with the principal square root (phase -pi/4 for dt > 0).
inline cdouble analytic_propagator(double z_from, double z_to, double dt,
                                   double hbar_eff, double m_eff) {
  if (dt == 0.0)
    throw std::invalid_argument(
        "analytic_propagator: dt = 0 is a delta kernel, not representable");
  if (!(hbar_eff > 0.0) || !(m_eff > 0.0))
    throw std::invalid_argument(
        "analytic_propagator: hbar_eff and m_eff must be > 0");
  const double d = z_to - z_from;
  const cdouble pref = std::sqrt(
      m_eff / (cdouble(0.0, 2.0 * std::numbers::pi * hbar_eff * dt)));
  const double phase = m_eff * d * d / (2.0 * hbar_eff * dt);
  return pref * cdouble(std::cos(phase), std::sin(phase));
}

// Discretized periodic propagator: entries[to*N + from] approximates
// <z_to|U(dt)|z_from> * dz. Circulant by periodicity.
struct PropagatorKernel {
  ZGrid grid;
  double dt = 0.0;  // total evolution time
  int slices = 1;
  std::vector<cdouble> entries;  // row-major, N*N

  const cdouble& at(int to, int from) const {
    return entries[static_cast<std::size_t>(to) * grid.count + from];
  }

  std::vector<cdouble> apply(const std::vector<cdouble>& psi) const {
    if (static_cast<int>(psi.size()) != grid.count)
      throw std::invalid_argument("PropagatorKernel::apply: size mismatch");
    std::vector<cdouble> out(psi.size(), cdouble(0.0, 0.0));
    for (int to = 0; to < grid.count; ++to) {
      cdouble acc(0.0, 0.0);
      const cdouble* row =
          entries.data() + static_cast<std::size_t>(to) * grid.count;
      for (int from = 0; from < grid.count; ++from) acc += row[from] * psi[from];
      out[to] = acc;
    }
    return out;
  }
};

namespace detail {

// One-slice circulant generator G[n] = sum over periodic images of the
// free kernel at circular displacement d_n, weighted by a smooth window.
//
// The image sum converges only conditionally: the kernel is a pure Fresnel
// phase whose sampled sum picks up a spurious full-weight contribution
// whenever the phase advances by a multiple of 2 pi per grid step, which
// happens at displacement 2*c*tau*(k + r*2pi/dz) for any integer r. The
// window is flat past the group displacement 2*c*tau*k of every retained
// mode (|m| <= count/3) and reaches zero before the first r = -1 resonance,
// so retained modes keep their full stationary-phase value while the
// resonant ghosts are suppressed.
struct KernelWindow {
  double flat_end = 0.0;    // U0
  double cut_end = 0.0;     // U1
  double center = 0.0;      // erfc midpoint
  double width = 0.0;       // erfc scale
  double fresnel_width = 0.0;

  double weight(double u) const {
    return 0.5 * std::erfc((std::abs(u) - center) / width);
  }
};

inline KernelWindow make_kernel_window(const ZGrid& grid, double c,
                                       double tau) {
  const double dz = grid.dz();
  KernelWindow w;
  w.fresnel_width = 2.0 * std::sqrt(std::numbers::pi * c * tau);
  if (w.fresnel_width < 2.0 * dz)
    throw std::invalid_argument(
        "build_kernel: slice time under-resolved on the grid "
        "(stationary-phase width " +
        std::to_string(w.fresnel_width) + " < 2 dz = " +
        std::to_string(2.0 * dz) + ")");
  const double k_band = grid.wavenumber(grid.count / 3);
  const double k_grid = 2.0 * std::numbers::pi / dz;
  w.flat_end = 2.0 * c * tau * k_band + 4.0 * w.fresnel_width;
  w.cut_end = 2.0 * c * tau * (k_grid - k_band) - 4.0 * w.fresnel_width;
  if (!(w.cut_end > w.flat_end))
    throw std::invalid_argument(
        "build_kernel: slice time under-resolved for the retained band "
        "(stationary-phase width " +
        std::to_string(w.fresnel_width) +
        ", no window fits between band displacement and first grid "
        "resonance)");
  w.center = 0.5 * (w.flat_end + w.cut_end);
  w.width = (w.cut_end - w.flat_end) / 8.0;
  // a taper narrower than the stationary-phase zone leaks percent-level
  // amplitude; the modulus self-check would catch it, but reject early
  if (w.width < w.fresnel_width / 5.0)
    throw std::invalid_argument(
        "build_kernel: slice time under-resolved for the retained band "
        "(stationary-phase width " +
        std::to_string(w.fresnel_width) + " exceeds the feasible taper " +
        std::to_string(w.width) + " by more than 5x)");
  return w;
}

inline std::vector<cdouble> kernel_generator(const ZGrid& grid, double tau,
                                             double hbar, double mass,
                                             const KernelWindow& window,
                                             int images) {
  const int n = grid.count;
  std::vector<cdouble> gen(n, cdouble(0.0, 0.0));
  for (int bin = 0; bin < n; ++bin) {
    const double d = grid.dz() * grid.mode_of_bin(bin);
    cdouble acc(0.0, 0.0);
    for (int w = -images; w <= images; ++w) {
      const double u = d + w * grid.length;
      const double weight = window.weight(u);
      if (weight < 1e-16) continue;
      acc += weight * analytic_propagator(0.0, u, tau, hbar, mass);
    }
    gen[bin] = acc * grid.dz();
  }
  return gen;
}

// Circular convolution of two circulant generators.
inline std::vector<cdouble> compose_generators(const std::vector<cdouble>& a,
                                               const std::vector<cdouble>& b) {
  const int n = static_cast<int>(a.size());
  std::vector<cdouble> out(n, cdouble(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    cdouble acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) acc += a[j] * b[(i - j + n) % n];
    out[i] = acc;
  }
  return out;
}

// Eigenvalue of the circulant generator on mode m.
inline cdouble generator_eigenvalue(const std::vector<cdouble>& gen,
                                    const ZGrid& grid, int m) {
  const double k = grid.wavenumber(m);
  cdouble acc(0.0, 0.0);
  for (int bin = 0; bin < grid.count; ++bin) {
    const double d = grid.dz() * grid.mode_of_bin(bin);
    acc += gen[bin] * cdouble(std::cos(k * d), -std::sin(k * d));
  }
  return acc;
}

}  // namespace detail

// Build the periodic free-particle kernel for total time dt as a composition
// of `slices` single-step kernels sampled from analytic_propagator. The
// effective constants come from the fluid parameters and the frozen volume V.
// Throws if the slice time is unresolved on the grid, if the image count
// would exceed max_images, or if the composed kernel fails its modulus
// self-check on the retained band (|m| <= count/3).
inline PropagatorKernel build_kernel(const ZGrid& grid, double dt,
                                     const FluidParams& params, double vol,
                                     int slices, double unitarity_tol = 1e-6,
                                     int max_images = 4096) {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("build_kernel: dt must be > 0");
  if (slices < 1) throw std::invalid_argument("build_kernel: slices >= 1");
  if (!(vol > 0.0)) throw std::invalid_argument("build_kernel: volume must be > 0");

  const double hbar = hbar_effective(params, vol);
  const double mass = m_effective(params, vol);
  const double c = hbar / (2.0 * mass);  // equals lia_coefficient()
  const double tau = dt / slices;

  const detail::KernelWindow window = detail::make_kernel_window(grid, c, tau);
  const int images = static_cast<int>(std::ceil(window.cut_end / grid.length)) + 1;
  if (images > max_images)
    throw std::invalid_argument(
        "build_kernel: dt too large for this grid (needs " +
        std::to_string(images) + " periodic images, cap " +
        std::to_string(max_images) + ")");

  const std::vector<cdouble> one =
      detail::kernel_generator(grid, tau, hbar, mass, window, images);
  std::vector<cdouble> gen = one;
  for (int s = 1; s < slices; ++s) gen = detail::compose_generators(gen, one);

  for (int m = -grid.count / 3; m <= grid.count / 3; ++m) {
    const double mod = std::abs(detail::generator_eigenvalue(gen, grid, m));
    if (std::abs(mod - 1.0) > unitarity_tol)
      throw std::runtime_error(
          "build_kernel: kernel modulus deviates from unity by " +
          std::to_string(std::abs(mod - 1.0)) + " on mode " +
          std::to_string(m));
  }

  PropagatorKernel kernel;
  kernel.grid = grid;
  kernel.dt = dt;
  kernel.slices = slices;
  kernel.entries.resize(static_cast<std::size_t>(grid.count) * grid.count);
  for (int to = 0; to < grid.count; ++to)
    for (int from = 0; from < grid.count; ++from)
      kernel.entries[static_cast<std::size_t>(to) * grid.count + from] =
          gen[(to - from + grid.count) % grid.count];
  return kernel;
}

// Gaussian test packet exp(-(z - center)^2 / (4 width^2)) * exp(i k0 z).
// Width must be resolved (>= 4 dz) and the tails must clear the periodic
// seam (< 1e-12 of the peak).
struct WavepacketSpec {
  double center = 0.0;
  double width = 0.0;
  int carrier_mode = 0;
};

inline FilamentState make_wavepacket(const WavepacketSpec& spec,
                                     const ZGrid& grid) {
  if (!(spec.width >= 4.0 * grid.dz()))
    throw std::invalid_argument("make_wavepacket: width must be >= 4 dz");
  if (!(spec.center > 0.0) || !(spec.center < grid.length))
    throw std::invalid_argument("make_wavepacket: center must lie in (0, L)");
  const double k0 = grid.wavenumber(spec.carrier_mode);
  std::vector<cdouble> psi(grid.count);
  for (int j = 0; j < grid.count; ++j) {
    const double z = grid.z(j);
    const double d = z - spec.center;
    const double env = std::exp(-d * d / (4.0 * spec.width * spec.width));
    psi[j] = env * cdouble(std::cos(k0 * z), std::sin(k0 * z));
  }
  const double seam = std::max(std::abs(psi.front()), std::abs(psi.back()));
  double peak = 0.0;
  for (const cdouble& v : psi) peak = std::max(peak, std::abs(v));
  if (seam > 1e-12 * peak)
    throw std::invalid_argument(
        "make_wavepacket: packet tail at the seam is " +
        format_double(seam / peak) + " of the peak (limit 1e-12)");
  return FilamentState(grid, std::move(psi), 0.0);
}

// One sample of the spreading benchmark.
struct SpreadingSample {
  double t = 0.0;
  double sigma_measured = 0.0;
  double sigma_analytic = 0.0;
};

struct SpreadingSeries {
  std::vector<SpreadingSample> samples;
  bool reached_seam = false;  // series truncated when tails hit the seam
};

namespace detail {

inline double packet_sigma(const FilamentState& s) {
  double w = 0.0, m1 = 0.0;
  for (int j = 0; j < s.grid.count; ++j) {
    const double p = std::norm(s.psi[j]);
    w += p;
    m1 += p * s.grid.z(j);
  }
  const double mean = m1 / w;
  double m2 = 0.0;
  for (int j = 0; j < s.grid.count; ++j)
    m2 += std::norm(s.psi[j]) * (s.grid.z(j) - mean) * (s.grid.z(j) - mean);
  return std::sqrt(m2 / w);
}

inline bool seam_contaminated(const FilamentState& s) {
  double peak = 0.0;
  for (const cdouble& v : s.psi) peak = std::max(peak, std::abs(v));
  const double seam = std::max(std::abs(s.psi.front()), std::abs(s.psi.back()));
  return peak == 0.0 || seam > 1e-12 * peak;
}

}  // namespace detail

// Evolve a Gaussian packet under the linear flow and compare the measured
// |psi|^2 width against sigma(t) = sigma0 sqrt(1 + (c t / sigma0^2)^2),
// c = Gamma log_eps / (4 pi). Sampling stops (with a flag) once the packet
// tails reach the periodic seam.
inline SpreadingSeries wavepacket_benchmark(const WavepacketSpec& spec,
                                            const FluidParams& params,
                                            const ZGrid& grid,
                                            const SolverConfig& config) {
  params.validate();
  config.validate();
  const double c = params.lia_coefficient();
  FilamentState state = make_wavepacket(spec, grid);
  const double sigma0 = detail::packet_sigma(state);

  SpreadingSeries series;
  auto analytic = [&](double t) {
    const double r = c * t / (sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + r * r);
  };
  series.samples.push_back({0.0, sigma0, analytic(0.0)});
  for (long i = 1; i <= config.steps; ++i) {
    state = step_linear(state, params, config.dt);
    if (detail::seam_contaminated(state)) {
      series.reached_seam = true;
      break;
    }
    const double t = i * config.dt;
    series.samples.push_back({t, detail::packet_sigma(state), analytic(t)});
  }
  return series;
}

}  // namespace vortexline
