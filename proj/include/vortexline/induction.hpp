#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vortexline/spectral.hpp"
#include "vortexline/state.hpp"

namespace vortexline {

// A filament in 3-D, single-valued in z, periodically continued with the
// given period. Nodes are ordered by strictly increasing z and span less
// than one period.
struct Curve3D {
  std::vector<std::array<double, 3>> nodes;
  double period = 0.0;

  Curve3D(std::vector<std::array<double, 3>> nodes_, double period_)
      : nodes(std::move(nodes_)), period(period_) {
    if (nodes.size() < 8)
      throw std::invalid_argument("Curve3D: need at least 8 nodes");
    if (!std::isfinite(period) || period <= 0.0)
      throw std::invalid_argument("Curve3D: period must be positive");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      if (!(nodes[i + 1][2] > nodes[i][2]))
        throw std::invalid_argument(
            "Curve3D: z must be strictly increasing (degenerate segment at "
            "index " +
            std::to_string(i) + ")");
    const double span = nodes.back()[2] - nodes.front()[2];
    if (!(span < period))
      throw std::invalid_argument("Curve3D: node span must be below one period");
  }
};

struct VelocityField {
  std::vector<std::array<double, 3>> velocities;  // m/s, one per node
};

inline Curve3D curve_from_state(const FilamentState& s) {
  std::vector<std::array<double, 3>> nodes(s.psi.size());
  for (int j = 0; j < s.grid.count; ++j)
    nodes[j] = {s.psi[j].real(), s.psi[j].imag(), s.grid.z(j)};
  return Curve3D(std::move(nodes), s.grid.length);
}

// Smoothed Biot-Savart sum over the periodized curve: for each node P,
//   v(P) = Gamma/(4 pi) * sum_segments dl x R / (|R|^2 + sigma_c^2)^{3/2},
// midpoint rule per linear segment. The summation window covers `images`
// periods on each side of the evaluation node, so every node sees the same
// set of relative displacements and the discrete helical symmetry is exact.
// No segment is excluded; the core smoothing regularizes the self-term.
// Summation order is fixed, so results are deterministic.
inline VelocityField biot_savart_velocity(const Curve3D& curve,
                                          const FluidParams& params,
                                          int images = 1) {
  params.validate();
  if (images < 1)
    throw std::invalid_argument("biot_savart_velocity: images must be >= 1");
  const std::size_t n = curve.nodes.size();
  const double sigma2 = params.core_radius * params.core_radius;
  const double pref = params.circulation / (4.0 * std::numbers::pi);
  const double period = curve.period;

  // Segment m runs from node m to node m+1; the last wraps to node 0 shifted
  // by one period.
  std::vector<std::array<double, 3>> mid(n), dl(n);
  for (std::size_t m = 0; m < n; ++m) {
    const auto& a = curve.nodes[m];
    std::array<double, 3> b = curve.nodes[(m + 1) % n];
    if (m + 1 == n) b[2] += period;
    for (int c = 0; c < 3; ++c) {
      mid[m][c] = 0.5 * (a[c] + b[c]);
      dl[m][c] = b[c] - a[c];
    }
  }

  VelocityField field;
  field.velocities.assign(n, {0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = curve.nodes[i];
    double vx = 0.0, vy = 0.0, vz = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      // image shifts placing the segment midpoint inside
      // [z_node - images*period, z_node + images*period)
      const double x = (p[2] - mid[m][2]) / period;
      const int w_first = static_cast<int>(std::ceil(x - images));
      for (int w = w_first; w < w_first + 2 * images; ++w) {
        const double rx = p[0] - mid[m][0];
        const double ry = p[1] - mid[m][1];
        const double rz = p[2] - (mid[m][2] + w * period);
        const double r2 = rx * rx + ry * ry + rz * rz + sigma2;
        const double inv = 1.0 / (r2 * std::sqrt(r2));
        vx += (dl[m][1] * rz - dl[m][2] * ry) * inv;
        vy += (dl[m][2] * rx - dl[m][0] * rz) * inv;
        vz += (dl[m][0] * ry - dl[m][1] * rx) * inv;
      }
    }
    if (!std::isfinite(vx) || !std::isfinite(vy) || !std::isfinite(vz))
      throw std::runtime_error(
          "biot_savart_velocity: non-finite velocity at node " +
          std::to_string(i));
    field.velocities[i] = {pref * vx, pref * vy, pref * vz};
  }
  return field;
}

// Local derivatives of the filament shape x(z), y(z) at the evaluation point.
struct CurveJet {
  double slope_x = 0.0;  // dx/dz
  double slope_y = 0.0;  // dy/dz
  double curv_x = 0.0;   // d2x/dz2
  double curv_y = 0.0;   // d2y/dz2
  double third_x = 0.0;  // d3x/dz3
  double third_y = 0.0;  // d3y/dz3
};

// Integrand of the self-induction integral at signed offset z along the
// filament, evaluated on the cubic Taylor curve through the origin:
//   f = [ (y/z - y') i + (x' - x/z) j + ((x y' - y x')/z) k ]
//       / ( z|z| (1 + (x^2+y^2)/z^2)^{3/2} ).
// The transverse components carry an even 1/|z| pole proportional to the
// local curvature; integrating over [-l,-s] u [s,l] therefore diverges
// like log(l/s), which is what the polarity diagnostic measures.
inline std::array<double, 3> kernel_f(const CurveJet& jet, double z) {
  if (z == 0.0) throw std::invalid_argument("kernel_f: z = 0 is the pole");
  const double x = jet.slope_x * z + 0.5 * jet.curv_x * z * z +
                   jet.third_x * z * z * z / 6.0;
  const double y = jet.slope_y * z + 0.5 * jet.curv_y * z * z +
                   jet.third_y * z * z * z / 6.0;
  const double xp = jet.slope_x + jet.curv_x * z + 0.5 * jet.third_x * z * z;
  const double yp = jet.slope_y + jet.curv_y * z + 0.5 * jet.third_y * z * z;
  const double denom = z * std::abs(z) *
                       std::pow(1.0 + (x * x + y * y) / (z * z), 1.5);
  return {(y / z - yp) / denom, (xp - x / z) / denom,
          (x * yp - y * xp) / (z * denom)};
}

// Curvature prefactor of the logarithmic divergence of the self-induction
// integral. For each cutoff s the x-component of kernel_f is integrated over
// [-l,-s] u [s,l]; the integral grows as -P*log(l/s) + const, and the fitted
// prefactor P tends to curv_y * (1 + slope_x^2 + slope_y^2)^{-3/2} as s -> 0.
inline double polarity_slope(double curv_x, double curv_y, double slope_x,
                             double slope_y, double l,
                             const std::vector<double>& sigmas) {
  if (sigmas.size() < 4)
    throw std::invalid_argument("polarity_slope: need at least 4 cutoffs");
  const bool increasing = sigmas[1] > sigmas[0];
  for (std::size_t i = 0; i + 1 < sigmas.size(); ++i)
    if (increasing ? !(sigmas[i + 1] > sigmas[i]) : !(sigmas[i + 1] < sigmas[i]))
      throw std::invalid_argument("polarity_slope: cutoff list not monotone");
  for (double s : sigmas)
    if (!(s > 0.0) || !(s < l))
      throw std::invalid_argument(
          "polarity_slope: cutoffs must satisfy 0 < sigma < l");

  CurveJet jet;
  jet.slope_x = slope_x;
  jet.slope_y = slope_y;
  jet.curv_x = curv_x;
  jet.curv_y = curv_y;

  using boost::math::quadrature::gauss_kronrod;
  auto fx = [&jet](double z) { return kernel_f(jet, z)[0]; };

  std::vector<double> abscissa, value;
  for (double s : sigmas) {
    const double right =
        gauss_kronrod<double, 31>::integrate(fx, s, l, 12, 1e-12);
    const double left =
        gauss_kronrod<double, 31>::integrate(fx, -l, -s, 12, 1e-12);
    abscissa.push_back(std::log(l / s));
    value.push_back(left + right);
  }

  // least-squares line through (log(l/s), integral); report minus the slope
  const std::size_t n = abscissa.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += abscissa[i];
    my += value[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (abscissa[i] - mx) * (abscissa[i] - mx);
    sxy += (abscissa[i] - mx) * (value[i] - my);
  }
  return -sxy / sxx;
}

// Local-induction velocity at every grid point,
//   v_x + i v_y = i c psi'' / (1 + |psi'|^2)^{3/2},
//   v_z = c (y'' x' - x'' y') / (1 + |psi'|^2)^{3/2},
// with c = Gamma*log_eps/(4 pi) and spectral z-derivatives.
inline VelocityField lia_velocity(const FilamentState& s,
                                  const FluidParams& params) {
  params.validate();
  const double c = params.lia_coefficient();
  const std::vector<cdouble> d1 = spectral_derivative(s.psi, s.grid, 1);
  const std::vector<cdouble> d2 = spectral_derivative(s.psi, s.grid, 2);
  VelocityField field;
  field.velocities.resize(s.psi.size());
  for (std::size_t j = 0; j < s.psi.size(); ++j) {
    const double xp = d1[j].real(), yp = d1[j].imag();
    const double xpp = d2[j].real(), ypp = d2[j].imag();
    const double b = std::pow(1.0 + xp * xp + yp * yp, -1.5);
    field.velocities[j] = {-c * ypp * b, c * xpp * b,
                           c * (ypp * xp - xpp * yp) * b};
  }
  return field;
}

}  // namespace vortexline
