#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vortexline/correspondence.hpp"
#include "vortexline/evolution.hpp"
#include "vortexline/observables.hpp"
#include "vortexline/state.hpp"

using namespace vortexline;
using Catch::Approx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

// Reference fluid setup shared by the kernel tests: Gamma = rho = 1,
// log_eps = 0.8, volume of the a = 0.1 reference helix on L = 2 pi.
struct KernelFixture {
  FluidParams params;
  double vol;
  double hbar;
  double mass;

  KernelFixture() {
    vol = std::numbers::pi * 0.01 * kTwoPi;
    hbar = hbar_effective(params, vol);
    mass = m_effective(params, vol);
  }
};

}  // namespace

TEST_CASE("plane-wave overlap") {
  const double hbar = 0.7;

  SECTION("zero momentum is flat and real") {
    const cdouble v = plane_wave_overlap(0.0, 1.234, hbar);
    REQUIRE(v.imag() == 0.0);
    REQUIRE(v.real() == Approx(1.0 / std::sqrt(kTwoPi * hbar)).epsilon(1e-15));
  }

  SECTION("constant modulus squared 1/(2 pi hbar)") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 50; ++i) {
      const cdouble v = plane_wave_overlap(u(rng), u(rng), hbar);
      REQUIRE(std::norm(v) == Approx(1.0 / (kTwoPi * hbar)).epsilon(1e-14));
    }
  }

  SECTION("conjugate symmetry") {
    const cdouble zp = plane_wave_overlap(0.3, 1.7, hbar);
    const cdouble pz = std::conj(plane_wave_overlap(0.3, 1.7, hbar));
    REQUIRE(std::abs(zp * pz - cdouble(1.0 / (kTwoPi * hbar), 0.0)) < 1e-15);
  }

  SECTION("phase pi at z = pi, p = hbar") {
    const cdouble v = plane_wave_overlap(hbar, std::numbers::pi, hbar);
    REQUIRE(std::abs(wrap_angle(std::arg(v) - std::numbers::pi)) < 1e-12);
  }

  SECTION("discrete resolution of the identity reconstructs states") {
    const ZGrid grid(kTwoPi, 64);
    const double hb = 0.31;
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<cdouble> psi(grid.count, cdouble(0.0, 0.0));
    for (int m = -20; m <= 20; ++m) {
      const cdouble coef(u(rng), u(rng));
      for (int j = 0; j < grid.count; ++j)
        psi[j] += coef * std::polar(1.0, grid.wavenumber(m) * grid.z(j));
    }

    const double dp = hb * kTwoPi / grid.length;
    std::vector<cdouble> recon(grid.count, cdouble(0.0, 0.0));
    for (int m = -grid.count / 2; m < grid.count / 2; ++m) {
      const double p = hb * grid.wavenumber(m);
      cdouble amp(0.0, 0.0);
      for (int j = 0; j < grid.count; ++j)
        amp += std::conj(plane_wave_overlap(p, grid.z(j), hb)) * psi[j] *
               grid.dz();
      for (int j = 0; j < grid.count; ++j)
        recon[j] += plane_wave_overlap(p, grid.z(j), hb) * amp * dp;
    }
    double worst = 0.0, peak = 0.0;
    for (int j = 0; j < grid.count; ++j) {
      worst = std::max(worst, std::abs(recon[j] - psi[j]));
      peak = std::max(peak, std::abs(psi[j]));
    }
    REQUIRE(worst <= 1e-10 * peak);
  }

  SECTION("invalid hbar") {
    REQUIRE_THROWS_AS(plane_wave_overlap(1.0, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("analytic free propagator") {
  const double hbar = 0.5, mass = 2.0;

  SECTION("zero displacement carries phase -pi/4") {
    const double dt = 0.05;
    const cdouble k = analytic_propagator(0.3, 0.3, dt, hbar, mass);
    REQUIRE(std::abs(k) ==
            Approx(std::sqrt(mass / (kTwoPi * hbar * dt))).epsilon(1e-14));
    REQUIRE(std::arg(k) == Approx(-std::numbers::pi / 4.0).epsilon(1e-14));
  }

  SECTION("doubling the mass doubles the phase exponent") {
    const double dt = 0.05, d = 0.21;
    const cdouble k1 = analytic_propagator(0.0, d, dt, hbar, mass);
    const cdouble k2 = analytic_propagator(0.0, d, dt, hbar, 2.0 * mass);
    const double ph1 = std::arg(k1) + std::numbers::pi / 4.0;
    const double ph2 = std::arg(k2) + std::numbers::pi / 4.0;
    REQUIRE(wrap_angle(ph2 - 2.0 * ph1) == Approx(0.0).margin(1e-13));
  }

  SECTION("zero dt is rejected") {
    REQUIRE_THROWS_AS(analytic_propagator(0.0, 1.0, 0.0, hbar, mass),
                      std::invalid_argument);
  }

  SECTION("composition law via windowed adaptive quadrature") {
    // oracle: integrate K(z1->z2, dt) K(z2->z3, dt) dz2 with a smooth
    // erfc window around the stationary point and compare K(z1->z3, 2 dt)
    const double dt = 0.05;
    const double z1 = 0.0, z3 = 0.4;
    const double zs = 0.5 * (z1 + z3);
    const double alpha = mass / (2.0 * hbar * dt);
    const double fresnel = std::sqrt(std::numbers::pi / alpha);
    const double flat = 6.0 * fresnel, taper = fresnel;

    auto window = [&](double z) {
      return 0.5 * std::erfc((std::abs(z - zs) - flat) / taper);
    };
    auto integrand_re = [&](double z2) {
      const cdouble v = analytic_propagator(z1, z2, dt, hbar, mass) *
                        analytic_propagator(z2, z3, dt, hbar, mass) *
                        window(z2);
      return v.real();
    };
    auto integrand_im = [&](double z2) {
      const cdouble v = analytic_propagator(z1, z2, dt, hbar, mass) *
                        analytic_propagator(z2, z3, dt, hbar, mass) *
                        window(z2);
      return v.imag();
    };

    using boost::math::quadrature::gauss_kronrod;
    const double lo = zs - flat - 8.0 * taper, hi = zs + flat + 8.0 * taper;
    const double re =
        gauss_kronrod<double, 61>::integrate(integrand_re, lo, hi, 15, 1e-12);
    const double im =
        gauss_kronrod<double, 61>::integrate(integrand_im, lo, hi, 15, 1e-12);
    const cdouble composed(re, im);
    const cdouble expect = analytic_propagator(z1, z3, 2.0 * dt, hbar, mass);
    REQUIRE(std::abs(composed - expect) <= 1e-8 * std::abs(expect));
  }
}

TEST_CASE("periodic kernel construction") {
  const KernelFixture fix;
  const ZGrid grid(kTwoPi, 256);

  SECTION("eigenphases match the spectral dispersion on the retained band") {
    const double dt = 1.5;
    const PropagatorKernel kernel =
        build_kernel(grid, dt, fix.params, fix.vol, 1);
    std::vector<cdouble> gen(grid.count);
    for (int n = 0; n < grid.count; ++n) gen[n] = kernel.at(n, 0);
    for (int m = -grid.count / 3; m <= grid.count / 3; ++m) {
      const cdouble lambda = detail::generator_eigenvalue(gen, grid, m);
      const double expect = -omega_linear(grid.wavenumber(m), fix.params) * dt;
      REQUIRE(std::abs(wrap_angle(std::arg(lambda) - expect)) < 1e-6);
      REQUIRE(std::abs(std::abs(lambda) - 1.0) < 1e-6);
    }
  }

  SECTION("kernel action rotates a helix like the linear flow") {
    const double dt = 1.5;
    const PropagatorKernel kernel =
        build_kernel(grid, dt, fix.params, fix.vol, 1);
    const FilamentState s = make_kelvin_wave({0.1, 5, 0.0}, grid);
    const auto out = kernel.apply(s.psi);
    const double w = omega_linear(grid.wavenumber(5), fix.params);
    for (int j = 0; j < grid.count; ++j) {
      const cdouble expect = s.psi[j] * std::polar(1.0, -w * dt);
      REQUIRE(std::abs(out[j] - expect) <= 1e-6 * std::abs(s.psi[j]));
    }
  }

  SECTION("slice count does not change the action") {
    const double dt = 6.0;
    const PropagatorKernel k1 = build_kernel(grid, dt, fix.params, fix.vol, 1);
    const PropagatorKernel k4 = build_kernel(grid, dt, fix.params, fix.vol, 4);
    WavepacketSpec spec;
    spec.center = std::numbers::pi;
    spec.width = 0.28;
    const FilamentState packet = make_wavepacket(spec, grid);
    const auto a1 = k1.apply(packet.psi);
    const auto a4 = k4.apply(packet.psi);
    double worst = 0.0, peak = 0.0;
    for (int j = 0; j < grid.count; ++j) {
      worst = std::max(worst, std::abs(a1[j] - a4[j]));
      peak = std::max(peak, std::abs(packet.psi[j]));
    }
    REQUIRE(worst <= 1e-6 * peak);
  }

  SECTION("semigroup: two applications equal the doubled-time kernel") {
    const double dt = 1.5;
    const PropagatorKernel k1 = build_kernel(grid, dt, fix.params, fix.vol, 1);
    const PropagatorKernel k2 =
        build_kernel(grid, 2.0 * dt, fix.params, fix.vol, 1);
    WavepacketSpec spec;
    spec.center = std::numbers::pi;
    spec.width = 0.28;
    const FilamentState packet = make_wavepacket(spec, grid);
    const auto twice = k1.apply(k1.apply(packet.psi));
    const auto direct = k2.apply(packet.psi);
    double worst = 0.0, peak = 0.0;
    for (int j = 0; j < grid.count; ++j) {
      worst = std::max(worst, std::abs(twice[j] - direct[j]));
      peak = std::max(peak, std::abs(packet.psi[j]));
    }
    REQUIRE(worst <= 1e-6 * peak);
  }

  SECTION("band unitarity defect of the full matrix") {
    const double dt = 1.5;
    const PropagatorKernel kernel =
        build_kernel(grid, dt, fix.params, fix.vol, 1);
    const int band = grid.count / 3;
    std::vector<std::vector<cdouble>> images;
    for (int m = -band; m <= band; ++m) {
      std::vector<cdouble> mode(grid.count);
      for (int j = 0; j < grid.count; ++j)
        mode[j] = std::polar(1.0, grid.wavenumber(m) * grid.z(j));
      images.push_back(kernel.apply(mode));
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < images.size(); ++a)
      for (std::size_t b = 0; b < images.size(); ++b) {
        cdouble gram(0.0, 0.0);
        for (int j = 0; j < grid.count; ++j)
          gram += std::conj(images[a][j]) * images[b][j];
        gram /= static_cast<double>(grid.count);
        const cdouble expect = a == b ? cdouble(1.0, 0.0) : cdouble(0.0, 0.0);
        worst = std::max(worst, std::abs(gram - expect));
      }
    REQUIRE(worst < 1e-6);
  }

  SECTION("under-resolved slice time is rejected with the computed width") {
    REQUIRE_THROWS_WITH(
        build_kernel(grid, 1e-6, fix.params, fix.vol, 1),
        Catch::Matchers::ContainsSubstring("stationary-phase width"));
    // marginally feasible window but taper too thin for the Fresnel zone
    REQUIRE_THROWS_WITH(
        build_kernel(grid, 0.5, fix.params, fix.vol, 1),
        Catch::Matchers::ContainsSubstring("stationary-phase width"));
  }

  SECTION("oversized time is rejected") {
    REQUIRE_THROWS_WITH(build_kernel(grid, 5e4, fix.params, fix.vol, 1),
                        Catch::Matchers::ContainsSubstring("too large"));
  }

  SECTION("zero volume is rejected") {
    REQUIRE_THROWS_AS(build_kernel(grid, 1.5, fix.params, 0.0, 1),
                      std::invalid_argument);
  }
}

TEST_CASE("wavepacket spreading benchmark") {
  FluidParams params;
  const ZGrid grid(16.0, 256);

  SECTION("width grows by sqrt(2) at t = sigma0^2 / c") {
    WavepacketSpec spec;
    spec.center = 8.0;
    spec.width = 0.5;
    const double c = params.lia_coefficient();
    const double tstar = spec.width * spec.width / c;
    REQUIRE(tstar == Approx(3.927).epsilon(1e-3));

    SolverConfig cfg;
    cfg.steps = 64;
    cfg.dt = tstar / cfg.steps;
    const SpreadingSeries series =
        wavepacket_benchmark(spec, params, grid, cfg);
    REQUIRE_FALSE(series.reached_seam);
    REQUIRE(series.samples.size() == 65);

    for (const auto& sample : series.samples)
      REQUIRE(sample.sigma_measured ==
              Approx(sample.sigma_analytic).epsilon(1e-4));

    const auto& last = series.samples.back();
    REQUIRE(last.sigma_measured ==
            Approx(std::sqrt(2.0) * 0.5).epsilon(1e-4));
    REQUIRE(last.sigma_measured == Approx(0.7071).epsilon(1e-3));
  }

  SECTION("t = 0 sample is the initial width") {
    WavepacketSpec spec;
    spec.center = 8.0;
    spec.width = 0.5;
    SolverConfig cfg;
    cfg.steps = 1;
    cfg.dt = 0.01;
    const SpreadingSeries series =
        wavepacket_benchmark(spec, params, grid, cfg);
    REQUIRE(series.samples[0].t == 0.0);
    REQUIRE(series.samples[0].sigma_measured ==
            series.samples[0].sigma_analytic);
  }

  SECTION("carrier mode drifts at the group velocity") {
    WavepacketSpec spec;
    spec.center = 8.0;
    spec.width = 0.5;
    spec.carrier_mode = 8;  // k0 = pi on L = 16
    FilamentState s = make_wavepacket(spec, grid);
    const double k0 = grid.wavenumber(spec.carrier_mode);
    auto centroid = [&](const FilamentState& st) {
      double w = 0.0, m1 = 0.0;
      for (int j = 0; j < grid.count; ++j) {
        w += std::norm(st.psi[j]);
        m1 += std::norm(st.psi[j]) * grid.z(j);
      }
      return m1 / w;
    };
    const double z0 = centroid(s);
    const double t = 2.0;
    for (int i = 0; i < 200; ++i) s = step_linear(s, params, t / 200);
    const double vg = (centroid(s) - z0) / t;
    REQUIRE(vg == Approx(2.0 * params.lia_coefficient() * k0).epsilon(1e-4));
  }

  SECTION("series truncates with a flag when tails reach the seam") {
    const ZGrid narrow(8.0, 128);
    WavepacketSpec spec;
    spec.center = 4.0;
    spec.width = 0.35;
    spec.carrier_mode = 4;
    SolverConfig cfg;
    cfg.steps = 4000;
    cfg.dt = 0.05;
    const SpreadingSeries series =
        wavepacket_benchmark(spec, params, narrow, cfg);
    REQUIRE(series.reached_seam);
    REQUIRE(series.samples.size() < 4001);
  }

  SECTION("packet validation") {
    WavepacketSpec thin;
    thin.center = 8.0;
    thin.width = 0.1;  // below 4 dz on this grid
    REQUIRE_THROWS_AS(make_wavepacket(thin, ZGrid(16.0, 64)),
                      std::invalid_argument);
    WavepacketSpec edge;
    edge.center = 0.5;
    edge.width = 0.5;  // tails cross the seam
    REQUIRE_THROWS_AS(make_wavepacket(edge, grid), std::invalid_argument);
  }
}
