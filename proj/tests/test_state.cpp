#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "vortexline/spectral.hpp"
#include "vortexline/state.hpp"

using namespace vortexline;
using Catch::Approx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Independent quadrature oracle: Riemann sum of pi*|psi(z)|^2 over a fine
// grid, with psi evaluated from the analytic formula rather than the state.
double volume_quadrature(double a1, int m1, double a2, int m2, double length,
                         long points) {
  double sum = 0.0;
  const double h = length / points;
  for (long i = 0; i < points; ++i) {
    const double z = i * h;
    const std::complex<double> v =
        a1 * std::polar(1.0, kTwoPi * m1 / length * z) +
        a2 * std::polar(1.0, kTwoPi * m2 / length * z);
    sum += std::norm(v);
  }
  return std::numbers::pi * sum * h;
}

}  // namespace

TEST_CASE("kelvin wave construction") {
  const ZGrid grid(kTwoPi, 64);

  SECTION("zero amplitude is the straight line") {
    const FilamentState s = make_kelvin_wave({0.0, 3, 0.0}, grid);
    for (const auto& v : s.psi) REQUIRE(std::abs(v) == 0.0);
    REQUIRE(s.time == 0.0);
  }

  SECTION("helix has constant modulus") {
    const FilamentState s = make_kelvin_wave({0.1, 1, 0.0}, grid);
    for (int j = 0; j < grid.count; ++j) {
      REQUIRE(std::abs(s.psi[j]) == Approx(0.1).epsilon(1e-14));
      const std::complex<double> expect = 0.1 * std::polar(1.0, grid.z(j));
      REQUIRE(std::abs(s.psi[j] - expect) < 1e-15);
    }
  }

  SECTION("initial phase rotates the first sample") {
    const FilamentState s =
        make_kelvin_wave({0.1, 1, std::numbers::pi / 2.0}, grid);
    REQUIRE(s.psi[0].real() == Approx(0.0).margin(1e-15));
    REQUIRE(s.psi[0].imag() == Approx(0.1).epsilon(1e-14));
  }

  SECTION("unresolvable mode is rejected") {
    REQUIRE_THROWS_AS(make_kelvin_wave({0.1, 32, 0.0}, grid),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_kelvin_wave({0.1, -32, 0.0}, grid),
                      std::invalid_argument);
    REQUIRE_NOTHROW(make_kelvin_wave({0.1, 31, 0.0}, grid));
  }

  SECTION("negative amplitude is rejected") {
    REQUIRE_THROWS_AS(make_kelvin_wave({-0.1, 1, 0.0}, grid),
                      std::invalid_argument);
  }
}

TEST_CASE("grid validation") {
  REQUIRE_THROWS_AS(ZGrid(0.0, 64), std::invalid_argument);
  REQUIRE_THROWS_AS(ZGrid(1.0, 7), std::invalid_argument);
  REQUIRE_THROWS_AS(ZGrid(1.0, 6), std::invalid_argument);
  REQUIRE_NOTHROW(ZGrid(1.0, 8));
  const ZGrid g(kTwoPi, 64);
  REQUIRE(g.dz() * g.count == Approx(g.length).epsilon(1e-15));
  REQUIRE(g.wavenumber(3) == Approx(3.0).epsilon(1e-15));
  REQUIRE(g.mode_of_bin(63) == -1);
  REQUIRE(g.mode_of_bin(32) == 32);
}

TEST_CASE("swept volume") {
  const ZGrid grid(kTwoPi, 64);

  SECTION("straight line has zero volume") {
    REQUIRE(volume(make_kelvin_wave({0.0, 0, 0.0}, grid)) == 0.0);
  }

  SECTION("single helix matches the closed form") {
    const FilamentState s = make_kelvin_wave({0.1, 1, 0.0}, grid);
    const double closed = std::numbers::pi * 0.01 * kTwoPi;
    REQUIRE(volume(s) == Approx(closed).epsilon(1e-12));
    REQUIRE(volume(s) == Approx(0.197392).epsilon(1e-5));
    REQUIRE(volume(s) ==
            Approx(volume_quadrature(0.1, 1, 0.0, 0, kTwoPi, 1000000))
                .epsilon(1e-9));
  }

  SECTION("two orthogonal modes add in quadrature") {
    FilamentState s1 = make_kelvin_wave({0.1, 1, 0.0}, grid);
    const FilamentState s2 = make_kelvin_wave({0.1, 3, 0.0}, grid);
    std::vector<cdouble> sum(s1.psi);
    for (int j = 0; j < grid.count; ++j) sum[j] += s2.psi[j];
    const FilamentState both(grid, sum);
    const double closed = std::numbers::pi * (0.01 + 0.01) * kTwoPi;
    REQUIRE(volume(both) == Approx(closed).epsilon(1e-12));
    REQUIRE(volume(both) == Approx(0.394784).epsilon(1e-5));
    REQUIRE(volume(both) ==
            Approx(volume_quadrature(0.1, 1, 0.1, 3, kTwoPi, 1000000))
                .epsilon(1e-9));
  }
}

TEST_CASE("normalization") {
  const ZGrid grid(kTwoPi, 64);

  SECTION("helix normalizes to modulus 1/sqrt(L)") {
    const FilamentState n = normalize(make_kelvin_wave({0.1, 1, 0.0}, grid));
    const double expect = 1.0 / std::sqrt(kTwoPi);
    REQUIRE(expect == Approx(0.398942).epsilon(1e-5));
    for (const auto& v : n.psi)
      REQUIRE(std::abs(v) == Approx(expect).epsilon(1e-12));
    double sum = 0.0;
    for (const auto& v : n.psi) sum += std::norm(v);
    REQUIRE(sum * grid.dz() == Approx(1.0).epsilon(1e-12));
  }

  SECTION("idempotent") {
    const FilamentState once = normalize(make_kelvin_wave({0.37, 2, 0.4}, grid));
    const FilamentState twice = normalize(once);
    for (int j = 0; j < grid.count; ++j)
      REQUIRE(std::abs(twice.psi[j] - once.psi[j]) <=
              1e-12 * std::abs(once.psi[j]));
  }

  SECTION("straight line is rejected") {
    REQUIRE_THROWS_AS(normalize(make_kelvin_wave({0.0, 0, 0.0}, grid)),
                      std::invalid_argument);
  }
}

TEST_CASE("recentering") {
  const ZGrid grid(kTwoPi, 64);

  SECTION("constant collapses to zero") {
    const FilamentState c(grid,
                          std::vector<cdouble>(grid.count, cdouble(0.3, -0.2)));
    const FilamentState r = recenter(c);
    for (const auto& v : r.psi) REQUIRE(std::abs(v) < 1e-15);
  }

  SECTION("kelvin wave is already centered") {
    const FilamentState s = make_kelvin_wave({0.1, 2, 0.3}, grid);
    const FilamentState r = recenter(s);
    for (int j = 0; j < grid.count; ++j)
      REQUIRE(std::abs(r.psi[j] - s.psi[j]) < 1e-15);
  }

  SECTION("offset helix is recovered") {
    const FilamentState s = make_kelvin_wave({0.1, 1, 0.0}, grid);
    std::vector<cdouble> shifted(s.psi);
    for (auto& v : shifted) v += 0.3;
    const FilamentState r = recenter(FilamentState(grid, shifted));
    for (int j = 0; j < grid.count; ++j)
      REQUIRE(std::abs(r.psi[j] - s.psi[j]) < 1e-14);
  }

  SECTION("exactly centered state passes through bitwise") {
    // alternating samples cancel exactly in floating point
    std::vector<cdouble> psi(grid.count);
    for (int j = 0; j < grid.count; ++j)
      psi[j] = (j % 2 == 0) ? cdouble(0.25, -0.5) : cdouble(-0.25, 0.5);
    const FilamentState s(grid, psi);
    const FilamentState r = recenter(s);
    const double v0 = volume(s);
    REQUIRE(volume(r) == v0);
    for (int j = 0; j < grid.count; ++j) REQUIRE(r.psi[j] == s.psi[j]);
  }
}

TEST_CASE("state properties over random band-limited draws") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> amp(-0.2, 0.2);
  const ZGrid grid(kTwoPi, 64);

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cdouble> psi(grid.count, cdouble(0.0, 0.0));
    for (int m = -8; m <= 8; ++m) {
      if (m == 0) continue;
      const cdouble coef(amp(rng), amp(rng));
      for (int j = 0; j < grid.count; ++j)
        psi[j] += coef * std::polar(1.0, grid.wavenumber(m) * grid.z(j));
    }
    const FilamentState s(grid, psi);

    REQUIRE(volume(s) >= 0.0);

    const FilamentState r = recenter(s);
    cdouble mean(0.0, 0.0);
    double peak = 0.0;
    for (const auto& v : r.psi) {
      mean += v;
      peak = std::max(peak, std::abs(v));
    }
    mean /= static_cast<double>(grid.count);
    REQUIRE(std::abs(mean) <= 1e-14 * std::max(peak, 1e-300));

    if (volume(s) > 0.0) {
      const FilamentState n = normalize(s);
      double sum = 0.0;
      for (const auto& v : n.psi) sum += std::norm(v);
      REQUIRE(sum * grid.dz() == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("state validation") {
  const ZGrid grid(kTwoPi, 64);
  std::vector<cdouble> bad(grid.count, cdouble(0.0, 0.0));
  bad[5] = cdouble(std::nan(""), 0.0);
  REQUIRE_THROWS_AS(FilamentState(grid, bad), std::invalid_argument);
  REQUIRE_THROWS_AS(FilamentState(grid, std::vector<cdouble>(10)),
                    std::invalid_argument);
}
