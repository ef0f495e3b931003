#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vortexline {

// Uniform periodic grid on [0, L). Admissible wavenumbers are
// k_m = 2*pi*m/L for integer |m| <= count/2.
struct ZGrid {
  double length = 2.0 * std::numbers::pi;  // L, meters
  int count = 64;                          // N, even, >= 8
  static constexpr bool periodic = true;   // open boundaries are not supported

  ZGrid() = default;

  ZGrid(double length_, int count_) : length(length_), count(count_) {
    if (!std::isfinite(length) || length <= 0.0)
      throw std::invalid_argument("ZGrid: length must be positive and finite");
    if (count < 8 || count % 2 != 0)
      throw std::invalid_argument("ZGrid: count must be even and >= 8, got " +
                                  std::to_string(count));
  }

  double dz() const { return length / count; }
  double z(int j) const { return dz() * j; }

  // wavenumber of the signed integer mode index m
  double wavenumber(int m) const {
    return 2.0 * std::numbers::pi * static_cast<double>(m) / length;
  }

  // FFT bin -> signed mode index; bin count/2 maps to +count/2 (Nyquist)
  int mode_of_bin(int bin) const { return bin <= count / 2 ? bin : bin - count; }

  int nyquist() const { return count / 2; }

  bool operator==(const ZGrid&) const = default;
};

}  // namespace vortexline
