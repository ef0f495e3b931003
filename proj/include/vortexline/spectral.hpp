#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "vortexline/grid.hpp"
#include "vortexline/state.hpp"

namespace vortexline {
namespace detail {

// Cached in-place FFTW plans per transform size. Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they execute on any buffer and the
// planning step is deterministic across runs.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans p;
    return p;
  }

  void forward(std::vector<cdouble>& data) { execute(data, true); }

  void inverse(std::vector<cdouble>& data) {
    execute(data, false);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (cdouble& v : data) v *= inv;
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

 private:
  FftPlans() = default;

  ~FftPlans() {
    for (auto& [n, pair] : plans_) {
      fftw_destroy_plan(pair.fwd);
      fftw_destroy_plan(pair.bwd);
    }
  }

  struct PlanPair {
    fftw_plan fwd;
    fftw_plan bwd;
  };

  void execute(std::vector<cdouble>& data, bool fwd) {
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    PlanPair* pair = nullptr;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = plans_.find(n);
      if (it == plans_.end()) {
        std::vector<cdouble> scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        PlanPair p;
        p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        it = plans_.emplace(n, p).first;
      }
      pair = &it->second;
    }
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(fwd ? pair->fwd : pair->bwd, buf, buf);
  }

  std::map<std::size_t, PlanPair> plans_;
  std::mutex mu_;
};

}  // namespace detail

// Unnormalized forward DFT, hat_m = sum_j psi_j exp(-i k_m z_j).
inline std::vector<cdouble> fft(std::vector<cdouble> psi) {
  detail::FftPlans::instance().forward(psi);
  return psi;
}

// Inverse of fft (includes the 1/N factor).
inline std::vector<cdouble> ifft(std::vector<cdouble> hat) {
  detail::FftPlans::instance().inverse(hat);
  return hat;
}

// Spectral d^order/dz^order. The Nyquist bin is zeroed for odd orders (its
// first derivative has no consistent sign) and kept for even orders.
inline std::vector<cdouble> spectral_derivative(const std::vector<cdouble>& psi,
                                                const ZGrid& grid, int order) {
  if (order < 1) throw std::invalid_argument("spectral_derivative: order >= 1");
  std::vector<cdouble> hat = fft(psi);
  const int n = grid.count;
  for (int bin = 0; bin < n; ++bin) {
    const int m = grid.mode_of_bin(bin);
    if (order % 2 == 1 && bin == n / 2) {
      hat[bin] = 0.0;
      continue;
    }
    const double k = grid.wavenumber(m);
    cdouble factor(1.0, 0.0);
    for (int p = 0; p < order; ++p) factor *= cdouble(0.0, k);
    hat[bin] *= factor;
  }
  return ifft(std::move(hat));
}

// Zero all modes with |m| > count/3 (the 2/3 rule used when evaluating
// nonlinear terms).
inline void apply_dealias_mask(std::vector<cdouble>& hat, const ZGrid& grid) {
  const int cutoff = grid.count / 3;
  for (int bin = 0; bin < grid.count; ++bin)
    if (std::abs(grid.mode_of_bin(bin)) > cutoff) hat[bin] = 0.0;
}

struct DominantMode {
  int bin = 0;             // FFT bin index
  int mode = 0;            // signed mode index
  double power_fraction = 0.0;  // |hat_bin|^2 / sum |hat|^2
  cdouble coefficient{0.0, 0.0};
};

inline DominantMode dominant_mode(const std::vector<cdouble>& psi,
                                  const ZGrid& grid) {
  std::vector<cdouble> hat = fft(psi);
  double total = 0.0, best = -1.0;
  int best_bin = 0;
  for (int bin = 0; bin < grid.count; ++bin) {
    const double p = std::norm(hat[bin]);
    total += p;
    if (p > best) {
      best = p;
      best_bin = bin;
    }
  }
  DominantMode d;
  d.bin = best_bin;
  d.mode = grid.mode_of_bin(best_bin);
  d.power_fraction = total > 0.0 ? best / total : 0.0;
  d.coefficient = hat[best_bin];
  return d;
}

}  // namespace vortexline
