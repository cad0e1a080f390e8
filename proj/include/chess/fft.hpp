#pragma once

// In-repo radix-2 complex FFT, applied axis by axis to row-major
// multidimensional arrays with equal extent on every axis.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "chess/parallel.hpp"

namespace chess {

class Fft1d {
 public:
  /// N must be a power of two.
  explicit Fft1d(std::size_t N);

  std::size_t size() const noexcept { return n_; }
  /// Unnormalized transform in place; inverse uses the conjugate twiddles.
  void transform(std::span<std::complex<double>> line, bool inverse) const;

  std::span<const std::size_t> bitrev() const noexcept { return bitrev_; }
  std::span<const std::complex<double>> twiddle() const noexcept { return twiddle_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2 pi i j / N), j < N/2
};

/// Forward (exp(-2 pi i m.x)) or inverse transform over `dims` axes of extent
/// N each. The inverse is scaled by 1 / N^dims.
void fft_nd(std::vector<std::complex<double>>& data, std::size_t dims, std::size_t N, bool inverse,
            Exec exec = Exec::parallel);

}  // namespace chess
