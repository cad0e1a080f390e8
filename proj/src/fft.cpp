#include "chess/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chess/error.hpp"

namespace chess {

Fft1d::Fft1d(std::size_t N) : n_(N) {
  if (N < 2 || (N & (N - 1)) != 0) throw ParameterError("Fft1d: size must be a power of two");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < N) ++bits;
  bitrev_.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
  twiddle_.resize(N / 2);
  for (std::size_t j = 0; j < N / 2; ++j)
    twiddle_[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(N));
}

void Fft1d::transform(std::span<std::complex<double>> x, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(x[i], x[bitrev_[i]]);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::complex<double> w = inverse ? std::conj(twiddle_[j * step]) : twiddle_[j * step];
        const std::complex<double> u = x[start + j];
        const std::complex<double> v = x[start + j + half] * w;
        x[start + j] = u + v;
        x[start + j + half] = u - v;
      }
    }
  }
}

namespace {

// Transforms rows [0, N) of a [N][stride] block, touching columns
// [lo, hi) only; butterflies sweep contiguous columns.
void transform_block(std::complex<double>* block, std::size_t N, std::size_t stride, std::size_t lo,
                     std::size_t hi, std::span<const std::size_t> bitrev,
                     std::span<const std::complex<double>> twiddle, bool inverse) {
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t r = bitrev[i];
    if (i < r)
      for (std::size_t c = lo; c < hi; ++c) std::swap(block[i * stride + c], block[r * stride + c]);
  }
  for (std::size_t len = 2; len <= N; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = N / len;
    for (std::size_t start = 0; start < N; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::complex<double> w = inverse ? std::conj(twiddle[j * step]) : twiddle[j * step];
        std::complex<double>* a = block + (start + j) * stride;
        std::complex<double>* b = block + (start + j + half) * stride;
        for (std::size_t c = lo; c < hi; ++c) {
          const std::complex<double> u = a[c];
          const std::complex<double> v = b[c] * w;
          a[c] = u + v;
          b[c] = u - v;
        }
      }
    }
  }
}

}  // namespace

void fft_nd(std::vector<std::complex<double>>& data, std::size_t dims, std::size_t N, bool inverse,
            Exec exec) {
  const Fft1d plan(N);
  const std::size_t total = data.size();
  constexpr std::size_t kChunk = 64;
  std::size_t stride = total;
  for (std::size_t axis = 0; axis < dims; ++axis) {
    stride /= N;
    const std::size_t s = stride;
    if (s == 1) {
      for_each_index(exec, total / N, [&](std::size_t line) {
        plan.transform(std::span<std::complex<double>>(data.data() + line * N, N), inverse);
      });
      continue;
    }
    // Work units: (outer block, column chunk) pairs.
    const std::size_t outer = total / (s * N);
    const std::size_t chunks = (s + kChunk - 1) / kChunk;
    for_each_index(exec, outer * chunks, [&, s](std::size_t unit) {
      const std::size_t o = unit / chunks;
      const std::size_t lo = (unit % chunks) * kChunk;
      const std::size_t hi = std::min(s, lo + kChunk);
      transform_block(data.data() + o * s * N, N, s, lo, hi, plan.bitrev(), plan.twiddle(), inverse);
    });
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(total);
    for_each_index(exec, total, [&](std::size_t i) { data[i] *= scale; });
  }
}

}  // namespace chess
