#include "chess/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chess/error.hpp"
#include "chess/fft.hpp"

namespace chess {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxDims = 16;

std::vector<cplx> forward(const Field& f, Exec exec) {
  std::vector<cplx> hat(f.size());
  for_each_index(exec, f.size(), [&](std::size_t i) { hat[i] = f[i]; });
  fft_nd(hat, f.grid().dims(), f.grid().N(), false, exec);
  return hat;
}

// Multiplies the spectrum by symbol(m) and transforms back.
template <class Symbol>
std::vector<cplx> inverse_with(const std::vector<cplx>& hat, const TorusGrid& g, Symbol&& symbol,
                               Exec exec) {
  std::vector<cplx> out(hat.size());
  for_each_index(exec, hat.size(), [&](std::size_t i) {
    int m[kMaxDims];
    g.wavenumbers(i, std::span<int>(m, g.dims()));
    out[i] = hat[i] * symbol(std::span<const int>(m, g.dims()));
  });
  fft_nd(out, g.dims(), g.N(), true, exec);
  return out;
}

// Odd symbols drop the Nyquist mode so that real data stays real.
double odd_wavenumber(int m, std::size_t N) {
  return static_cast<std::size_t>(std::abs(m)) * 2 == N ? 0.0 : static_cast<double>(m);
}

}  // namespace

TorusGrid::TorusGrid(std::size_t n, std::size_t N) : n_(n), N_(N), size_(1) {
  if (n < 1 || 2 * n > kMaxDims) throw ParameterError("TorusGrid: unsupported complex dimension");
  if (N < 4 || (N & (N - 1)) != 0) throw ParameterError("TorusGrid: N must be a power of two >= 4");
  for (std::size_t d = 0; d < 2 * n; ++d) size_ *= N;
}

void TorusGrid::coords(std::size_t i, std::span<double> x) const {
  for (std::size_t d = dims(); d-- > 0;) {
    x[d] = static_cast<double>(i % N_) / static_cast<double>(N_);
    i /= N_;
  }
}

void TorusGrid::wavenumbers(std::size_t i, std::span<int> m) const {
  const int half = static_cast<int>(N_ / 2);
  for (std::size_t d = dims(); d-- > 0;) {
    const int j = static_cast<int>(i % N_);
    m[d] = j <= half ? j : j - static_cast<int>(N_);
    i /= N_;
  }
}

Field::Field(TorusGrid grid, double value) : grid_(grid), data_(grid.size(), value) {}

Field::Field(TorusGrid grid, std::vector<double> data) : grid_(grid), data_(std::move(data)) {
  if (data_.size() != grid_.size()) throw ValidationError("Field: sample count does not match grid");
  for (double v : data_)
    if (!std::isfinite(v)) throw ValidationError("Field: non-finite sample");
}

double Field::sup_norm() const {
  double s = 0.0;
  for (double v : data_) s = std::max(s, std::abs(v));
  return s;
}

double Field::min() const { return *std::min_element(data_.begin(), data_.end()); }
double Field::max() const { return *std::max_element(data_.begin(), data_.end()); }

Field& Field::operator+=(const Field& o) {
  if (!(o.grid_ == grid_)) throw ParameterError("Field: grid mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  if (!(o.grid_ == grid_)) throw ParameterError("Field: grid mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Field& Field::operator+=(double c) {
  for (double& v : data_) v += c;
  return *this;
}

HermField::HermField(TorusGrid grid)
    : grid_(grid),
      diag_(grid.n(), std::vector<double>(grid.size(), 0.0)),
      upper_(grid.n() * (grid.n() - 1) / 2, std::vector<cplx>(grid.size())) {}

std::size_t HermField::upper_index(std::size_t n, std::size_t a, std::size_t b) {
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

cplx HermField::entry(std::size_t i, std::size_t a, std::size_t b) const {
  if (a == b) return diag_[a][i];
  if (a < b) return upper_[upper_index(n(), a, b)][i];
  return std::conj(upper_[upper_index(n(), b, a)][i]);
}

HermMat HermField::at(std::size_t i) const {
  const std::size_t nn = n();
  double d[kMaxDims / 2];
  cplx u[kMaxDims * kMaxDims / 8];
  for (std::size_t a = 0; a < nn; ++a) d[a] = diag_[a][i];
  for (std::size_t q = 0; q < upper_.size(); ++q) u[q] = upper_[q][i];
  return HermMat::from_upper(nn, std::span<const double>(d, nn), std::span<const cplx>(u, upper_.size()));
}

HermMat HermField::shifted_identity(std::size_t i) const {
  HermMat m = at(i);
  m += HermMat::identity(n());
  return m;
}

void HermField::set(std::size_t i, const HermMat& m) {
  const std::size_t nn = n();
  for (std::size_t a = 0; a < nn; ++a) {
    diag_[a][i] = m(a, a).real();
    for (std::size_t b = a + 1; b < nn; ++b) upper_[upper_index(nn, a, b)][i] = m(a, b);
  }
}

double mean(const Field& f, Exec exec) {
  return blocked_sum(exec, f.size(), [&](std::size_t i) { return f[i]; }) / static_cast<double>(f.size());
}

Field project_mean_zero(Field f, Exec exec) {
  f += -mean(f, exec);
  return f;
}

Field fft_roundtrip(const Field& f, Exec exec) {
  std::vector<cplx> hat = forward(f, exec);
  fft_nd(hat, f.grid().dims(), f.grid().N(), true, exec);
  Field out(f.grid());
  for_each_index(exec, f.size(), [&](std::size_t i) { out[i] = hat[i].real(); });
  return out;
}

HermField complex_hessian(const Field& phi, Exec exec) {
  const TorusGrid& g = phi.grid();
  const std::size_t n = g.n();
  const std::size_t N = g.N();
  const std::size_t size = g.size();
  const std::vector<cplx> hat = forward(phi, exec);

  // Diagonal entries are real, so pairs of them share one inverse transform
  // as real and imaginary parts. Off-diagonal entries get one transform each.
  const std::size_t diag_buffers = (n + 1) / 2;
  const std::size_t off = n * (n - 1) / 2;
  std::vector<std::vector<cplx>> buf(diag_buffers + off, std::vector<cplx>(size));
  const double c = -0.25 * kTwoPi * kTwoPi;
  for_each_index(exec, size, [&](std::size_t i) {
    int m[kMaxDims];
    g.wavenumbers(i, std::span<int>(m, g.dims()));
    for (std::size_t a = 0; a < n; ++a) {
      const double mx = m[2 * a], my = m[2 * a + 1];
      const cplx v = hat[i] * (c * (mx * mx + my * my));
      buf[a / 2][i] += a % 2 == 0 ? v : cplx(0.0, 1.0) * v;
    }
    std::size_t u = 0;
    for (std::size_t a = 0; a < n; ++a) {
      const double xa = odd_wavenumber(m[2 * a], N), ya = odd_wavenumber(m[2 * a + 1], N);
      for (std::size_t b = a + 1; b < n; ++b, ++u) {
        const double xb = odd_wavenumber(m[2 * b], N), yb = odd_wavenumber(m[2 * b + 1], N);
        // (d_xa d_xb + d_ya d_yb + i (d_xa d_yb - d_ya d_xb)) / 4
        buf[diag_buffers + u][i] = hat[i] * (c * cplx(xa * xb + ya * yb, xa * yb - ya * xb));
      }
    }
  });
  for (auto& b : buf) fft_nd(b, g.dims(), N, true, exec);

  HermField h(g);
  for (std::size_t a = 0; a < n; ++a) {
    auto& d = h.diag(a);
    const auto& src = buf[a / 2];
    if (a % 2 == 0) {
      for_each_index(exec, size, [&](std::size_t i) { d[i] = src[i].real(); });
    } else {
      for_each_index(exec, size, [&](std::size_t i) { d[i] = src[i].imag(); });
    }
  }
  for (std::size_t u = 0; u < off; ++u) h.upper(u) = std::move(buf[diag_buffers + u]);
  return h;
}

Field complex_laplacian(const Field& phi, Exec exec) {
  const TorusGrid& g = phi.grid();
  const std::size_t n = g.n();
  const auto back = inverse_with(
      forward(phi, exec), g,
      [n](std::span<const int> m) {
        double m2 = 0.0;
        for (std::size_t d = 0; d < 2 * n; ++d) m2 += static_cast<double>(m[d]) * m[d];
        return cplx(-0.25 * kTwoPi * kTwoPi * m2, 0.0);
      },
      exec);
  Field out(g);
  for_each_index(exec, g.size(), [&](std::size_t i) { out[i] = back[i].real(); });
  return out;
}

std::vector<std::vector<cplx>> complex_gradient(const Field& phi, Exec exec) {
  const TorusGrid& g = phi.grid();
  const std::size_t N = g.N();
  const std::vector<cplx> hat = forward(phi, exec);
  std::vector<std::vector<cplx>> grad;
  grad.reserve(g.n());
  for (std::size_t c = 0; c < g.n(); ++c) {
    grad.push_back(inverse_with(
        hat, g,
        [c, N](std::span<const int> m) {
          const double mx = odd_wavenumber(m[2 * c], N), my = odd_wavenumber(m[2 * c + 1], N);
          // (i 2 pi mx - i * i 2 pi my) / 2
          return 0.5 * cplx(kTwoPi * my, kTwoPi * mx);
        },
        exec));
  }
  return grad;
}

Field grad_sq(const Field& phi, Exec exec) {
  const auto grad = complex_gradient(phi, exec);
  Field b(phi.grid());
  for_each_index(exec, b.size(), [&](std::size_t i) {
    double s = 0.0;
    for (const auto& gc : grad) s += std::norm(gc[i]);
    b[i] = s;
  });
  return b;
}

Field laplace_inverse(const Field& f, Exec exec) {
  const double mu = mean(f, exec);
  if (std::abs(mu) > 1e-8 * f.sup_norm()) {
    throw CompatibilityError("laplace_inverse: data has mean " + std::to_string(mu));
  }
  const TorusGrid& g = f.grid();
  const std::size_t n = g.n();
  const auto back = inverse_with(
      forward(f, exec), g,
      [n](std::span<const int> m) {
        double m2 = 0.0;
        for (std::size_t d = 0; d < 2 * n; ++d) m2 += static_cast<double>(m[d]) * m[d];
        if (m2 == 0.0) return cplx(0.0, 0.0);
        return cplx(-1.0 / (0.25 * kTwoPi * kTwoPi * m2), 0.0);
      },
      exec);
  Field out(g);
  for_each_index(exec, g.size(), [&](std::size_t i) { out[i] = back[i].real(); });
  return out;
}

}  // namespace chess
