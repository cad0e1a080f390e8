#pragma once

// Periodic fields on the flat torus C^n / (Z^n + i Z^n) sampled on a uniform
// grid with N points per real axis. Axis order is (x_1, y_1, ..., x_n, y_n),
// row-major with the last axis fastest. The background metric is
// omega = i sum dz^a ^ dz^a-bar, so all derivatives below use
// d/dz = (d/dx - i d/dy) / 2.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "chess/herm.hpp"
#include "chess/parallel.hpp"

namespace chess {

class TorusGrid {
 public:
  /// Throws ParameterError unless n >= 1, N >= 4 and N is a power of two.
  TorusGrid(std::size_t n, std::size_t N);

  std::size_t n() const noexcept { return n_; }
  std::size_t N() const noexcept { return N_; }
  std::size_t dims() const noexcept { return 2 * n_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(N_); }

  /// Grid coordinates of flat index i, in axis order.
  void coords(std::size_t i, std::span<double> x) const;
  /// Signed wavenumbers of flat index i; the Nyquist index maps to +N/2.
  void wavenumbers(std::size_t i, std::span<int> m) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  std::size_t n_;
  std::size_t N_;
  std::size_t size_;
};

class Field {
 public:
  explicit Field(TorusGrid grid, double value = 0.0);
  /// Throws ValidationError on size mismatch or non-finite samples.
  Field(TorusGrid grid, std::vector<double> data);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double sup_norm() const;
  double min() const;
  double max() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
  Field& operator+=(double c);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  TorusGrid grid_;
  std::vector<double> data_;
};

/// Pointwise Hermitian n x n matrices, stored as n real diagonal planes and
/// n(n-1)/2 complex upper-triangle planes so symmetry is exact.
class HermField {
 public:
  explicit HermField(TorusGrid grid);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t n() const noexcept { return grid_.n(); }
  std::size_t size() const noexcept { return grid_.size(); }

  static std::size_t upper_index(std::size_t n, std::size_t a, std::size_t b);

  std::vector<double>& diag(std::size_t a) { return diag_[a]; }
  const std::vector<double>& diag(std::size_t a) const { return diag_[a]; }
  std::vector<cplx>& upper(std::size_t u) { return upper_[u]; }
  const std::vector<cplx>& upper(std::size_t u) const { return upper_[u]; }

  /// Entry (a, b) at point i; lower entries are conjugates of stored ones.
  cplx entry(std::size_t i, std::size_t a, std::size_t b) const;
  HermMat at(std::size_t i) const;
  /// I + H(i).
  HermMat shifted_identity(std::size_t i) const;
  void set(std::size_t i, const HermMat& m);

 private:
  TorusGrid grid_;
  std::vector<std::vector<double>> diag_;
  std::vector<std::vector<cplx>> upper_;
};

double mean(const Field& f, Exec exec = Exec::parallel);
Field project_mean_zero(Field f, Exec exec = Exec::parallel);

/// Forward then inverse transform; identity up to rounding.
Field fft_roundtrip(const Field& f, Exec exec = Exec::parallel);

/// phi_{a b-bar} = d_a d_b-bar phi by spectral differentiation.
HermField complex_hessian(const Field& phi, Exec exec = Exec::parallel);

/// sum_a phi_{a a-bar}, which is a quarter of the real Laplacian.
Field complex_laplacian(const Field& phi, Exec exec = Exec::parallel);

/// phi_{,g} = (d_{x_g} - i d_{y_g}) phi / 2 for g = 0..n-1.
std::vector<std::vector<cplx>> complex_gradient(const Field& phi, Exec exec = Exec::parallel);

/// B = sum_g |phi_{,g}|^2.
Field grad_sq(const Field& phi, Exec exec = Exec::parallel);

/// Mean-zero psi with complex_laplacian(psi) = f. Throws CompatibilityError
/// unless |mean(f)| <= 1e-8 ||f||_inf.
Field laplace_inverse(const Field& f, Exec exec = Exec::parallel);

}  // namespace chess
