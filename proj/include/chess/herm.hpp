#pragma once

// Small dense Hermitian matrices: the pointwise value of a real (1,1)-form
// in a unitary frame. Spectral quantities (S_k, derivative matrices,
// polarization) are computed from a cyclic Jacobi eigendecomposition.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "chess/symfunc.hpp"

namespace chess {

using cplx = std::complex<double>;

/// General square complex matrix, row-major. Used for unitary frames.
struct CMat {
  std::size_t n = 0;
  std::vector<cplx> a;

  CMat() = default;
  explicit CMat(std::size_t dim) : n(dim), a(dim * dim) {}
  static CMat identity(std::size_t dim);

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

CMat operator*(const CMat& x, const CMat& y);
CMat adjoint(const CMat& x);

class HermMat {
 public:
  HermMat() = default;
  /// Zero matrix of size n.
  explicit HermMat(std::size_t n);
  /// Validates Hermitian symmetry to absolute `tol`, then symmetrizes so the
  /// stored matrix is exactly Hermitian with a real diagonal.
  HermMat(std::size_t n, std::vector<cplx> entries, double tol = 1e-12);

  static HermMat identity(std::size_t n);
  static HermMat diagonal(std::span<const double> d);
  /// Rank-one v v^*.
  static HermMat outer(std::span<const cplx> v);
  /// Exactly Hermitian by construction, no validation.
  static HermMat from_upper(std::size_t n, std::span<const double> diag,
                            std::span<const cplx> upper);
  /// U A U^*.
  static HermMat conjugate(const CMat& u, const HermMat& a);

  std::size_t n() const noexcept { return n_; }
  cplx operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const cplx> entries() const noexcept { return a_; }

  double trace() const;
  double frobenius() const;

  HermMat& operator+=(const HermMat& o);
  friend HermMat operator+(HermMat x, const HermMat& y) { return x += y; }
  friend HermMat operator-(const HermMat& x, const HermMat& y);
  friend HermMat operator*(double s, HermMat x);

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

/// Sum_{a,b} X[a][b] Y[b][a], i.e. trace(X Y); real for Hermitian inputs.
double trace_pairing(const HermMat& x, const HermMat& y);

struct EigenDecomp {
  Spectrum values;  // non-increasing
  CMat vectors;     // column j is the eigenvector of values[j]
};

/// Cyclic complex Jacobi until the off-diagonal norm is <= 1e-13 ||A||_F.
EigenDecomp eigh(const HermMat& a);
Spectrum eigvals_h(const HermMat& a);

double s_k_mat(const HermMat& a, std::size_t k);

enum class DerivKind { LogGrad, RootGrad };

/// Derivative of log S_k (LogGrad) or S_k^{1/k} (RootGrad) at `base`, under
/// the trace pairing d/de g(A + eB) = trace_pairing(matrix, B).
struct DerivMat {
  HermMat base;
  DerivKind kind;
  HermMat matrix;
};

/// Throws ConeViolation when base is not in Gamma_k.
DerivMat deriv_matrix(const HermMat& a, std::size_t k, DerivKind kind);

/// Derivative matrix from an existing decomposition; the caller guarantees
/// the spectrum lies in Gamma_k.
HermMat deriv_from_eigen(const EigenDecomp& ed, std::size_t k, DerivKind kind);

/// Complete polarization of S_k by inclusion-exclusion over nonempty subsets.
double polarize(std::span<const HermMat> mats, std::size_t k);

/// polarize() after checking every argument lies in Gamma_k; the ConeViolation
/// index names the offending argument.
double mixed_positivity(std::span<const HermMat> mats, std::size_t k);

}  // namespace chess
