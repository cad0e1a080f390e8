#include "chess/herm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chess/error.hpp"

namespace chess {

CMat CMat::identity(std::size_t dim) {
  CMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMat operator*(const CMat& x, const CMat& y) {
  CMat r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t l = 0; l < x.n; ++l) {
      const cplx xil = x(i, l);
      for (std::size_t j = 0; j < x.n; ++j) r(i, j) += xil * y(l, j);
    }
  return r;
}

CMat adjoint(const CMat& x) {
  CMat r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j) r(i, j) = std::conj(x(j, i));
  return r;
}

HermMat::HermMat(std::size_t n) : n_(n), a_(n * n) {}

HermMat::HermMat(std::size_t n, std::vector<cplx> entries, double tol) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) throw ValidationError("HermMat: entry count is not n*n");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const cplx u = a_[i * n + j];
      const cplx l = a_[j * n + i];
      if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
        throw ValidationError("HermMat: non-finite entry");
      if (std::abs(u - std::conj(l)) > tol)
        throw ValidationError("HermMat: not Hermitian at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      const cplx avg = 0.5 * (u + std::conj(l));
      a_[i * n + j] = i == j ? cplx(avg.real(), 0.0) : avg;
      a_[j * n + i] = std::conj(a_[i * n + j]);
    }
  }
}

HermMat HermMat::identity(std::size_t n) {
  HermMat m(n);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1.0;
  return m;
}

HermMat HermMat::diagonal(std::span<const double> d) {
  HermMat m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * d.size() + i] = d[i];
  return m;
}

HermMat HermMat::outer(std::span<const cplx> v) {
  const std::size_t n = v.size();
  HermMat m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.a_[i * n + i] = std::norm(v[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      m.a_[i * n + j] = v[i] * std::conj(v[j]);
      m.a_[j * n + i] = std::conj(m.a_[i * n + j]);
    }
  }
  return m;
}

HermMat HermMat::from_upper(std::size_t n, std::span<const double> diag, std::span<const cplx> upper) {
  HermMat m(n);
  std::size_t u = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m.a_[i * n + i] = diag[i];
    for (std::size_t j = i + 1; j < n; ++j, ++u) {
      m.a_[i * n + j] = upper[u];
      m.a_[j * n + i] = std::conj(upper[u]);
    }
  }
  return m;
}

HermMat HermMat::conjugate(const CMat& u, const HermMat& a) {
  CMat am(a.n_);
  am.a = a.a_;
  const CMat r = u * am * adjoint(u);
  HermMat m(a.n_);
  m.a_ = r.a;
  for (std::size_t i = 0; i < m.n_; ++i) {
    m.a_[i * m.n_ + i] = m.a_[i * m.n_ + i].real();
    for (std::size_t j = i + 1; j < m.n_; ++j) {
      const cplx avg = 0.5 * (m.a_[i * m.n_ + j] + std::conj(m.a_[j * m.n_ + i]));
      m.a_[i * m.n_ + j] = avg;
      m.a_[j * m.n_ + i] = std::conj(avg);
    }
  }
  return m;
}

double HermMat::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i].real();
  return t;
}

double HermMat::frobenius() const {
  double s = 0.0;
  for (const cplx& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

HermMat& HermMat::operator+=(const HermMat& o) {
  if (o.n_ != n_) throw ParameterError("HermMat: size mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

HermMat operator-(const HermMat& x, const HermMat& y) {
  return x + (-1.0) * y;
}

HermMat operator*(double s, HermMat x) {
  for (cplx& z : x.a_) z *= s;
  return x;
}

double trace_pairing(const HermMat& x, const HermMat& y) {
  const std::size_t n = x.n();
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) s += (x(a, b) * y(b, a)).real();
  return s;
}

EigenDecomp eigh(const HermMat& m) {
  const std::size_t n = m.n();
  std::vector<cplx> a(m.entries().begin(), m.entries().end());
  CMat v = CMat::identity(n);
  auto at = [&a, n](std::size_t i, std::size_t j) -> cplx& { return a[i * n + j]; };

  const double target = 1e-13 * m.frobenius();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(at(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(at(p, q));
        if (mag == 0.0) continue;
        const cplx phase = at(p, q) / mag;
        const double tau = (at(q, q).real() - at(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        // Rotation J = diag(1, conj(phase)) * [[c, s], [-s, c]] on (p, q).
        const cplx jpp = c, jpq = s, jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
        for (std::size_t i = 0; i < n; ++i) {
          const cplx ip = at(i, p), iq = at(i, q);
          at(i, p) = ip * jpp + iq * jqp;
          at(i, q) = ip * jpq + iq * jqq;
          const cplx vp = v(i, p), vq = v(i, q);
          v(i, p) = vp * jpp + vq * jqp;
          v(i, q) = vp * jpq + vq * jqq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cplx pj = at(p, j), qj = at(q, j);
          at(p, j) = std::conj(jpp) * pj + std::conj(jqp) * qj;
          at(q, j) = std::conj(jpq) * pj + std::conj(jqq) * qj;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        at(p, p) = at(p, p).real();
        at(q, q) = at(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return at(i, i).real() > at(j, j).real(); });
  std::vector<double> vals(n);
  CMat vecs(n);
  for (std::size_t c = 0; c < n; ++c) {
    vals[c] = at(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) vecs(r, c) = v(r, order[c]);
  }
  return {Spectrum(std::move(vals)), std::move(vecs)};
}

Spectrum eigvals_h(const HermMat& a) { return eigh(a).values; }

double s_k_mat(const HermMat& a, std::size_t k) {
  if (k < 1 || k > a.n()) throw ParameterError("s_k_mat: k out of range");
  return elem_sym(eigvals_h(a)).s_norm[k];
}

HermMat deriv_from_eigen(const EigenDecomp& ed, std::size_t k, DerivKind kind) {
  const std::size_t n = ed.values.size();
  const double sk = elem_sym(ed.values).s_norm[k];
  std::vector<double> d = s_grad(ed.values, k);
  const double factor = kind == DerivKind::LogGrad
                            ? 1.0 / sk
                            : std::pow(sk, 1.0 / static_cast<double>(k) - 1.0) / static_cast<double>(k);
  for (double& x : d) x *= factor;

  // V diag(d) V^*, accumulated directly into the upper triangle.
  std::vector<double> diag(n, 0.0);
  std::vector<cplx> upper(n * (n - 1) / 2);
  std::size_t u = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < n; ++c) diag[a] += d[c] * std::norm(ed.vectors(a, c));
    for (std::size_t b = a + 1; b < n; ++b, ++u) {
      cplx s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += d[c] * ed.vectors(a, c) * std::conj(ed.vectors(b, c));
      upper[u] = s;
    }
  }
  return HermMat::from_upper(n, diag, upper);
}

DerivMat deriv_matrix(const HermMat& a, std::size_t k, DerivKind kind) {
  if (k < 1 || k > a.n()) throw ParameterError("deriv_matrix: k out of range");
  const EigenDecomp ed = eigh(a);
  if (auto j = first_cone_failure(ed.values, k)) {
    throw ConeViolation("deriv_matrix: matrix not in Gamma_" + std::to_string(k), *j,
                        elem_sym(ed.values).S(*j));
  }
  return {a, kind, deriv_from_eigen(ed, k, kind)};
}

double polarize(std::span<const HermMat> mats, std::size_t k) {
  if (mats.size() != k) throw ParameterError("polarize: expected exactly k matrices");
  if (k == 0) throw ParameterError("polarize: k must be positive");
  const std::size_t n = mats[0].n();
  if (k > n) throw ParameterError("polarize: k exceeds matrix size");
  for (const auto& m : mats)
    if (m.n() != n) throw ParameterError("polarize: size mismatch");

  double total = 0.0;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    HermMat sum(n);
    int bits = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        sum += mats[i];
        ++bits;
      }
    }
    const double sign = ((static_cast<int>(k) - bits) % 2 == 0) ? 1.0 : -1.0;
    total += sign * s_k_mat(sum, k);
  }
  double fact = 1.0;
  for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
  return total / fact;
}

double mixed_positivity(std::span<const HermMat> mats, std::size_t k) {
  if (mats.size() != k) throw ParameterError("mixed_positivity: expected exactly k matrices");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const Spectrum lam = eigvals_h(mats[i]);
    if (auto j = first_cone_failure(lam, k)) {
      throw ConeViolation("mixed_positivity: argument " + std::to_string(i) + " not in Gamma_" +
                              std::to_string(k),
                          i, elem_sym(lam).S(*j));
    }
  }
  return polarize(mats, k);
}

}  // namespace chess
