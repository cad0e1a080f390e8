#include "chess/sampling.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace chess {

Spectrum sample_cone(Rng& rng, std::size_t n, std::size_t k) {
  std::normal_distribution<double> gauss;
  std::vector<double> g(n);
  for (double& x : g) x = gauss(rng);
  double c = 0.0;
  std::vector<double> shifted = g;
  while (!cone_member(Spectrum(shifted), k)) {
    c = c == 0.0 ? 0.05 : c * 1.25;
    for (std::size_t i = 0; i < n; ++i) shifted[i] = g[i] + c;
  }
  return Spectrum(std::move(shifted));
}

CMat random_unitary(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  CMat u = CMat::identity(n);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double th = angle(rng);
        const cplx ph = std::polar(1.0, angle(rng));
        CMat g = CMat::identity(n);
        g(p, p) = std::cos(th);
        g(p, q) = std::sin(th) * ph;
        g(q, p) = -std::sin(th) * std::conj(ph);
        g(q, q) = std::cos(th);
        u = u * g;
      }
    }
  }
  // Random diagonal phases cover the torus part of U(n).
  for (std::size_t j = 0; j < n; ++j) {
    const cplx ph = std::polar(1.0, angle(rng));
    for (std::size_t i = 0; i < n; ++i) u(i, j) *= ph;
  }
  return u;
}

HermMat random_hermitian(Rng& rng, std::size_t n) {
  std::normal_distribution<double> gauss;
  std::vector<double> diag(n);
  std::vector<cplx> upper(n * (n - 1) / 2);
  for (double& d : diag) d = gauss(rng);
  for (cplx& z : upper) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z = cplx(re, im);
  }
  return HermMat::from_upper(n, diag, upper);
}

HermMat sample_cone_matrix(Rng& rng, std::size_t n, std::size_t k) {
  const Spectrum lam = sample_cone(rng, n, k);
  const CMat u = random_unitary(rng, n);
  return HermMat::conjugate(u, HermMat::diagonal(lam.values()));
}

}  // namespace chess
