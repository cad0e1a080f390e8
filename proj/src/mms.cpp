#include "chess/mms.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "chess/error.hpp"

namespace chess {

Field make_mms(const TorusGrid& grid, double amp, std::uint64_t seed) {
  if (!std::isfinite(amp) || amp < 0.0) throw ParameterError("make_mms: amplitude must be finite and >= 0");
  constexpr int kTerms = 4;
  const std::size_t dims = grid.dims();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> comp(-2, 2);
  std::uniform_real_distribution<double> coef(0.5, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::bernoulli_distribution flip(0.5);

  struct Term {
    std::vector<int> m;
    double c;
    double theta;
  };
  std::vector<Term> terms;
  double total = 0.0;
  while (terms.size() < kTerms) {
    std::vector<int> m(dims);
    int l1 = 0;
    for (auto& v : m) {
      v = comp(rng);
      l1 += std::abs(v);
    }
    if (l1 == 0 || l1 > 2) continue;
    const double c = flip(rng) ? coef(rng) : -coef(rng);
    double m2 = 0.0;
    for (int v : m) m2 += v * v;
    terms.push_back({std::move(m), c, phase(rng)});
    total += std::abs(c) * m2;
  }

  Field phi(grid);
  if (amp == 0.0) return phi;
  std::vector<double> x(dims);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.coords(i, x);
    double s = 0.0;
    for (const auto& t : terms) {
      double arg = 0.0;
      for (std::size_t d = 0; d < dims; ++d) arg += t.m[d] * x[d];
      s += t.c * std::cos(2.0 * std::numbers::pi * arg + t.theta);
    }
    phi[i] = amp * s / total;
  }
  return project_mean_zero(std::move(phi), Exec::serial);
}

}  // namespace chess
