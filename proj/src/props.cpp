#include "chess/props.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "chess/error.hpp"
#include "chess/herm.hpp"
#include "chess/sampling.hpp"
#include "chess/symfunc.hpp"

namespace chess {

namespace {

constexpr double kIneqTol = 1e-9;

// Each suite calls `sample(rng)` which returns the worst slack of one draw.
SuiteResult run_suite(const std::string& name, std::size_t samples, std::uint64_t seed, std::size_t index,
                      double tol, const std::function<double(Rng&)>& sample) {
  SuiteResult r{name, samples, std::numeric_limits<double>::infinity(), tol, true, ""};
  Rng rng(seed * 0x9E3779B97F4A7C15ull + index);
  for (std::size_t s = 0; s < samples; ++s) r.worst_slack = std::min(r.worst_slack, sample(rng));
  if (samples == 0) {
    r.worst_slack = 0.0;
    r.note = "zero samples: vacuous pass";
  }
  r.pass = r.worst_slack >= -tol;
  return r;
}

SuiteResult skipped(const std::string& name, const std::string& why) {
  return {name, 0, 0.0, 0.0, true, why};
}

double rel(double slack, double scale) { return slack / (1.0 + std::abs(scale)); }

double min_slack(const std::vector<Slack>& v) {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& s : v) w = std::min(w, s.relative());
  return w;
}

Spectrum perturbed(const Spectrum& x, std::size_t j, double h) {
  std::vector<double> v(x.values().begin(), x.values().end());
  v[j] += h;
  return Spectrum(std::move(v));
}

}  // namespace

bool PropsReport::all_pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
}

const SuiteResult* PropsReport::find(const std::string& name) const {
  for (const auto& s : suites)
    if (s.name == name) return &s;
  return nullptr;
}

PropsReport run_props(std::size_t n, std::size_t k, std::size_t samples, std::uint64_t seed) {
  if (n < 1 || n > 16) throw ParameterError("run_props: n must lie in 1..16");
  if (k < 1 || k > n) throw ParameterError("run_props: k must lie in 1..n");
  PropsReport rep{n, k, samples, seed, {}};
  std::size_t idx = 0;
  auto add = [&](const std::string& name, double tol, const std::function<double(Rng&)>& fn) {
    rep.suites.push_back(run_suite(name, samples, seed, idx++, tol, fn));
  };
  const double dk = static_cast<double>(k);
  const double dn = static_cast<double>(n);

  add("newton", kIneqTol, [&](Rng& g) {
    const auto r = inequality_report(sample_cone(g, n, k), k);
    return r.newton.empty() ? 0.0 : min_slack(r.newton);
  });
  add("maclaurin", kIneqTol, [&](Rng& g) {
    const auto r = inequality_report(sample_cone(g, n, k), k);
    return r.maclaurin.empty() ? 0.0 : min_slack(r.maclaurin);
  });
  add("generalized_newton_maclaurin", kIneqTol, [&](Rng& g) {
    const auto r = inequality_report(sample_cone(g, n, k), k);
    double w = std::numeric_limits<double>::infinity();
    for (const auto& t : r.generalized) w = std::min(w, t.slack.relative());
    return w;
  });
  add("partial_positivity", 0.0, [&](Rng& g) {
    // Strict: dS_k/dlambda_j > 0 on Gamma_k.
    const auto r = inequality_report(sample_cone(g, n, k), k);
    return r.partial_positivity.value > 0.0 ? r.partial_positivity.relative() : -1.0;
  });
  add("sorted_partials", kIneqTol, [&](Rng& g) {
    const auto r = inequality_report(sample_cone(g, n, k), k);
    return r.sorted_partials.empty() ? 0.0 : min_slack(r.sorted_partials);
  });
  add("lambda1_partial", kIneqTol,
      [&](Rng& g) { return inequality_report(sample_cone(g, n, k), k).lambda1_partial.relative(); });
  add("log_partial_lower", kIneqTol,
      [&](Rng& g) { return inequality_report(sample_cone(g, n, k), k).log_partial_lower.relative(); });
  if (k >= 2) {
    add("spectrum_bound", kIneqTol,
        [&](Rng& g) { return inequality_report(sample_cone(g, n, k), k).spectrum_bound->relative(); });
  } else {
    rep.suites.push_back(skipped("spectrum_bound", "requires k >= 2"));
    ++idx;
  }
  add("cone_nesting", 0.0, [&](Rng& g) {
    const Spectrum lam = sample_cone(g, n, k);
    for (std::size_t j = 1; j < k; ++j)
      if (!cone_member(lam, j)) return -1.0;
    return 0.0;
  });
  add("concavity_root", kIneqTol, [&](Rng& g) {
    const Spectrum a = sample_cone(g, n, k);
    const Spectrum b = sample_cone(g, n, k);
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(g);
    const double scale = std::pow(elem_sym(a).s_norm[k], 1.0 / dk) + std::pow(elem_sym(b).s_norm[k], 1.0 / dk);
    return rel(concavity_probe(a, b, k, t), scale);
  });
  add("concavity_ratio", kIneqTol, [&](Rng& g) {
    const Spectrum a = sample_cone(g, n, k);
    const Spectrum b = sample_cone(g, n, k);
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(g);
    const std::size_t l = std::uniform_int_distribution<std::size_t>(0, k - 1)(g);
    auto ratio = [&](const Spectrum& x) {
      const auto s = elem_sym(x).s_norm;
      return std::pow(s[k] / s[l], 1.0 / static_cast<double>(k - l));
    };
    return rel(concavity_probe(a, b, k, t, l), ratio(a) + ratio(b));
  });
  add("euler_homogeneity", 1e-12, [&](Rng& g) {
    const Spectrum lam = sample_cone(g, n, k);
    const auto grad = s_grad(lam, k);
    double e = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      e += lam[j] * grad[j];
      scale += std::abs(lam[j] * grad[j]);
    }
    return -std::abs(e - dk * elem_sym(lam).s_norm[k]) / (1.0 + scale);
  });
  add("partial_sum", 1e-12, [&](Rng& g) {
    const Spectrum lam = sample_cone(g, n, k);
    const auto grad = s_grad(lam, k);
    double s = 0.0;
    for (double v : grad) s += v;
    return -std::abs(s - dk * elem_sym(lam).s_norm[k - 1]) / (1.0 + std::abs(s));
  });
  add("s_grad_finite_difference", 1e-6, [&](Rng& g) {
    const Spectrum lam = sample_cone(g, n, k);
    const auto grad = s_grad(lam, k);
    const double h = 1e-5;
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double fd = (elem_sym(perturbed(lam, j, h)).s_norm[k] - elem_sym(perturbed(lam, j, -h)).s_norm[k]) /
                        (2.0 * h);
      err = std::max(err, std::abs(fd - grad[j]));
      scale = std::max(scale, std::abs(grad[j]));
    }
    return -err / scale;
  });
  add("garding", kIneqTol, [&](Rng& g) {
    std::vector<HermMat> mats;
    double prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      mats.push_back(sample_cone_matrix(g, n, k));
      prod *= std::pow(s_k_mat(mats.back(), k), 1.0 / dk);
    }
    const double p = polarize(mats, k);
    return rel(p - prod, p);
  });
  add("mixed_positivity", 0.0, [&](Rng& g) {
    std::vector<HermMat> mats;
    for (std::size_t i = 0; i < k; ++i) mats.push_back(sample_cone_matrix(g, n, k));
    const double p = mixed_positivity(mats, k);
    return p > 0.0 ? 0.0 : -1.0;
  });
  add("unitary_invariance", 1e-10, [&](Rng& g) {
    const HermMat a = random_hermitian(g, n);
    const HermMat b = HermMat::conjugate(random_unitary(g, n), a);
    const double sa = s_k_mat(a, k);
    return -std::abs(s_k_mat(b, k) - sa) / (1.0 + std::abs(sa) + std::pow(a.frobenius(), dk));
  });
  add("deriv_gradient_check", 1e-5, [&](Rng& g) {
    const HermMat a = sample_cone_matrix(g, n, k);
    const HermMat b = random_hermitian(g, n);
    const double eps = 1e-5;
    const double fd = (s_k_mat(a + eps * b, k) - s_k_mat(a - eps * b, k)) / (2.0 * eps);
    const DerivMat d = deriv_matrix(a, k, DerivKind::LogGrad);
    const double sk = s_k_mat(a, k);
    const double an = sk * trace_pairing(d.matrix, b);
    return -std::abs(fd - an) / (sk * d.matrix.frobenius() * b.frobenius());
  });
  add("deriv_posdef", kIneqTol, [&](Rng& g) {
    const HermMat a = sample_cone_matrix(g, n, k);
    const double lmax = eigvals_h(a)[0];
    const double log_min = eigvals_h(deriv_matrix(a, k, DerivKind::LogGrad).matrix)[n - 1];
    const double root_min = eigvals_h(deriv_matrix(a, k, DerivKind::RootGrad).matrix)[n - 1];
    const double bound = dk / (dn * lmax);
    return std::min(rel(log_min - bound, bound), root_min > 0.0 ? 0.0 : -1.0);
  });
  add("deriv_trace_identities", 1e-10, [&](Rng& g) {
    const HermMat a = sample_cone_matrix(g, n, k);
    const SymTable t = elem_sym(eigvals_h(a));
    const double sk = t.s_norm[k], skm1 = t.s_norm[k - 1];
    const HermMat lg = deriv_matrix(a, k, DerivKind::LogGrad).matrix;
    const HermMat rg = deriv_matrix(a, k, DerivKind::RootGrad).matrix;
    const double e1 = std::abs(lg.trace() * sk - dk * skm1) / (1.0 + dk * std::abs(skm1));
    // Near the boundary the pairing sums large terms of both signs, so rounding
    // scales with |G| |A| rather than with k.
    const double e2 = std::abs(trace_pairing(lg, a) - dk) / std::max(dk, lg.frobenius() * a.frobenius());
    const double want_h = std::pow(sk, 1.0 / dk) * skm1 / sk;
    const double e3 = std::abs(rg.trace() - want_h) / (1.0 + want_h);
    return -std::max({e1, e2, e3});
  });
  return rep;
}

}  // namespace chess
