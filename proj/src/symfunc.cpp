#include "chess/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "chess/error.hpp"

namespace chess {

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw ParameterError("k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
}

void require_cone(const Spectrum& lambda, std::size_t k, const char* who) {
  if (auto j = first_cone_failure(lambda, k)) {
    throw ConeViolation(std::string(who) + ": spectrum not in Gamma_" + std::to_string(k) +
                            " (S_" + std::to_string(*j) + " <= 0)",
                        *j, elem_sym(lambda).S(*j));
  }
}

Slack slack_of(double larger, double smaller) {
  return {larger - smaller, std::max(std::abs(larger), std::abs(smaller))};
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("Spectrum: non-finite entry");
  }
}

Spectrum::Spectrum(std::initializer_list<double> values)
    : Spectrum(std::vector<double>(values)) {}

Spectrum Spectrum::sorted_desc() const {
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end(), std::greater<>());
  return Spectrum(std::move(v));
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

SymTable elem_sym(std::span<const double> lambda) {
  const std::size_t n = lambda.size();
  SymTable t;
  t.sigma.assign(n + 1, 0.0);
  t.sigma[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j >= 1; --j) t.sigma[j] += lambda[i] * t.sigma[j - 1];
  }
  t.s_norm.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) t.s_norm[j] = t.sigma[j] / binomial(n, j);
  return t;
}

std::vector<double> elem_sym_without(std::span<const double> lambda, std::size_t skip,
                                     std::size_t upto) {
  std::vector<double> sigma(upto + 1, 0.0);
  sigma[0] = 1.0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i == skip) continue;
    ++seen;
    for (std::size_t j = std::min(seen, upto); j >= 1; --j) sigma[j] += lambda[i] * sigma[j - 1];
  }
  return sigma;
}

std::optional<std::size_t> first_cone_failure(const Spectrum& lambda, std::size_t k,
                                              double margin) {
  check_k(k, lambda.size());
  const SymTable t = elem_sym(lambda);
  for (std::size_t j = 1; j <= k; ++j) {
    if (!(t.s_norm[j] > margin)) return j;
  }
  return std::nullopt;
}

bool cone_member(const Spectrum& lambda, std::size_t k, double margin) {
  return !first_cone_failure(lambda, k, margin).has_value();
}

std::vector<double> s_grad(const Spectrum& lambda, std::size_t k) {
  const std::size_t n = lambda.size();
  check_k(k, n);
  const double c = binomial(n, k);
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = elem_sym_without(lambda.values(), j, k - 1)[k - 1] / c;
  return g;
}

double InequalityReport::worst_relative() const {
  double w = partial_positivity.relative();
  auto fold = [&w](const Slack& s) { w = std::min(w, s.relative()); };
  for (const auto& s : newton) fold(s);
  for (const auto& s : maclaurin) fold(s);
  for (const auto& g : generalized) fold(g.slack);
  for (const auto& s : sorted_partials) fold(s);
  fold(lambda1_partial);
  fold(log_partial_lower);
  if (spectrum_bound) fold(*spectrum_bound);
  return w;
}

InequalityReport inequality_report(const Spectrum& lambda, std::size_t k) {
  const std::size_t n = lambda.size();
  check_k(k, n);
  require_cone(lambda, k, "inequality_report");

  InequalityReport rep;
  rep.n = n;
  rep.k = k;
  const SymTable t = elem_sym(lambda);
  const auto& S = t.s_norm;

  // Newton holds on all of R^n.
  for (std::size_t j = 1; j + 1 <= n; ++j) rep.newton.push_back(slack_of(S[j] * S[j], S[j - 1] * S[j + 1]));

  for (std::size_t j = 1; j <= k; ++j) rep.maclaurin_chain.push_back(std::pow(S[j], 1.0 / static_cast<double>(j)));
  for (std::size_t j = 0; j + 1 < rep.maclaurin_chain.size(); ++j)
    rep.maclaurin.push_back(slack_of(rep.maclaurin_chain[j], rep.maclaurin_chain[j + 1]));

  // (S_kk / S_l)^{1/(kk-l)} <= (S_r / S_s)^{1/(r-s)} for s < r <= kk, s <= l < kk.
  for (std::size_t kk = 1; kk <= k; ++kk) {
    for (std::size_t l = 0; l < kk; ++l) {
      const double lhs = std::pow(S[kk] / S[l], 1.0 / static_cast<double>(kk - l));
      for (std::size_t r = 1; r <= kk; ++r) {
        for (std::size_t s = 0; s < r && s <= l; ++s) {
          const double rhs = std::pow(S[r] / S[s], 1.0 / static_cast<double>(r - s));
          rep.generalized.push_back({kk, l, r, s, lhs, rhs, slack_of(rhs, lhs)});
        }
      }
    }
  }

  const Spectrum sorted = lambda.sorted_desc();
  const std::vector<double> g = s_grad(sorted, k);
  double gmin = g[0], gmax = g[0];
  for (double v : g) {
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
  }
  rep.partial_positivity = {gmin, gmax};
  for (std::size_t j = 0; j + 1 < n; ++j) rep.sorted_partials.push_back(slack_of(g[j + 1], g[j]));

  const double l1 = sorted[0];
  const double kn = static_cast<double>(k) / static_cast<double>(n);
  rep.lambda1_partial = slack_of(l1 * g[0], kn * S[k]);
  rep.log_partial_lower = slack_of(g[0] / S[k], kn / l1);

  if (k >= 2) {
    double amax = 0.0;
    for (double v : lambda.values()) amax = std::max(amax, std::abs(v));
    rep.spectrum_bound = slack_of(static_cast<double>(n) * S[1], amax);
  }
  return rep;
}

double concavity_probe(const Spectrum& a, const Spectrum& b, std::size_t k, double t, std::size_t l) {
  if (a.size() != b.size()) throw ParameterError("concavity_probe: dimension mismatch");
  check_k(k, a.size());
  if (l >= k) throw ParameterError("concavity_probe: need l < k");
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("concavity_probe: t outside [0, 1]");
  require_cone(a, k, "concavity_probe");
  require_cone(b, k, "concavity_probe");

  auto g = [k, l](const Spectrum& x) {
    const SymTable tab = elem_sym(x);
    return std::pow(tab.s_norm[k] / tab.s_norm[l], 1.0 / static_cast<double>(k - l));
  };
  std::vector<double> mid(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mid[i] = t * a[i] + (1.0 - t) * b[i];
  return g(Spectrum(std::move(mid))) - t * g(a) - (1.0 - t) * g(b);
}

}  // namespace chess
