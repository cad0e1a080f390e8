#pragma once

// Normalized elementary symmetric functions S_j = sigma_j / C(n, j) on R^n,
// membership in the cones Gamma_k = {S_1 > 0, ..., S_k > 0}, partial
// derivatives, and the classical inequalities that hold on Gamma_k.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace chess {

/// Real eigenvalue vector. Entries are finite; `sorted_desc` yields the
/// non-increasing arrangement used by the ordered-partials inequalities.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> values);
  Spectrum(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  Spectrum sorted_desc() const;

 private:
  std::vector<double> values_;
};

/// sigma_0..sigma_n and the normalized S_0..S_n of one spectrum.
struct SymTable {
  std::vector<double> sigma;
  std::vector<double> s_norm;

  double S(std::size_t j) const { return s_norm[j]; }
};

/// Binomial coefficient as a double; exact for n <= 64.
double binomial(std::size_t n, std::size_t k);

SymTable elem_sym(std::span<const double> lambda);
inline SymTable elem_sym(const Spectrum& lambda) { return elem_sym(lambda.values()); }

/// sigma_0..sigma_upto of the spectrum with index `skip` removed.
std::vector<double> elem_sym_without(std::span<const double> lambda, std::size_t skip,
                                     std::size_t upto);

/// True iff S_j(lambda) > margin for j = 1..k. Throws ParameterError unless 1 <= k <= n.
bool cone_member(const Spectrum& lambda, std::size_t k, double margin = 0.0);

/// Smallest j in 1..k with S_j(lambda) <= margin, if any.
std::optional<std::size_t> first_cone_failure(const Spectrum& lambda, std::size_t k,
                                              double margin = 0.0);

/// Gradient of S_k: component j is sigma_{k-1}(lambda without j) / C(n, k).
std::vector<double> s_grad(const Spectrum& lambda, std::size_t k);

/// One inequality evaluated at a point. `value` is the signed slack (holds
/// iff value >= 0); `scale` is the magnitude of the compared quantities, so
/// a tolerance check reads value >= -tol * (1 + scale).
struct Slack {
  double value = 0.0;
  double scale = 0.0;

  bool holds(double tol) const { return value >= -tol * (1.0 + scale); }
  double relative() const { return value / (1.0 + scale); }
};

struct GeneralizedTerm {
  std::size_t k, l, r, s;
  double lhs;  // (S_k / S_l)^{1/(k-l)}
  double rhs;  // (S_r / S_s)^{1/(r-s)}
  Slack slack;
};

struct InequalityReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<Slack> newton;            // S_j^2 - S_{j-1} S_{j+1}, j = 1..n-1
  std::vector<double> maclaurin_chain;  // S_1, S_2^{1/2}, ..., S_k^{1/k}
  std::vector<Slack> maclaurin;         // chain[j] - chain[j+1]
  std::vector<GeneralizedTerm> generalized;
  Slack partial_positivity;             // min_j dS_k/dlambda_j
  std::vector<Slack> sorted_partials;   // consecutive differences, sorted spectrum
  Slack lambda1_partial;                // lambda_1 dS_k/dlambda_1 - (k/n) S_k
  Slack log_partial_lower;              // (1/S_k) dS_k/dlambda_1 - k/(n lambda_1)
  std::optional<Slack> spectrum_bound;  // n S_1 - max_j |lambda_j|, k >= 2 only

  /// Smallest relative slack over every recorded inequality.
  double worst_relative() const;
  bool holds(double tol) const { return worst_relative() >= -tol; }
};

/// Throws ConeViolation (index = first failing j) when lambda is not in Gamma_k.
InequalityReport inequality_report(const Spectrum& lambda, std::size_t k);

/// g(t a + (1-t) b) - t g(a) - (1-t) g(b) for g = (S_k / S_l)^{1/(k-l)};
/// l = 0 gives S_k^{1/k}. Nonnegative on Gamma_k by concavity.
double concavity_probe(const Spectrum& a, const Spectrum& b, std::size_t k, double t,
                       std::size_t l = 0);

}  // namespace chess
