#pragma once

// The complex k-Hessian operator phi -> S_k(I + phi_{a b-bar}) on torus
// fields, its linearization through the log-gradient metric G, the cone
// margin that certifies ellipticity, the energy identity behind uniqueness,
// and pointwise monitors for the quantities used in the a priori estimates.

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "chess/grid.hpp"
#include "chess/parallel.hpp"

namespace chess {

/// Pointwise S_k(I + Phi(x)).
Field apply_op(const Field& phi, std::size_t k, Exec exec = Exec::parallel);
Field apply_op(const HermField& hess, std::size_t k, Exec exec = Exec::parallel);

struct MarginInfo {
  double margin;           // min over points of min_{j<=k} S_j(I + Phi)
  std::size_t worst_point;
};

MarginInfo cone_margin_info(const Field& phi, std::size_t k, Exec exec = Exec::parallel);
MarginInfo cone_margin_info(const HermField& hess, std::size_t k, Exec exec = Exec::parallel);
/// S_k(I + Phi) and the cone margin from a single pass over the points.
struct OpEvaluation {
  Field value;
  MarginInfo margin;
};
OpEvaluation evaluate_op(const HermField& hess, std::size_t k, Exec exec = Exec::parallel);

inline double cone_margin(const Field& phi, std::size_t k, Exec exec = Exec::parallel) {
  return cone_margin_info(phi, k, exec).margin;
}

/// psi -> sum G^{ab}(x) psi_{b a-bar}(x), where G is the log-gradient of S_k
/// at I + Phi(x). This is the derivative of log apply_op at phi.
struct LinearizedOp {
  HermField gfield;
  std::size_t k;
  Field value;    // S_k(I + Phi), reused by the Newton residual
  Field trace_g;  // tr G = k S_{k-1} / S_k
  double margin = 0.0;
};

/// Throws ConeViolation (index = worst grid point) when cone_margin <= 0.
LinearizedOp linearize(const Field& phi, std::size_t k, Exec exec = Exec::parallel);
LinearizedOp linearize(const HermField& hess, std::size_t k, Exec exec = Exec::parallel);
Field apply_lin(const LinearizedOp& op, const Field& psi, Exec exec = Exec::parallel);
/// Same contraction against a precomputed Hessian.
Field apply_lin(const LinearizedOp& op, const HermField& psi_hess, Exec exec = Exec::parallel);

struct EnergyIdentity {
  double lhs = 0.0;                   // mean((psi - phi)(S_k[psi] - S_k[phi]))
  std::vector<double> terms;          // l = 0..k-1
  std::vector<double> min_integrand;  // pointwise minimum of each term's integrand
  double defect = 0.0;                // |lhs + sum terms| / (|lhs| + 1)
};

/// Term l is the mean of P_k(du (x) conj(du), (I+Psi) x l, (I+Phi) x (k-1-l)),
/// with u = psi - phi. Integration by parts gives lhs = -sum(terms).
EnergyIdentity energy_identity(const Field& phi, const Field& psi, std::size_t k,
                               Exec exec = Exec::parallel);

struct EstimateReport {
  double sup_B = 0.0;
  double sup_A = -std::numeric_limits<double>::infinity();  // -inf when grad phi == 0
  double osc_phi = 0.0;
  double sup_S1 = 0.0;
  double sup_abs_lambda = 0.0;
  double spectrum_bound_slack = 0.0;  // min_x n S_1 - max_j |lambda_j|
  double s1_bound_slack = 0.0;  // min_x S_k (S_{k-1}/S_k)^{k-1} - S_1
  double ellipticity_slack = 0.0;  // min_x lambda_min(G) - k / (n lambda_max)
  std::pair<double, double> tr_G_range{0.0, 0.0};
  std::pair<double, double> tr_H_range{0.0, 0.0};
  double max_trace_identity_defect = 0.0;  // |sum G Phi - (k - tr G)|
  double sup_c2_minus = 0.0;    // sup (n + Delta phi - phi)
  double sup_c2_plus = 0.0;     // sup (n + Delta phi + phi)
  std::pair<double, double> h_prime_range{0.0, 0.0};
  std::pair<double, double> h_second_range{0.0, 0.0};
  double tr_H_bound = 0.0;      // sup (f^{1/k} - Delta f^{1/k})
  double residual_sup = 0.0;    // sup |log S_k - log f|
  bool maclaurin_ok = true;
};

/// phi is shifted so inf phi = 0 before h(t) = log(2t + 1) / 2 and the
/// n + Delta phi -/+ phi combinations are evaluated.
/// Throws ConeViolation when phi is not k-admissible.
EstimateReport monitors(const Field& phi, const Field& f, std::size_t k, Exec exec = Exec::parallel);

}  // namespace chess
