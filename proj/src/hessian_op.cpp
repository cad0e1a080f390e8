#include "chess/hessian_op.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chess/error.hpp"
#include "chess/herm.hpp"
#include "chess/symfunc.hpp"

namespace chess {

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) throw ParameterError("k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
}

double min_s_upto(const SymTable& t, std::size_t k) {
  double m = t.s_norm[1];
  for (std::size_t j = 2; j <= k; ++j) m = std::min(m, t.s_norm[j]);
  return m;
}

std::pair<double, double> range_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

// sum_{a,b} G_ab Psi_ba, reading both operands from field storage.
double contract_at(const HermField& g, const HermField& p, std::size_t i) {
  const std::size_t n = g.n();
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a) s += g.diag(a)[i] * p.diag(a)[i];
  for (std::size_t u = 0; u < n * (n - 1) / 2; ++u) s += 2.0 * (g.upper(u)[i] * std::conj(p.upper(u)[i])).real();
  return s;
}

}  // namespace

Field apply_op(const HermField& hess, std::size_t k, Exec exec) {
  check_k(k, hess.n());
  Field out(hess.grid());
  for_each_index(exec, hess.size(), [&](std::size_t i) {
    out[i] = elem_sym(eigvals_h(hess.shifted_identity(i))).s_norm[k];
  });
  return out;
}

Field apply_op(const Field& phi, std::size_t k, Exec exec) {
  return apply_op(complex_hessian(phi, exec), k, exec);
}

OpEvaluation evaluate_op(const HermField& hess, std::size_t k, Exec exec) {
  check_k(k, hess.n());
  OpEvaluation ev{Field(hess.grid()), {0.0, 0}};
  std::vector<double> m(hess.size());
  for_each_index(exec, hess.size(), [&](std::size_t i) {
    const SymTable t = elem_sym(eigvals_h(hess.shifted_identity(i)));
    m[i] = min_s_upto(t, k);
    ev.value[i] = t.s_norm[k];
  });
  const auto it = std::min_element(m.begin(), m.end());
  ev.margin = {*it, static_cast<std::size_t>(it - m.begin())};
  return ev;
}

MarginInfo cone_margin_info(const HermField& hess, std::size_t k, Exec exec) {
  return evaluate_op(hess, k, exec).margin;
}

MarginInfo cone_margin_info(const Field& phi, std::size_t k, Exec exec) {
  return cone_margin_info(complex_hessian(phi, exec), k, exec);
}

LinearizedOp linearize(const HermField& hess, std::size_t k, Exec exec) {
  const TorusGrid& grid = hess.grid();
  check_k(k, grid.n());
  LinearizedOp op{HermField(grid), k, Field(grid), Field(grid), 0.0};
  std::vector<double> margin(grid.size());
  for_each_index(exec, grid.size(), [&](std::size_t i) {
    const EigenDecomp ed = eigh(hess.shifted_identity(i));
    const SymTable t = elem_sym(ed.values);
    margin[i] = min_s_upto(t, k);
    op.value[i] = t.s_norm[k];
    if (margin[i] > 0.0) {
      const HermMat g = deriv_from_eigen(ed, k, DerivKind::LogGrad);
      op.gfield.set(i, g);
      op.trace_g[i] = g.trace();
    }
  });
  const auto it = std::min_element(margin.begin(), margin.end());
  if (!(*it > 0.0)) {
    const auto worst = static_cast<std::size_t>(it - margin.begin());
    throw ConeViolation("linearize: I + Hess(phi) leaves Gamma_" + std::to_string(k) + " at point " +
                            std::to_string(worst),
                        worst, *it);
  }
  op.margin = *it;
  return op;
}

LinearizedOp linearize(const Field& phi, std::size_t k, Exec exec) {
  return linearize(complex_hessian(phi, exec), k, exec);
}

Field apply_lin(const LinearizedOp& op, const HermField& psi_hess, Exec exec) {
  Field out(op.gfield.grid());
  for_each_index(exec, out.size(), [&](std::size_t i) { out[i] = contract_at(op.gfield, psi_hess, i); });
  return out;
}

Field apply_lin(const LinearizedOp& op, const Field& psi, Exec exec) {
  return apply_lin(op, complex_hessian(psi, exec), exec);
}

EnergyIdentity energy_identity(const Field& phi, const Field& psi, std::size_t k, Exec exec) {
  const TorusGrid& grid = phi.grid();
  if (!(psi.grid() == grid)) throw ParameterError("energy_identity: grid mismatch");
  check_k(k, grid.n());
  const HermField hphi = complex_hessian(phi, exec);
  const HermField hpsi = complex_hessian(psi, exec);
  for (const auto& [h, name] : {std::pair{&hphi, "phi"}, std::pair{&hpsi, "psi"}}) {
    const MarginInfo mi = cone_margin_info(*h, k, exec);
    if (!(mi.margin > 0.0))
      throw ConeViolation(std::string("energy_identity: ") + name + " not admissible at point " +
                              std::to_string(mi.worst_point),
                          mi.worst_point, mi.margin);
  }
  const Field u = psi - phi;
  const auto du = complex_gradient(u, exec);
  const Field sphi = apply_op(hphi, k, exec);
  const Field spsi = apply_op(hpsi, k, exec);

  const std::size_t size = grid.size();
  const std::size_t n = grid.n();
  std::vector<std::vector<double>> integrand(k, std::vector<double>(size));
  for_each_index(exec, size, [&](std::size_t i) {
    std::vector<cplx> v(n);
    for (std::size_t a = 0; a < n; ++a) v[a] = du[a][i];
    const HermMat r = HermMat::outer(v);
    const HermMat xphi = hphi.shifted_identity(i);
    const HermMat xpsi = hpsi.shifted_identity(i);
    std::vector<HermMat> args(k);
    for (std::size_t l = 0; l < k; ++l) {
      args[0] = r;
      for (std::size_t c = 1; c < k; ++c) args[c] = c <= l ? xpsi : xphi;
      integrand[l][i] = polarize(args, k);
    }
  });

  EnergyIdentity e;
  e.lhs = blocked_sum(exec, size, [&](std::size_t i) { return u[i] * (spsi[i] - sphi[i]); }) /
          static_cast<double>(size);
  double sum_terms = 0.0;
  for (std::size_t l = 0; l < k; ++l) {
    const auto& w = integrand[l];
    e.terms.push_back(blocked_sum(exec, size, [&](std::size_t i) { return w[i]; }) /
                      static_cast<double>(size));
    e.min_integrand.push_back(*std::min_element(w.begin(), w.end()));
    sum_terms += e.terms.back();
  }
  e.defect = std::abs(e.lhs + sum_terms) / (std::abs(e.lhs) + 1.0);
  return e;
}

EstimateReport monitors(const Field& phi, const Field& f, std::size_t k, Exec exec) {
  const TorusGrid& grid = phi.grid();
  if (!(f.grid() == grid)) throw ParameterError("monitors: grid mismatch");
  const std::size_t n = grid.n();
  check_k(k, n);
  const std::size_t size = grid.size();
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);

  const HermField hess = complex_hessian(phi, exec);
  const MarginInfo mi = cone_margin_info(hess, k, exec);
  if (!(mi.margin > 0.0))
    throw ConeViolation("monitors: phi not admissible at point " + std::to_string(mi.worst_point),
                        mi.worst_point, mi.margin);

  std::vector<double> s1(size), abs_lam(size), lam_bound(size), s1_bound(size), ellip(size), trg(size),
      trh(size), trace_def(size), resid(size), trace_phi(size);
  std::vector<char> mac(size, 1);
  for_each_index(exec, size, [&](std::size_t i) {
    const EigenDecomp ed = eigh(hess.shifted_identity(i));
    const Spectrum& lam = ed.values;
    const SymTable t = elem_sym(lam);
    const auto& S = t.s_norm;
    double amax = 0.0;
    for (double v : lam.values()) amax = std::max(amax, std::abs(v));
    s1[i] = S[1];
    abs_lam[i] = amax;
    lam_bound[i] = dn * S[1] - amax;
    s1_bound[i] = S[k] * std::pow(S[k - 1] / S[k], dk - 1.0) - S[1];
    for (std::size_t j = 1; j < k; ++j) {
      const double hi = std::pow(S[j], 1.0 / static_cast<double>(j));
      const double lo = std::pow(S[j + 1], 1.0 / static_cast<double>(j + 1));
      if (hi - lo < -1e-9 * (1.0 + hi)) mac[i] = 0;
    }
    const HermMat g = deriv_from_eigen(ed, k, DerivKind::LogGrad);
    const std::vector<double> grad = s_grad(lam, k);
    // lam is non-increasing, so the smallest partial sits at lam[0].
    ellip[i] = *std::min_element(grad.begin(), grad.end()) / S[k] - dk / (dn * lam[0]);
    trg[i] = g.trace();
    trh[i] = std::pow(S[k], 1.0 / dk) * trg[i] / dk;
    trace_def[i] = std::abs(trace_pairing(g, hess.at(i)) - (dk - trg[i]));
    resid[i] = std::abs(std::log(S[k]) - std::log(f[i]));
    trace_phi[i] = hess.at(i).trace();
  });

  EstimateReport r;
  const double lo = phi.min();
  r.osc_phi = phi.max() - lo;
  const Field b = grad_sq(phi, exec);
  r.sup_B = b.max();
  std::vector<double> hp(size), hpp(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double t = phi[i] - lo;
    hp[i] = 1.0 / (2.0 * t + 1.0);
    hpp[i] = -2.0 / ((2.0 * t + 1.0) * (2.0 * t + 1.0));
    if (b[i] > 0.0) r.sup_A = std::max(r.sup_A, std::log(b[i]) - 0.5 * std::log(2.0 * t + 1.0));
    r.sup_c2_minus = i == 0 ? dn + trace_phi[i] - t : std::max(r.sup_c2_minus, dn + trace_phi[i] - t);
    r.sup_c2_plus = i == 0 ? dn + trace_phi[i] + t : std::max(r.sup_c2_plus, dn + trace_phi[i] + t);
  }
  r.sup_S1 = *std::max_element(s1.begin(), s1.end());
  r.sup_abs_lambda = *std::max_element(abs_lam.begin(), abs_lam.end());
  r.spectrum_bound_slack = *std::min_element(lam_bound.begin(), lam_bound.end());
  r.s1_bound_slack = *std::min_element(s1_bound.begin(), s1_bound.end());
  r.ellipticity_slack = *std::min_element(ellip.begin(), ellip.end());
  r.tr_G_range = range_of(trg);
  r.tr_H_range = range_of(trh);
  r.max_trace_identity_defect = *std::max_element(trace_def.begin(), trace_def.end());
  r.h_prime_range = range_of(hp);
  r.h_second_range = range_of(hpp);
  r.residual_sup = *std::max_element(resid.begin(), resid.end());
  r.maclaurin_ok = std::all_of(mac.begin(), mac.end(), [](char c) { return c != 0; });

  if (f.min() > 0.0) {
    Field root(grid);
    for (std::size_t i = 0; i < size; ++i) root[i] = std::pow(f[i], 1.0 / dk);
    const Field lap = complex_laplacian(root, exec);
    double bound = root[0] - lap[0];
    for (std::size_t i = 1; i < size; ++i) bound = std::max(bound, root[i] - lap[i]);
    r.tr_H_bound = bound;
  } else {
    r.tr_H_bound = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace chess
