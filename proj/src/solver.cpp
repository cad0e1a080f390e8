#include "chess/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chess {

namespace {

double dot(const Field& a, const Field& b, Exec exec) {
  return blocked_sum(exec, a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double norm2(const Field& a, Exec exec) { return std::sqrt(dot(a, a, exec)); }

void axpy(Field& y, double alpha, const Field& x, Exec exec) {
  for_each_index(exec, y.size(), [&](std::size_t i) { y[i] += alpha * x[i]; });
}

double sup_abs(const Field& r) { return r.sup_norm(); }

struct Evaluation {
  Field residual;
  double sup;
};

Evaluation residual_from_value(const Field& value, const Field& log_f, Exec exec) {
  Field r(value.grid());
  for_each_index(exec, r.size(), [&](std::size_t i) { r[i] = std::log(value[i]) - log_f[i]; });
  const double s = sup_abs(r);
  return {std::move(r), s};
}

}  // namespace

void SolveConfig::validate() const {
  if (!(newton_tol > 0.0) || !(stage_tol > 0.0) || !(krylov_tol > 0.0) || !(cone_margin_min > 0.0) || !(min_t_step > 0.0))
    throw ParameterError("SolveConfig: tolerances must be positive");
  if (!(damping > 0.0 && damping < 1.0)) throw ParameterError("SolveConfig: damping must lie in (0, 1)");
  if (max_newton < 0 || max_backtracks < 0 || continuation_steps < 1)
    throw ParameterError("SolveConfig: iteration limits must be non-negative");
}

const char* to_string(SolverError::Kind kind) {
  switch (kind) {
    case SolverError::Kind::step_failure: return "step_failure";
    case SolverError::Kind::non_convergence: return "non_convergence";
    case SolverError::Kind::linear_solve: return "linear_solve";
    case SolverError::Kind::continuation: return "continuation";
  }
  return "unknown";
}

KrylovResult krylov_solve(const LinearizedOp& op, const Field& rhs, const SolveConfig& cfg) {
  const Exec exec = cfg.exec;
  const TorusGrid& grid = rhs.grid();
  const double rhs_sup = rhs.sup_norm();
  if (std::abs(mean(rhs, exec)) > 1e-8 * rhs_sup)
    throw CompatibilityError("krylov_solve: right-hand side is not mean-zero");

  KrylovResult out{Field(grid), 0, {}};
  const double bnorm = norm2(rhs, exec);
  if (bnorm == 0.0) return out;

  const double c = mean(op.trace_g, exec) / static_cast<double>(grid.n());
  auto apply = [&](const Field& x) { return project_mean_zero(apply_lin(op, x, exec), exec); };
  auto precond = [&](const Field& r) {
    Field z = laplace_inverse(project_mean_zero(r, exec), exec);
    z *= 1.0 / c;
    return z;
  };

  const std::size_t max_iter = 10 * grid.size();
  Field x(grid);
  Field r = rhs;
  const Field r_hat = rhs;
  Field p(grid), v(grid);
  double rho = 1.0, alpha = 1.0, omega = 1.0;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double rho_new = dot(r_hat, r, exec);
    if (rho_new == 0.0 || omega == 0.0)
      throw SolverError(SolverError::Kind::linear_solve, "krylov_solve: BiCGStab breakdown (rho or omega = 0)",
                        {}, out.residual_history);
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for_each_index(exec, p.size(), [&](std::size_t i) { p[i] = r[i] + beta * (p[i] - omega * v[i]); });
    const Field p_hat = precond(p);
    v = apply(p_hat);
    const double rv = dot(r_hat, v, exec);
    if (rv == 0.0)
      throw SolverError(SolverError::Kind::linear_solve, "krylov_solve: BiCGStab breakdown (<r_hat, v> = 0)",
                        {}, out.residual_history);
    alpha = rho / rv;
    Field s = r;
    axpy(s, -alpha, v, exec);
    const double snorm = norm2(s, exec);
    if (snorm <= cfg.krylov_tol * bnorm) {
      axpy(x, alpha, p_hat, exec);
      out.residual_history.push_back(snorm / bnorm);
      out.iterations = static_cast<int>(it);
      out.solution = project_mean_zero(std::move(x), exec);
      return out;
    }
    const Field s_hat = precond(s);
    const Field t = apply(s_hat);
    const double tt = dot(t, t, exec);
    if (tt == 0.0)
      throw SolverError(SolverError::Kind::linear_solve, "krylov_solve: BiCGStab breakdown (t = 0)", {},
                        out.residual_history);
    omega = dot(t, s, exec) / tt;
    axpy(x, alpha, p_hat, exec);
    axpy(x, omega, s_hat, exec);
    r = std::move(s);
    axpy(r, -omega, t, exec);
    const double rel = norm2(r, exec) / bnorm;
    out.residual_history.push_back(rel);
    if (!std::isfinite(rel))
      throw SolverError(SolverError::Kind::linear_solve, "krylov_solve: non-finite residual", {},
                        out.residual_history);
    if (rel <= cfg.krylov_tol) {
      out.iterations = static_cast<int>(it);
      out.solution = project_mean_zero(std::move(x), exec);
      return out;
    }
  }
  throw SolverError(SolverError::Kind::linear_solve, "krylov_solve: iteration limit reached", {},
                    out.residual_history);
}

Field log_residual(const Field& phi, const Field& f, std::size_t k, Exec exec) {
  const Field value = apply_op(phi, k, exec);
  Field r(phi.grid());
  for_each_index(exec, r.size(), [&](std::size_t i) { r[i] = std::log(value[i]) - std::log(f[i]); });
  return r;
}

void validate_rhs(const Field& f) {
  const double fmin = f.min();
  if (!(fmin > 0.0)) throw PositivityError("right-hand side has minimum " + std::to_string(fmin) + " <= 0");
  const double mu = mean(f);
  if (std::abs(mu - 1.0) > 1e-12)
    throw CompatibilityError("right-hand side has mean " + std::to_string(mu) + ", expected 1");
}

namespace {

SolveResult newton_impl(const Field& f, std::size_t k, const Field& phi0, const SolveConfig& cfg, double t,
                        int stage, SolveTrace trace) {
  const Exec exec = cfg.exec;
  Field log_f(f.grid());
  for_each_index(exec, f.size(), [&](std::size_t i) { log_f[i] = std::log(f[i]); });

  Field phi = project_mean_zero(phi0, exec);
  LinearizedOp op = linearize(phi, k, exec);
  Evaluation ev = residual_from_value(op.value, log_f, exec);

  auto record = [&](int iter, double margin, double step, int backtracks, int kiters) {
    IterationRecord rec{t, stage, iter, ev.sup, margin, step, backtracks, kiters, std::nullopt};
    if (cfg.record_monitors) rec.report = monitors(phi, f, k, exec);
    trace.records.push_back(std::move(rec));
  };
  record(0, op.margin, 0.0, 0, 0);
  std::optional<HermField> accepted_hess;

  for (int iter = 1; ev.sup > cfg.newton_tol; ++iter) {
    if (iter > cfg.max_newton)
      throw SolverError(SolverError::Kind::non_convergence,
                        "newton_solve: no convergence in " + std::to_string(cfg.max_newton) +
                            " iterations (residual " + std::to_string(ev.sup) + ")",
                        std::move(trace));
    Field rhs = project_mean_zero(ev.residual, exec);
    rhs *= -1.0;
    const KrylovResult kr = krylov_solve(op, rhs, cfg);

    double step = 1.0;
    bool accepted = false;
    int backtracks = 0;
    double margin = 0.0;
    for (; backtracks <= cfg.max_backtracks; ++backtracks, step *= cfg.damping) {
      Field trial = phi;
      axpy(trial, step, kr.solution, exec);
      HermField hess = complex_hessian(trial, exec);
      const OpEvaluation oe = evaluate_op(hess, k, exec);
      margin = oe.margin.margin;
      if (!(margin >= cfg.cone_margin_min)) continue;
      const Evaluation trial_ev = residual_from_value(oe.value, log_f, exec);
      if (trial_ev.sup <= (1.0 - cfg.armijo * step) * ev.sup) {
        phi = project_mean_zero(std::move(trial), exec);
        accepted_hess = std::move(hess);
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw SolverError(SolverError::Kind::step_failure,
                        "newton_solve: backtracking exhausted at iteration " + std::to_string(iter),
                        std::move(trace));
    // Mean projection does not change the Hessian.
    op = linearize(*accepted_hess, k, exec);
    ev = residual_from_value(op.value, log_f, exec);
    record(iter, margin, step, backtracks, kr.iterations);
  }
  return {std::move(phi), std::move(trace)};
}

}  // namespace

SolveResult newton_solve(const Field& f, std::size_t k, const Field& phi0, const SolveConfig& cfg) {
  cfg.validate();
  if (!(f.grid() == phi0.grid())) throw ParameterError("newton_solve: grid mismatch");
  if (k < 1 || k > f.grid().n()) throw ParameterError("newton_solve: k out of range");
  validate_rhs(f);
  const MarginInfo mi = cone_margin_info(phi0, k, cfg.exec);
  if (!(mi.margin >= cfg.cone_margin_min))
    throw ConeViolation("newton_solve: initial guess has cone margin " + std::to_string(mi.margin),
                        mi.worst_point, mi.margin);
  SolveTrace trace;
  trace.stages = 1;
  return newton_impl(f, k, phi0, cfg, 1.0, 0, std::move(trace));
}

SolveResult continuity_solve(const Field& f, std::size_t k, const SolveConfig& cfg) {
  cfg.validate();
  if (k < 1 || k > f.grid().n()) throw ParameterError("continuity_solve: k out of range");
  validate_rhs(f);
  const TorusGrid& grid = f.grid();
  Field phi(grid);
  SolveTrace trace;

  if (f.sup_norm() == 1.0 && f.min() == 1.0) {
    trace.records.push_back({1.0, 0, 0, 0.0, 1.0, 0.0, 0, 0, std::nullopt});
    return {std::move(phi), std::move(trace)};
  }

  double t = 0.0;
  double dt = 1.0 / static_cast<double>(cfg.continuation_steps);
  int stage = 0;
  while (t < 1.0) {
    const double t_next = std::min(1.0, t + dt);
    Field ft(grid);
    for_each_index(cfg.exec, grid.size(), [&](std::size_t i) { ft[i] = (1.0 - t_next) + t_next * f[i]; });
    SolveConfig stage_cfg = cfg;
    if (t_next < 1.0) stage_cfg.newton_tol = std::max(cfg.newton_tol, cfg.stage_tol);
    try {
      SolveResult res = newton_impl(ft, k, phi, stage_cfg, t_next, stage, trace);
      phi = std::move(res.phi);
      trace = std::move(res.trace);
      t = t_next;
      ++stage;
      dt *= 1.5;
    } catch (const SolverError& e) {
      if (!e.trace().records.empty()) trace = e.trace();
      dt *= 0.5;
      if (dt < cfg.min_t_step)
        throw SolverError(SolverError::Kind::continuation,
                          "continuity_solve: t-step underflow at t = " + std::to_string(t) + " (" +
                              e.what() + ")",
                          std::move(trace));
    }
  }
  trace.stages = stage;
  return {std::move(phi), std::move(trace)};
}

}  // namespace chess
