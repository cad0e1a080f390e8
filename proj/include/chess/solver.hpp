#pragma once

// Cone-preserving damped Newton on the log-residual log S_k(I + Phi) - log f,
// a continuity path f_t = (1 - t) + t f from the trivial solution phi = 0,
// and the preconditioned BiCGStab solve used for each Newton step.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "chess/error.hpp"
#include "chess/grid.hpp"
#include "chess/hessian_op.hpp"

namespace chess {

struct SolveConfig {
  double newton_tol = 1e-9;        // sup-norm of the log-residual
  // Intermediate continuation stages only provide warm starts and stop at
  // max(newton_tol, stage_tol). Their discrete problems need not be exactly
  // compatible, so the residual can stall well above rounding.
  double stage_tol = 1e-6;
  int max_newton = 50;
  double krylov_tol = 1e-10;       // relative 2-norm residual
  double cone_margin_min = 1e-6;
  double damping = 0.5;            // backtracking factor
  int max_backtracks = 40;
  double armijo = 1e-4;
  int continuation_steps = 4;      // initial t-step is 1 / continuation_steps
  double min_t_step = 1e-4;
  std::uint64_t seed = 0;
  bool record_monitors = true;
  Exec exec = Exec::parallel;

  /// Throws ParameterError on non-positive tolerances or damping outside (0, 1).
  void validate() const;
};

struct IterationRecord {
  double t = 1.0;
  int stage = 0;
  int iteration = 0;
  double residual = 0.0;
  double cone_margin = 0.0;
  double step = 0.0;       // accepted step length, 0 for the initial record
  int backtracks = 0;
  int krylov_iterations = 0;
  std::optional<EstimateReport> report;
};

struct SolveTrace {
  std::vector<IterationRecord> records;
  int stages = 0;
};

struct SolveResult {
  Field phi;
  SolveTrace trace;
};

class SolverError : public Error {
 public:
  enum class Kind { step_failure, non_convergence, linear_solve, continuation };

  SolverError(Kind kind, const std::string& what, SolveTrace trace = {},
              std::vector<double> residual_history = {})
      : Error(what), kind_(kind), trace_(std::move(trace)), history_(std::move(residual_history)) {}

  Kind kind() const noexcept { return kind_; }
  const SolveTrace& trace() const noexcept { return trace_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  Kind kind_;
  SolveTrace trace_;
  std::vector<double> history_;
};

const char* to_string(SolverError::Kind kind);

struct KrylovResult {
  Field solution;
  int iterations = 0;
  std::vector<double> residual_history;  // relative residual per iteration
};

/// Mean-zero psi with P apply_lin(op, psi) = rhs, P the mean-zero projection.
/// Right-preconditioned by (c Delta)^{-1}, c = mean(tr G) / n.
KrylovResult krylov_solve(const LinearizedOp& op, const Field& rhs, const SolveConfig& cfg);

/// log S_k(I + Phi) - log f.
Field log_residual(const Field& phi, const Field& f, std::size_t k, Exec exec = Exec::parallel);

/// Checks f > 0 (PositivityError) and |mean f - 1| <= 1e-12 (CompatibilityError).
void validate_rhs(const Field& f);

SolveResult newton_solve(const Field& f, std::size_t k, const Field& phi0, const SolveConfig& cfg);
SolveResult continuity_solve(const Field& f, std::size_t k, const SolveConfig& cfg);

}  // namespace chess
