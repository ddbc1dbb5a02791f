#pragma once

// Unrestarted GMRES with modified Gram–Schmidt, matrix-free.

#include <functional>
#include <vector>

#include "cntfield/types.hpp"

namespace cntfield {

struct LinearOperator {
  Index dimension = 0;
  std::function<Vector(const Vector&)> apply;
};

struct GmresOptions {
  double tol = 1e-12;  // on ‖b − A x‖₂ / ‖b‖₂
  int maxit = 100;
};

struct SolveReport {
  int iterations = 0;
  /// Least-squares relative residual after each iteration (non-increasing);
  /// entry 0 is the initial one.
  std::vector<double> residual_history;
  bool converged = false;
  /// True relative residual of the returned iterate.
  double final_residual = 0.0;
};

struct GmresResult {
  Vector solution;
  SolveReport report;
};

/// Solves A x = b from x₀ = 0. Convergence is declared on the true residual
/// of the iterate, so the least-squares estimate alone never ends the solve.
/// After maxit iterations the best iterate is returned with converged = false.
GmresResult gmres(const LinearOperator& op, const Vector& rhs, const GmresOptions& options = {});

}  // namespace cntfield
