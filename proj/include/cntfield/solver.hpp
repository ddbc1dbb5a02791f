#pragma once

// Riemann–Hilbert reduction of the mixed problem. With γ = Re η on the outer
// square and 0 elsewhere, the density μ solves (I − N)μ = −Mγ and
//   h = [Mμ − (I − N)γ] / 2
// is piecewise constant. The boundary values of the complex temperature are
//   f = e^{iθ}(γ + h + iμ) + c,  c = −h_outer,
// so Re f = δ_k = h_k + c on nanotube k, Re f = Re η on the outer square and
// Im f = h_hole on the insulated hole.

#include <optional>
#include <vector>

#include "cntfield/errors.hpp"
#include "cntfield/gnk.hpp"
#include "cntfield/krylov.hpp"

namespace cntfield {

struct SolverOptions {
  GmresOptions gmres;
  /// Nodes within this many grid steps of a square corner are left out of
  /// the per-component averages of h and of derivative diagnostics.
  Index corner_window = 3;
};

struct BoundarySolution {
  CVector f_boundary;   // f(η(t_i)) at every node
  Vector mu;
  Vector gamma;
  Vector h_nodal;       // the h-formula evaluated node by node
  Vector h_piecewise;   // per-component mean of h_nodal
  Vector h_flatness;    // per-component max |h_nodal − mean|
  /// δ_1..δ_m (nanotube temperatures, in component order), followed by the
  /// conjugate constant Im f on the insulated hole when there is one.
  Vector delta;
  Index cnt_count = 0;
  double c = 0.0;
  Complex alpha;
  Index corner_window = 3;
  SolveReport report;

  Vector cnt_delta() const { return delta.head(cnt_count); }
  std::optional<double> hole_constant() const {
    if (delta.size() > cnt_count) return delta[cnt_count];
    return std::nullopt;
  }
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, SolveReport report) : Error(what), report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// γ = Re η on the Dirichlet component, 0 elsewhere.
Vector build_gamma(const DiscretizedBoundary& boundary);

/// Throws ConvergenceError (carrying the report) if GMRES does not reach the tolerance.
BoundarySolution solve_rh(const KernelContext& ctx, const SolverOptions& options = {});

struct BoundaryDerivative {
  CVector df_dt;   // spectral t-derivative of f(η(t)), per component
  CVector values;  // f'(η) = (df/dt)/η'
  std::vector<bool> valid;  // false inside square corner windows
};

/// f'(η(t_i)) by spectral differentiation along each component.
BoundaryDerivative boundary_f_prime(const CVector& f_boundary, const DiscretizedBoundary& boundary,
                                    Index corner_window = 3);
inline BoundaryDerivative boundary_f_prime(const BoundarySolution& sol, const DiscretizedBoundary& boundary) {
  return boundary_f_prime(sol.f_boundary, boundary, sol.corner_window);
}

}  // namespace cntfield
