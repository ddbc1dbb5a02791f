#include "cntfield/solver.hpp"

#include <cmath>
#include <sstream>

#include "cntfield/spectral.hpp"

namespace cntfield {

Vector build_gamma(const DiscretizedBoundary& boundary) {
  Vector gamma = Vector::Zero(boundary.size());
  const Index k = boundary.dirichlet_component();
  const Index n = boundary.nodes_per_component();
  gamma.segment(boundary.begin(k), n) = boundary.eta().segment(boundary.begin(k), n).real();
  return gamma;
}

BoundarySolution solve_rh(const KernelContext& ctx, const SolverOptions& options) {
  const auto& b = ctx.boundary();
  const Index n = b.nodes_per_component();
  BoundarySolution sol;
  sol.alpha = ctx.alpha();
  sol.corner_window = options.corner_window;
  sol.gamma = build_gamma(b);

  const auto [n_gamma, m_gamma] = apply_NM(ctx, sol.gamma);
  LinearOperator op{ctx.size(), [&](const Vector& x) -> Vector { return x - apply_N(ctx, x); }};
  auto result = gmres(op, -m_gamma, options.gmres);
  sol.report = result.report;
  if (!result.report.converged) {
    std::ostringstream msg;
    msg << "GMRES did not reach tolerance " << options.gmres.tol << " in " << result.report.iterations
        << " iterations (residual " << result.report.final_residual << ")";
    throw ConvergenceError(msg.str(), result.report);
  }
  sol.mu = std::move(result.solution);

  const auto [n_mu, m_mu] = apply_NM(ctx, sol.mu);
  sol.h_nodal = 0.5 * (m_mu - (sol.gamma - n_gamma));

  const Index comps = b.component_count();
  sol.h_piecewise.resize(comps);
  sol.h_flatness.resize(comps);
  for (Index k = 0; k < comps; ++k) {
    double sum = 0.0;
    Index count = 0;
    for (Index j = b.begin(k); j < b.begin(k) + n; ++j) {
      if (b.in_corner_window(j, options.corner_window)) continue;
      sum += sol.h_nodal[j];
      ++count;
    }
    const double mean = sum / static_cast<double>(count);
    double spread = 0.0;
    for (Index j = b.begin(k); j < b.begin(k) + n; ++j) {
      if (b.in_corner_window(j, options.corner_window)) continue;
      spread = std::max(spread, std::abs(sol.h_nodal[j] - mean));
    }
    sol.h_piecewise[k] = mean;
    sol.h_flatness[k] = spread;
  }

  sol.c = -sol.h_piecewise[b.dirichlet_component()];
  const auto& cnts = b.inclusion_components();
  sol.cnt_count = static_cast<Index>(cnts.size());
  const auto hole = b.hole_component();
  sol.delta.resize(sol.cnt_count + (hole ? 1 : 0));
  for (Index i = 0; i < sol.cnt_count; ++i) sol.delta[i] = sol.h_piecewise[cnts[static_cast<std::size_t>(i)]] + sol.c;
  if (hole) sol.delta[sol.cnt_count] = sol.h_piecewise[*hole];

  sol.f_boundary.resize(ctx.size());
  for (Index j = 0; j < ctx.size(); ++j) {
    const Index k = b.component_of(j);
    const Complex inner(sol.gamma[j] + sol.h_piecewise[k], sol.mu[j]);
    const Complex rotated = ctx.theta(k) != 0.0 ? Complex(0.0, 1.0) * inner : inner;
    sol.f_boundary[j] = rotated + sol.c;
  }
  return sol;
}

BoundaryDerivative boundary_f_prime(const CVector& f_boundary, const DiscretizedBoundary& boundary,
                                    Index corner_window) {
  if (f_boundary.size() != boundary.size()) throw InvalidInput("boundary_f_prime: dimension mismatch");
  const Index n = boundary.nodes_per_component();
  BoundaryDerivative out;
  out.df_dt.resize(boundary.size());
  out.values.resize(boundary.size());
  out.valid.resize(static_cast<std::size_t>(boundary.size()));
  for (Index k = 0; k < boundary.component_count(); ++k) {
    const Index b = boundary.begin(k);
    out.df_dt.segment(b, n) = spectral_derivative(CVector(f_boundary.segment(b, n)));
  }
  for (Index j = 0; j < boundary.size(); ++j) {
    out.values[j] = out.df_dt[j] / boundary.eta_prime()[j];
    out.valid[static_cast<std::size_t>(j)] = !boundary.in_corner_window(j, corner_window);
  }
  return out;
}

}  // namespace cntfield
