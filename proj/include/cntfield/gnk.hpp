#pragma once

// The generalized Neumann kernel N and its companion M for
//   A(t) = e^{−iθ(t)} (η(t) − α),  θ = π/2 on the insulated hole, 0 elsewhere,
//   N(s,t) = (1/π) Im[ A(s)/A(t) · η'(t)/(η(t) − η(s)) ],
//   M(s,t) = (1/π) Re[ A(s)/A(t) · η'(t)/(η(t) − η(s)) ].
// N is continuous; M = −(1/2π) cot((s−t)/2) + M_reg with M_reg continuous.
//
// The operators are applied matrix-free: one Cauchy-type sum per matvec
// delivers both N and M. The cotangent part of M is integrated with the
// alternate-point rule. On graded (square) components the same-component
// integrals are evaluated on a finer grid after trigonometric upsampling of
// the density: the grading crowds nodes near the corners, and the coarse
// trapezoidal rule alone cannot resolve the kernel across a corner. The
// same fine grid serves nodes of other curves that sit closer to a square
// than a few of its (wide, mid-side) node spacings.

#include <memory>
#include <utility>
#include <vector>

#include "cntfield/geometry.hpp"
#include "cntfield/spectral.hpp"
#include "cntfield/summation.hpp"

namespace cntfield {

struct KernelOptions {
  /// Fine-to-coarse ratio for same-component quadrature on squares. Odd so
  /// that no fine node lands on a corner.
  int upsample = 31;
  /// Disable to get the plain Nyström discretization on every component.
  bool refine_graded = true;
  /// Nodes of other curves closer to a square than this many of its
  /// largest node spacings also see the square through the fine grid.
  double near_field = 4.0;
  std::shared_ptr<const SummationBackend> backend;
};

class KernelContext {
 public:
  KernelContext(DiscretizedBoundary boundary, Complex alpha, KernelOptions options = {});

  const DiscretizedBoundary& boundary() const { return boundary_; }
  const KernelOptions& options() const { return options_; }
  const SummationBackend& backend() const { return *options_.backend; }
  Complex alpha() const { return alpha_; }
  Index size() const { return boundary_.size(); }

  /// θ on component k: π/2 for the insulated hole, 0 otherwise.
  double theta(Index k) const;
  const CVector& A() const { return A_; }
  /// η'(t)/(η(t) − α) at every node.
  const CVector& A_prime_over_A() const { return eta_prime_over_shift_; }
  /// Diagonal limits (1/π)Im[...] and (1/π)Re[...] of η''/(2η') − η'/(η − α).
  const Vector& diag_N() const { return diag_N_; }
  const Vector& diag_M_regular() const { return diag_M_; }

  // Fine-grid data for one graded component.
  struct FineGrid {
    Index component;
    Index size;
    int factor;
    CVector anchor, offset, eta_prime, A;
    Circulant cot_correction;  // (−1)^d (1/n_f) cot(π d/n_f)
    std::vector<Index> near_targets;  // nodes of other components close to this one
  };
  const std::vector<FineGrid>& fine_grids() const { return fine_; }
  /// Turns the trapezoidal sum of the cotangent part into the alternate-point
  /// rule: C(i, j) = (−1)^{i−j} (1/n) cot(π(i − j)/n), zero diagonal.
  const Circulant& cot_correction() const { return cot_correction_; }

 private:
  DiscretizedBoundary boundary_;
  Complex alpha_;
  KernelOptions options_;
  CVector A_, eta_prime_over_shift_;
  Vector diag_N_, diag_M_;
  Circulant cot_correction_;
  std::vector<FineGrid> fine_;
};

/// Entry of N at nodes (s, t), diagonal limit when s = t.
double kernel_N(const KernelContext& ctx, Index s, Index t);
/// Entry of M at s ≠ t.
double kernel_M(const KernelContext& ctx, Index s, Index t);
/// M(s,t) + (1/2π) cot((s − t)/2) for s, t on one component; diagonal limit at s = t.
double kernel_M_regular(const KernelContext& ctx, Index s, Index t);

/// Nyström approximations of ∫ N(s,t) μ(t) dt and ∫ M(s,t) μ(t) dt.
Vector apply_N(const KernelContext& ctx, const Vector& mu);
Vector apply_M(const KernelContext& ctx, const Vector& mu);
std::pair<Vector, Vector> apply_NM(const KernelContext& ctx, const Vector& mu);

}  // namespace cntfield
