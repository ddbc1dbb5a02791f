#pragma once

// Off-boundary evaluation of analytic functions from boundary samples by
// the normalized (barycentric) trapezoidal Cauchy formula
//   F(z) ≈ Σ_j f_j η'_j/(η_j − z) / Σ_j η'_j/(η_j − z),
// and classification of points by discrete winding numbers.

#include <memory>
#include <optional>
#include <vector>

#include "cntfield/geometry.hpp"
#include "cntfield/solver.hpp"
#include "cntfield/summation.hpp"

namespace cntfield {

/// Barycentric Cauchy formula. Throws InvalidInput if z is a boundary node.
Complex cauchy_eval(const DiscretizedBoundary& boundary, const CVector& values, Complex z);

enum class PointKind { RingInterior, InsideInclusion, InsideHole, Outside, NearBoundary };

struct PointClass {
  PointKind kind = PointKind::Outside;
  Index component = -1;  // the inclusion containing the point, if any
};

struct ClassifyOptions {
  /// Non-integrality of a winding sum above this flags the point.
  double winding_tolerance = 0.25;
  /// Points closer than guard·(local node spacing) to a node are flagged.
  double guard = 1.0;
};

PointClass classify_point(const DiscretizedBoundary& boundary, Complex z, const ClassifyOptions& options = {});

struct FieldValue {
  double U = 0.0;  // temperature Re F
  Complex q;       // heat flux −conj(F')
  Complex F;
  Complex dF;
};

/// Evaluates F = Cauchy(f) and F' = Cauchy(f') from one solved boundary.
/// The derivative enters only through df/dt = f'·η', never divided by η'.
class FieldEvaluator {
 public:
  FieldEvaluator(const DiscretizedBoundary& boundary, const CVector& f_boundary,
                 std::shared_ptr<const SummationBackend> backend = nullptr);

  const DiscretizedBoundary& boundary() const { return boundary_; }

  /// Caller guarantees z lies in the ring interior.
  FieldValue evaluate(Complex z) const;
  std::vector<FieldValue> evaluate(const CVector& points) const;

 private:
  DiscretizedBoundary boundary_;
  std::shared_ptr<const SummationBackend> backend_;
  CMatrix charges_;  // columns: w f η', w df/dt, w η'
};

/// U and q at z (z must be classified RingInterior).
FieldValue eval_temperature_and_flux(const FieldEvaluator& evaluator, Complex z);

/// Boundary correspondence w_j ↦ z_j = Φ(w_j) sampled on the nodes of a
/// preimage boundary, for use with externally computed conformal maps.
/// Φ, Φ' and the pulled-back flux F'(z) = f'(w)/Φ'(w) are evaluated with the
/// same Cauchy primitive.
struct BoundaryCorrespondence {
  std::shared_ptr<const DiscretizedBoundary> preimage;
  CVector image;
};

Complex map_forward(const BoundaryCorrespondence& map, Complex w);
Complex map_derivative(const BoundaryCorrespondence& map, Complex w);
/// F'(Φ(w)) from the samples of f on the preimage boundary.
Complex mapped_flux_derivative(const BoundaryCorrespondence& map, const CVector& f_preimage, Complex w);

}  // namespace cntfield
