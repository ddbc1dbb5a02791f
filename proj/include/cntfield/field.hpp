#pragma once

// Cartesian sampling of U and q plus the scalar diagnostics reported after
// a solve.

#include <cstdint>
#include <vector>

#include "cntfield/cauchy.hpp"

namespace cntfield {

enum class CellMask : std::uint8_t { Ring = 0, Inclusion = 1, Hole = 2, Outside = 3, NearBoundary = 4 };

struct BBox {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

/// Cell-centered grid, row-major with x fastest: index = iy·nx + ix.
/// U and q are NaN on masked cells.
struct FieldGrid {
  BBox bbox;
  Index nx = 0, ny = 0;
  std::vector<double> U;
  std::vector<Complex> q;
  std::vector<CellMask> mask;
  std::vector<double> distance;  // exact distance to the nearest boundary curve

  Index index(Index ix, Index iy) const { return iy * nx + ix; }
  Complex point(Index ix, Index iy) const;
  Index size() const { return nx * ny; }
};

FieldGrid sample_grid(const FieldEvaluator& evaluator, const BBox& bbox, Index nx, Index ny,
                      const ClassifyOptions& options = {});

/// Σ w Im(df/dt) over component k, corner windows left out: the increment of
/// the harmonic conjugate, i.e. the heat flux leaving the ring through L_k.
double net_flux(const BoundarySolution& sol, const DiscretizedBoundary& boundary, Index k);

/// max |q| over ring cells at least `standoff` away from every boundary,
/// relative to the unit background flux. Throws if no cell qualifies.
double flux_amplification(const FieldGrid& grid, double standoff = 0.02);

struct Extrema {
  double min = 0.0, max = 0.0;
  Index count = 0;
};
Extrema temperature_extrema(const FieldGrid& grid);

struct DeltaStatistics {
  Vector sorted;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  /// max_residual / (sorted.max − sorted.min); 0 for a constant set.
  double relative_residual = 0.0;
};

/// Least-squares line through the sorted nanotube temperatures against rank.
DeltaStatistics delta_statistics(const BoundarySolution& sol);
DeltaStatistics delta_statistics(const Vector& cnt_delta);

}  // namespace cntfield
