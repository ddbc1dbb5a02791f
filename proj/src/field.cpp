#include "cntfield/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cntfield/errors.hpp"

namespace cntfield {

Complex FieldGrid::point(Index ix, Index iy) const {
  const double hx = (bbox.xmax - bbox.xmin) / static_cast<double>(nx);
  const double hy = (bbox.ymax - bbox.ymin) / static_cast<double>(ny);
  return {bbox.xmin + (static_cast<double>(ix) + 0.5) * hx, bbox.ymin + (static_cast<double>(iy) + 0.5) * hy};
}

FieldGrid sample_grid(const FieldEvaluator& evaluator, const BBox& bbox, Index nx, Index ny,
                      const ClassifyOptions& options) {
  if (nx < 1 || ny < 1) throw InvalidInput("grid resolution must be positive");
  if (!(bbox.xmax > bbox.xmin) || !(bbox.ymax > bbox.ymin)) throw InvalidInput("empty bounding box");
  const auto& b = evaluator.boundary();
  FieldGrid g;
  g.bbox = bbox;
  g.nx = nx;
  g.ny = ny;
  const auto cells = static_cast<std::size_t>(nx * ny);
  g.U.assign(cells, std::numeric_limits<double>::quiet_NaN());
  g.q.assign(cells, Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()));
  g.mask.assign(cells, CellMask::Outside);
  g.distance.assign(cells, 0.0);

#pragma omp parallel for schedule(dynamic, 16)
  for (Index c = 0; c < nx * ny; ++c) {
    const Complex z = g.point(c % nx, c / nx);
    double d = std::numeric_limits<double>::infinity();
    for (const auto& spec : b.components()) d = std::min(d, distance_to_curve(spec.shape, z));
    g.distance[static_cast<std::size_t>(c)] = d;
    const auto cls = classify_point(b, z, options);
    CellMask m = CellMask::Outside;
    switch (cls.kind) {
      case PointKind::RingInterior: m = CellMask::Ring; break;
      case PointKind::InsideInclusion: m = CellMask::Inclusion; break;
      case PointKind::InsideHole: m = CellMask::Hole; break;
      case PointKind::Outside: m = CellMask::Outside; break;
      case PointKind::NearBoundary: m = CellMask::NearBoundary; break;
    }
    g.mask[static_cast<std::size_t>(c)] = m;
  }

  std::vector<Index> ring;
  for (Index c = 0; c < nx * ny; ++c)
    if (g.mask[static_cast<std::size_t>(c)] == CellMask::Ring) ring.push_back(c);
  CVector pts(static_cast<Index>(ring.size()));
  for (std::size_t i = 0; i < ring.size(); ++i) pts[static_cast<Index>(i)] = g.point(ring[i] % nx, ring[i] / nx);
  const auto values = evaluator.evaluate(pts);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    g.U[static_cast<std::size_t>(ring[i])] = values[i].U;
    g.q[static_cast<std::size_t>(ring[i])] = values[i].q;
  }
  return g;
}

double net_flux(const BoundarySolution& sol, const DiscretizedBoundary& boundary, Index k) {
  if (k < 0 || k >= boundary.component_count()) throw InvalidInput("net_flux: component index out of range");
  const auto d = boundary_f_prime(sol, boundary);
  double sum = 0.0;
  for (Index j = boundary.begin(k); j < boundary.begin(k) + boundary.nodes_per_component(); ++j)
    if (d.valid[static_cast<std::size_t>(j)]) sum += d.df_dt[j].imag();
  return sum * boundary.weight();
}

double flux_amplification(const FieldGrid& grid, double standoff) {
  double best = -1.0;
  for (Index c = 0; c < grid.size(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    if (grid.mask[i] != CellMask::Ring || grid.distance[i] < standoff) continue;
    best = std::max(best, std::abs(grid.q[i]));
  }
  if (best < 0) throw InvalidInput("flux_amplification: no ring cell beyond the standoff distance");
  return best;
}

Extrema temperature_extrema(const FieldGrid& grid) {
  Extrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
  for (Index c = 0; c < grid.size(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    if (grid.mask[i] != CellMask::Ring) continue;
    e.min = std::min(e.min, grid.U[i]);
    e.max = std::max(e.max, grid.U[i]);
    ++e.count;
  }
  return e;
}

DeltaStatistics delta_statistics(const Vector& cnt_delta) {
  const Index m = cnt_delta.size();
  if (m < 2) throw InvalidInput("delta_statistics needs at least two nanotubes");
  DeltaStatistics s;
  s.sorted = cnt_delta;
  std::sort(s.sorted.data(), s.sorted.data() + m);
  const Vector rank = Vector::LinSpaced(m, 0.0, static_cast<double>(m - 1));
  const double rm = rank.mean(), dm = s.sorted.mean();
  const Vector rc = rank.array() - rm;
  s.slope = rc.dot(s.sorted.array().matrix() - Vector::Constant(m, dm)) / rc.squaredNorm();
  s.intercept = dm - s.slope * rm;
  const Vector fit = (s.intercept + s.slope * rank.array()).matrix();
  s.max_residual = (s.sorted - fit).cwiseAbs().maxCoeff();
  const double range = s.sorted[m - 1] - s.sorted[0];
  s.relative_residual = range > 0 ? s.max_residual / range : 0.0;
  return s;
}

DeltaStatistics delta_statistics(const BoundarySolution& sol) { return delta_statistics(sol.cnt_delta()); }

}  // namespace cntfield
