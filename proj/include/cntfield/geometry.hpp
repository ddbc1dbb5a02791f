#pragma once

// Boundary curves of the composite: thin ellipses standing in for the
// nanotubes, the insulated inner square and the outer square carrying the
// Dirichlet datum. Every curve is parameterized over [0, 2π] and oriented
// so that the conduction domain lies on its left.

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "cntfield/types.hpp"

namespace cntfield {

enum class Orientation { Clockwise, CounterClockwise };

/// A straight line inclusion. The angle is folded into [0, π).
struct Segment {
  Complex center;
  double length = 0.0;
  double angle = 0.0;

  Segment() = default;
  Segment(Complex center, double length, double angle);

  Complex direction() const { return std::polar(1.0, angle); }
  std::pair<Complex, Complex> endpoints() const;
};

/// Euclidean distance between two closed segments.
double segment_min_distance(const Segment& a, const Segment& b);
double segment_min_distance(Complex a0, Complex a1, Complex b0, Complex b1);
double point_segment_distance(Complex z, Complex a, Complex b);

/// A sample of a parameterized curve. The position is split into an anchor
/// (ellipse center, nearest square corner) and an offset so that differences
/// between nearby points on the same curve keep full relative precision.
template <typename Scalar>
struct CurvePoint {
  std::complex<Scalar> anchor;
  std::complex<Scalar> offset;
  std::complex<Scalar> derivative;
  std::complex<Scalar> second;

  std::complex<Scalar> position() const { return anchor + offset; }
};

/// η(t) = center + ½·length·e^{i·angle}·(cos t − i·aspect·sin t); clockwise.
template <typename Scalar>
CurvePoint<Scalar> ellipse_param(std::complex<Scalar> center, Scalar length, Scalar angle,
                                 Scalar aspect, Scalar t) {
  using std::cos;
  using std::sin;
  const std::complex<Scalar> half = std::polar(length / Scalar(2), angle);
  const Scalar c = cos(t);
  const Scalar s = sin(t);
  CurvePoint<Scalar> p;
  p.anchor = center;
  p.offset = half * std::complex<Scalar>(c, -aspect * s);
  p.derivative = half * std::complex<Scalar>(-s, -aspect * c);
  p.second = half * std::complex<Scalar>(-c, aspect * s);
  return p;
}

inline CurvePoint<double> ellipse_param(const Segment& seg, double aspect, double t) {
  return ellipse_param<double>(seg.center, seg.length, seg.angle, aspect, t);
}

template <typename Scalar>
CurvePoint<Scalar> circle_param(std::complex<Scalar> center, Scalar radius, Orientation orientation,
                                Scalar t) {
  const Scalar sign = orientation == Orientation::CounterClockwise ? Scalar(1) : Scalar(-1);
  CurvePoint<Scalar> p;
  p.anchor = center;
  p.offset = std::polar(radius, sign * t);
  p.derivative = std::complex<Scalar>(0, sign) * p.offset;
  p.second = -p.offset;
  return p;
}

/// Order of the corner grading used for squares. The grading map and its
/// first order−1 derivatives vanish at both ends of each side.
inline constexpr int kSquareGradingOrder = 4;

template <typename Scalar>
struct GradingValue {
  Scalar value;       // w(σ)
  Scalar complement;  // 1 − w(σ), computed without cancellation
  Scalar d1;          // w'(σ)
  Scalar d2;          // w''(σ)
};

/// Sigmoidal grading of [0, 1] onto itself (Kress substitution)
///   w(σ) = v(σ)^p / (v(σ)^p + v(1−σ)^p),
///   v(σ) = (1/p − 1/2)(1 − 2σ)³ + (1/p)(2σ − 1) + 1/2.
template <typename Scalar>
GradingValue<Scalar> kress_grading(Scalar sigma, int order) {
  const Scalar p = Scalar(order);
  const Scalar c = Scalar(1) / p - Scalar(0.5);
  auto v = [&](Scalar x) {
    const Scalar y = Scalar(1) - Scalar(2) * x;
    return c * y * y * y + (Scalar(2) * x - Scalar(1)) / p + Scalar(0.5);
  };
  auto dv = [&](Scalar x) {
    const Scalar y = Scalar(1) - Scalar(2) * x;
    return Scalar(-6) * c * y * y + Scalar(2) / p;
  };
  auto d2v = [&](Scalar x) { return Scalar(24) * c * (Scalar(1) - Scalar(2) * x); };
  auto ipow = [](Scalar x, int k) {
    Scalar r(1);
    for (int i = 0; i < k; ++i) r *= x;
    return r;
  };
  const Scalar va = v(sigma), vb = v(Scalar(1) - sigma);
  const Scalar a = ipow(va, order), b = ipow(vb, order);
  const Scalar da = p * ipow(va, order - 1) * dv(sigma);
  const Scalar db = -p * ipow(vb, order - 1) * dv(Scalar(1) - sigma);
  const Scalar d2a = p * (p - 1) * ipow(va, order - 2) * dv(sigma) * dv(sigma) +
                     p * ipow(va, order - 1) * d2v(sigma);
  const Scalar d2b = p * (p - 1) * ipow(vb, order - 2) * dv(Scalar(1) - sigma) * dv(Scalar(1) - sigma) +
                     p * ipow(vb, order - 1) * d2v(Scalar(1) - sigma);
  const Scalar sum = a + b, dsum = da + db, d2sum = d2a + d2b;
  GradingValue<Scalar> g;
  g.value = a / sum;
  g.complement = b / sum;
  g.d1 = (da * sum - a * dsum) / (sum * sum);
  g.d2 = (d2a * sum - a * d2sum) / (sum * sum) - Scalar(2) * dsum * (da * sum - a * dsum) / (sum * sum * sum);
  return g;
}

/// Corners of the axis-aligned square in traversal order. Side k runs from
/// corner k to corner k+1 over t ∈ [phase + kπ/2, phase + (k+1)π/2].
template <typename Scalar>
std::complex<Scalar> square_corner(Scalar half_side, Orientation orientation, int k) {
  static constexpr int ccw[4][2] = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  const int idx = orientation == Orientation::CounterClockwise ? (k & 3) : (3 - (k & 3));
  return {half_side * Scalar(ccw[idx][0]), half_side * Scalar(ccw[idx][1])};
}

/// Graded parameterization of the square max(|x|,|y|) = half_side. Traverses
/// the square once; the derivative vanishes to order kSquareGradingOrder−1
/// at the corners t = phase + kπ/2.
template <typename Scalar>
CurvePoint<Scalar> square_param(Scalar half_side, Scalar t, Orientation orientation,
                                Scalar corner_phase = Scalar(0)) {
  using std::floor;
  using std::fmod;
  const Scalar quarter = Scalar(std::numbers::pi) / Scalar(2);
  const Scalar period = Scalar(4) * quarter;
  Scalar u = fmod(t - corner_phase, period);
  if (u < 0) u += period;
  int k = static_cast<int>(floor(u / quarter));
  if (k > 3) k = 3;
  const Scalar sigma = (u - Scalar(k) * quarter) / quarter;
  const auto a = square_corner(half_side, orientation, k);
  const auto b = square_corner(half_side, orientation, k + 1);
  const auto g = kress_grading(sigma, kSquareGradingOrder);
  CurvePoint<Scalar> p;
  if (sigma < Scalar(0.5)) {
    p.anchor = a;
    p.offset = (b - a) * g.value;
  } else {
    p.anchor = b;
    p.offset = (a - b) * g.complement;
  }
  p.derivative = (b - a) * (g.d1 / quarter);
  p.second = (b - a) * (g.d2 / (quarter * quarter));
  return p;
}

/// Parameter value at which square_param passes through corner k.
double square_corner_parameter(int k, double corner_phase = 0.0);

struct ThinEllipse {
  Segment segment;
  double aspect = 0.01;
};

struct CircleCurve {
  Complex center;
  double radius = 1.0;
  Orientation orientation = Orientation::CounterClockwise;
};

struct SquareCurve {
  double half_side = 1.0;
  Orientation orientation = Orientation::CounterClockwise;
};

using CurveShape = std::variant<ThinEllipse, CircleCurve, SquareCurve>;

/// How a component enters the boundary value problem.
///  Inclusion    : U equals an unknown constant, zero net flux (nanotube)
///  InsulatedHole: ∂U/∂n = 0 (inner square)
///  Dirichlet    : U = Re z (outer square)
enum class BoundaryRole { Inclusion, InsulatedHole, Dirichlet };

struct ComponentSpec {
  CurveShape shape;
  BoundaryRole role = BoundaryRole::Inclusion;
};

CurvePoint<double> sample_curve(const CurveShape& shape, double t, double corner_phase = 0.0);
Orientation orientation_of(const CurveShape& shape);
bool is_graded(const CurveShape& shape);
/// Unsigned distance from z to the curve. For thin ellipses this is the
/// distance to the centerline less the half thickness (clamped at zero).
double distance_to_curve(const CurveShape& shape, Complex z);
/// Exact membership in the bounded region enclosed by the curve.
bool inside_curve(const CurveShape& shape, Complex z);

/// All m+2 (or m+1 without inner square) boundary curves sampled on one
/// shared equispaced grid of n nodes each. Component blocks are contiguous.
class DiscretizedBoundary {
 public:
  DiscretizedBoundary(std::vector<ComponentSpec> components, Index nodes_per_component);

  Index nodes_per_component() const { return n_; }
  Index component_count() const { return static_cast<Index>(components_.size()); }
  Index size() const { return n_ * component_count(); }
  /// Trapezoidal weight 2π/n.
  double weight() const { return kTwoPi / static_cast<double>(n_); }
  /// Square corners sit halfway between nodes: t = π/n + kπ/2.
  double corner_phase() const { return kPi / static_cast<double>(n_); }

  const std::vector<ComponentSpec>& components() const { return components_; }
  const ComponentSpec& component(Index k) const { return components_[static_cast<std::size_t>(k)]; }
  Index component_of(Index node) const { return node / n_; }
  Index begin(Index k) const { return k * n_; }

  const CVector& eta() const { return eta_; }
  const CVector& eta_prime() const { return eta_prime_; }
  const CVector& eta_second() const { return eta_second_; }
  const CVector& anchor() const { return anchor_; }
  const CVector& offset() const { return offset_; }

  Index dirichlet_component() const { return dirichlet_; }
  std::optional<Index> hole_component() const { return hole_; }
  const std::vector<Index>& inclusion_components() const { return inclusions_; }

  /// True for nodes within `window` nodes of a square corner.
  bool in_corner_window(Index node, Index window = 3) const;

  /// Discrete winding number (1/2πi) Σ w η'_j/(η_j − z) of component k about z.
  double winding_number(Index k, Complex z) const;

 private:
  std::vector<ComponentSpec> components_;
  Index n_;
  CVector eta_, eta_prime_, eta_second_, anchor_, offset_;
  Index dirichlet_ = -1;
  std::optional<Index> hole_;
  std::vector<Index> inclusions_;
};

/// Outer/inner curve pair of the ring. Annulus: circles of radius 1 and
/// inner_half_side (used for closed-form checks; it carries no nanotubes).
enum class DomainShape { SquareRing, Annulus };

/// The physical configuration: nanotubes inside the square ring
/// (−1,1)² \ [−r,r]². inner_half_side = 0 removes the inner square.
struct Domain {
  std::vector<Segment> cnts;
  double aspect = 0.01;
  double inner_half_side = 0.5;
  Complex alpha{0.75, 0.0};
  DomainShape shape = DomainShape::SquareRing;

  /// CNT ellipses first, then the inner curve (if any), then the outer curve.
  std::vector<ComponentSpec> layout() const;
  /// Minimum distance from z to any boundary curve.
  double distance_to_boundary(Complex z) const;
  /// True if z lies in the conduction domain (exact geometry).
  bool contains(Complex z) const;
};

/// Auxiliary point: ((1 + r)/2, 0) unless that lies within `clearance` of a
/// boundary curve, in which case the point of a 101×101 grid farthest from
/// the boundary is taken instead. domain.alpha is ignored.
Complex default_alpha(const Domain& domain, double clearance = 0.02);

/// Distance between a segment and the filled square max(|x|,|y|) ≤ half_side.
double segment_box_distance(const Segment& seg, double half_side);

}  // namespace cntfield
