#include "cntfield/geometry.hpp"

#include <algorithm>
#include <limits>

#include "cntfield/errors.hpp"

namespace cntfield {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool on_segment(Complex p, Complex a, Complex b) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

int sign_of(double v) { return (v > 0) - (v < 0); }

bool segments_intersect(Complex a0, Complex a1, Complex b0, Complex b1) {
  const int d1 = sign_of(cross(a1 - a0, b0 - a0));
  const int d2 = sign_of(cross(a1 - a0, b1 - a0));
  const int d3 = sign_of(cross(b1 - b0, a0 - b0));
  const int d4 = sign_of(cross(b1 - b0, a1 - b0));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(b0, a0, a1)) return true;
  if (d2 == 0 && on_segment(b1, a0, a1)) return true;
  if (d3 == 0 && on_segment(a0, b0, b1)) return true;
  if (d4 == 0 && on_segment(a1, b0, b1)) return true;
  return false;
}

// Local coordinates of z in the frame of an ellipse, scaled to the unit disk.
Complex ellipse_local(const ThinEllipse& e, Complex z) {
  const Complex u = (z - e.segment.center) * std::polar(1.0, -e.segment.angle);
  const double a = 0.5 * e.segment.length;
  return {u.real() / a, u.imag() / (e.aspect * a)};
}

}  // namespace

Segment::Segment(Complex c, double len, double ang) : center(c), length(len) {
  if (!(len > 0.0) || !std::isfinite(len)) throw InvalidInput("segment length must be positive and finite");
  if (!std::isfinite(ang) || !std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw InvalidInput("segment center and angle must be finite");
  double a = std::fmod(ang, kPi);
  if (a < 0) a += kPi;
  if (a >= kPi) a = 0.0;
  angle = a;
}

std::pair<Complex, Complex> Segment::endpoints() const {
  const Complex half = 0.5 * length * direction();
  return {center - half, center + half};
}

double point_segment_distance(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const double s = std::clamp((std::conj(d) * (z - a)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + s * d));
}

double segment_min_distance(Complex a0, Complex a1, Complex b0, Complex b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

double segment_min_distance(const Segment& a, const Segment& b) {
  const auto [a0, a1] = a.endpoints();
  const auto [b0, b1] = b.endpoints();
  return segment_min_distance(a0, a1, b0, b1);
}

double square_corner_parameter(int k, double corner_phase) { return corner_phase + 0.5 * kPi * (k & 3); }

CurvePoint<double> sample_curve(const CurveShape& shape, double t, double corner_phase) {
  return std::visit(
      [&](const auto& s) -> CurvePoint<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ThinEllipse>) {
          return ellipse_param(s.segment, s.aspect, t);
        } else if constexpr (std::is_same_v<T, CircleCurve>) {
          return circle_param<double>(s.center, s.radius, s.orientation, t);
        } else {
          return square_param<double>(s.half_side, t, s.orientation, corner_phase);
        }
      },
      shape);
}

Orientation orientation_of(const CurveShape& shape) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ThinEllipse>)
          return Orientation::Clockwise;
        else
          return s.orientation;
      },
      shape);
}

bool is_graded(const CurveShape& shape) { return std::holds_alternative<SquareCurve>(shape); }

double distance_to_curve(const CurveShape& shape, Complex z) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ThinEllipse>) {
          const auto [a, b] = s.segment.endpoints();
          const double d = point_segment_distance(z, a, b) - 0.5 * s.aspect * s.segment.length;
          return std::max(d, 0.0);
        } else if constexpr (std::is_same_v<T, CircleCurve>) {
          return std::abs(std::abs(z - s.center) - s.radius);
        } else {
          const double dx = std::abs(z.real()) - s.half_side;
          const double dy = std::abs(z.imag()) - s.half_side;
          if (dx <= 0 && dy <= 0) return -std::max(dx, dy);
          return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
        }
      },
      shape);
}

bool inside_curve(const CurveShape& shape, Complex z) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ThinEllipse>) {
          return std::norm(ellipse_local(s, z)) < 1.0;
        } else if constexpr (std::is_same_v<T, CircleCurve>) {
          return std::abs(z - s.center) < s.radius;
        } else {
          return std::max(std::abs(z.real()), std::abs(z.imag())) < s.half_side;
        }
      },
      shape);
}

DiscretizedBoundary::DiscretizedBoundary(std::vector<ComponentSpec> components, Index nodes_per_component)
    : components_(std::move(components)), n_(nodes_per_component) {
  if (n_ < 8 || n_ % 2 != 0) throw InvalidInput("nodes per component must be even and at least 8");
  if (components_.empty()) throw InvalidInput("boundary needs at least one component");
  const Index total = size();
  eta_.resize(total);
  eta_prime_.resize(total);
  eta_second_.resize(total);
  anchor_.resize(total);
  offset_.resize(total);
  const double phase = corner_phase();
  for (Index k = 0; k < component_count(); ++k) {
    const auto& spec = components_[static_cast<std::size_t>(k)];
    switch (spec.role) {
      case BoundaryRole::Dirichlet:
        if (dirichlet_ >= 0) throw InvalidInput("boundary has more than one Dirichlet component");
        dirichlet_ = k;
        break;
      case BoundaryRole::InsulatedHole:
        if (hole_) throw InvalidInput("boundary has more than one insulated hole");
        hole_ = k;
        break;
      case BoundaryRole::Inclusion:
        inclusions_.push_back(k);
        break;
    }
    for (Index i = 0; i < n_; ++i) {
      const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n_);
      const auto p = sample_curve(spec.shape, t, phase);
      const Index j = k * n_ + i;
      anchor_[j] = p.anchor;
      offset_[j] = p.offset;
      eta_[j] = p.position();
      eta_prime_[j] = p.derivative;
      eta_second_[j] = p.second;
    }
  }
  if (dirichlet_ < 0) throw InvalidInput("boundary needs exactly one Dirichlet component");
}

bool DiscretizedBoundary::in_corner_window(Index node, Index window) const {
  const auto& shape = component(component_of(node)).shape;
  if (!is_graded(shape)) return false;
  const double i = static_cast<double>(node % n_);
  const double n = static_cast<double>(n_);
  for (int k = 0; k < 4; ++k) {
    const double corner = 0.5 + 0.25 * n * k;
    double d = std::abs(i - corner);
    d = std::min(d, n - d);
    if (d < static_cast<double>(window)) return true;
  }
  return false;
}

double DiscretizedBoundary::winding_number(Index k, Complex z) const {
  Complex sum = 0.0;
  const Index b = begin(k);
  for (Index j = b; j < b + n_; ++j) sum += eta_prime_[j] / (eta_[j] - z);
  return (sum * weight() / Complex(0.0, kTwoPi)).real();
}

std::vector<ComponentSpec> Domain::layout() const {
  std::vector<ComponentSpec> out;
  out.reserve(cnts.size() + 2);
  for (const auto& s : cnts) out.push_back({ThinEllipse{s, aspect}, BoundaryRole::Inclusion});
  if (shape == DomainShape::Annulus) {
    if (inner_half_side > 0)
      out.push_back({CircleCurve{0.0, inner_half_side, Orientation::Clockwise}, BoundaryRole::InsulatedHole});
    out.push_back({CircleCurve{0.0, 1.0, Orientation::CounterClockwise}, BoundaryRole::Dirichlet});
    return out;
  }
  if (inner_half_side > 0)
    out.push_back({SquareCurve{inner_half_side, Orientation::Clockwise}, BoundaryRole::InsulatedHole});
  out.push_back({SquareCurve{1.0, Orientation::CounterClockwise}, BoundaryRole::Dirichlet});
  return out;
}

double Domain::distance_to_boundary(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : layout()) d = std::min(d, distance_to_curve(c.shape, z));
  return d;
}

bool Domain::contains(Complex z) const {
  for (const auto& c : layout()) {
    const bool inside = inside_curve(c.shape, z);
    if (c.role == BoundaryRole::Dirichlet ? !inside : inside) return false;
    if (distance_to_curve(c.shape, z) == 0.0) return false;
  }
  return true;
}

Complex default_alpha(const Domain& domain, double clearance) {
  const Complex preferred(0.5 * (1.0 + domain.inner_half_side), 0.0);
  if (domain.contains(preferred) && domain.distance_to_boundary(preferred) >= clearance) return preferred;
  constexpr int kGrid = 101;
  Complex best = preferred;
  double best_distance = -1.0;
  for (int iy = 0; iy < kGrid; ++iy) {
    for (int ix = 0; ix < kGrid; ++ix) {
      const Complex z(-1.0 + 2.0 * (ix + 0.5) / kGrid, -1.0 + 2.0 * (iy + 0.5) / kGrid);
      if (!domain.contains(z)) continue;
      const double dist = domain.distance_to_boundary(z);
      if (dist > best_distance) {
        best_distance = dist;
        best = z;
      }
    }
  }
  if (best_distance <= 0) throw GeometryError("no admissible auxiliary point found in the domain");
  return best;
}

double segment_box_distance(const Segment& seg, double half_side) {
  const auto [a, b] = seg.endpoints();
  auto inside = [&](Complex z) { return std::max(std::abs(z.real()), std::abs(z.imag())) <= half_side; };
  if (inside(a) || inside(b)) return 0.0;
  const Complex c[4] = {{half_side, -half_side}, {half_side, half_side}, {-half_side, half_side}, {-half_side, -half_side}};
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) d = std::min(d, segment_min_distance(a, b, c[k], c[(k + 1) % 4]));
  return d;
}

}  // namespace cntfield
