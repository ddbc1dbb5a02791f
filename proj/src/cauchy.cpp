#include "cntfield/cauchy.hpp"

#include <cmath>
#include <limits>

#include "cntfield/errors.hpp"
#include "cntfield/spectral.hpp"

namespace cntfield {

namespace {

void require_off_node(const DiscretizedBoundary& b, Complex z) {
  for (Index j = 0; j < b.size(); ++j)
    if (b.eta()[j] == z) throw InvalidInput("Cauchy evaluation at a boundary node");
}

CVector component_derivative(const DiscretizedBoundary& b, const CVector& values) {
  const Index n = b.nodes_per_component();
  CVector d(values.size());
  for (Index k = 0; k < b.component_count(); ++k)
    d.segment(b.begin(k), n) = spectral_derivative(CVector(values.segment(b.begin(k), n)));
  return d;
}

}  // namespace

Complex cauchy_eval(const DiscretizedBoundary& b, const CVector& values, Complex z) {
  if (values.size() != b.size()) throw InvalidInput("cauchy_eval: values do not match the boundary");
  require_off_node(b, z);
  Complex num = 0.0, den = 0.0;
  for (Index j = 0; j < b.size(); ++j) {
    const Complex k = b.eta_prime()[j] / (b.eta()[j] - z);
    num += values[j] * k;
    den += k;
  }
  return num / den;
}

PointClass classify_point(const DiscretizedBoundary& b, Complex z, const ClassifyOptions& options) {
  const Index n = b.nodes_per_component();
  const double w = b.weight();
  bool near = false;
  std::vector<double> winding(static_cast<std::size_t>(b.component_count()));
  for (Index k = 0; k < b.component_count(); ++k) {
    Complex sum = 0.0;
    for (Index j = b.begin(k); j < b.begin(k) + n; ++j) {
      const Complex d = b.eta()[j] - z;
      if (std::abs(d) < options.guard * w * std::abs(b.eta_prime()[j])) near = true;
      sum += b.eta_prime()[j] / d;
    }
    winding[static_cast<std::size_t>(k)] = (sum * w).imag() / kTwoPi;
  }
  if (near) return {PointKind::NearBoundary, -1};
  int total = 0;
  PointClass out;
  for (Index k = 0; k < b.component_count(); ++k) {
    const double wk = winding[static_cast<std::size_t>(k)];
    const double r = std::round(wk);
    if (std::abs(wk - r) > options.winding_tolerance) return {PointKind::NearBoundary, -1};
    const int ik = static_cast<int>(r);
    total += ik;
    if (ik != 0 && b.component(k).role != BoundaryRole::Dirichlet) {
      out.component = k;
      out.kind = b.component(k).role == BoundaryRole::InsulatedHole ? PointKind::InsideHole
                                                                     : PointKind::InsideInclusion;
    }
  }
  if (total == 1 && out.component < 0) return {PointKind::RingInterior, -1};
  if (out.component >= 0) return out;
  return {PointKind::Outside, -1};
}

FieldEvaluator::FieldEvaluator(const DiscretizedBoundary& boundary, const CVector& f_boundary,
                               std::shared_ptr<const SummationBackend> backend)
    : boundary_(boundary), backend_(backend ? std::move(backend) : default_backend()) {
  if (f_boundary.size() != boundary.size()) throw InvalidInput("FieldEvaluator: values do not match the boundary");
  const double w = boundary.weight();
  charges_.resize(boundary.size(), 3);
  charges_.col(0) = w * f_boundary.cwiseProduct(boundary.eta_prime());
  charges_.col(1) = w * component_derivative(boundary, f_boundary);
  charges_.col(2) = w * boundary.eta_prime();
}

FieldValue FieldEvaluator::evaluate(Complex z) const {
  CVector pts(1);
  pts[0] = z;
  return evaluate(pts).front();
}

std::vector<FieldValue> FieldEvaluator::evaluate(const CVector& points) const {
  CMatrix sums;
  backend_->target_sum(boundary_.eta(), charges_, points, sums);
  std::vector<FieldValue> out(static_cast<std::size_t>(points.size()));
  for (Index i = 0; i < points.size(); ++i) {
    auto& v = out[static_cast<std::size_t>(i)];
    v.F = sums(i, 0) / sums(i, 2);
    v.dF = sums(i, 1) / sums(i, 2);
    v.U = v.F.real();
    v.q = -std::conj(v.dF);
    if (!std::isfinite(v.U)) throw InvalidInput("Cauchy evaluation at a boundary node");
  }
  return out;
}

FieldValue eval_temperature_and_flux(const FieldEvaluator& evaluator, Complex z) { return evaluator.evaluate(z); }

Complex map_forward(const BoundaryCorrespondence& map, Complex w) {
  return cauchy_eval(*map.preimage, map.image, w);
}

Complex map_derivative(const BoundaryCorrespondence& map, Complex w) {
  const auto& b = *map.preimage;
  const CVector dphi = component_derivative(b, map.image).cwiseQuotient(b.eta_prime());
  return cauchy_eval(b, dphi, w);
}

Complex mapped_flux_derivative(const BoundaryCorrespondence& map, const CVector& f_preimage, Complex w) {
  const auto& b = *map.preimage;
  const CVector df = component_derivative(b, f_preimage).cwiseQuotient(b.eta_prime());
  return cauchy_eval(b, df, w) / map_derivative(map, w);
}

}  // namespace cntfield
