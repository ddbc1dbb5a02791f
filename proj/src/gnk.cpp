#include "cntfield/gnk.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cntfield/errors.hpp"

namespace cntfield {

namespace {

Vector cot_correction_column(Index n) {
  Vector c = Vector::Zero(n);
  for (Index d = 1; d < n; ++d) {
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    c[d] = sign / (static_cast<double>(n) * std::tan(kPi * static_cast<double>(d) / static_cast<double>(n)));
  }
  return c;
}

// e^{−iθ} with θ ∈ {0, π/2}, kept exact.
Complex rotation(bool hole) { return hole ? Complex(0.0, -1.0) : Complex(1.0, 0.0); }

// η(t) − η(s) on the same component, through the anchored representation.
Complex same_component_difference(const DiscretizedBoundary& b, Index s, Index t) {
  return (b.anchor()[t] - b.anchor()[s]) + (b.offset()[t] - b.offset()[s]);
}

Complex raw_kernel(const KernelContext& ctx, Index s, Index t) {
  const auto& b = ctx.boundary();
  const Complex diff = b.component_of(s) == b.component_of(t) ? same_component_difference(b, s, t)
                                                               : b.eta()[t] - b.eta()[s];
  if (diff == Complex(0.0))
    throw GeometryError("boundary nodes " + std::to_string(s) + " and " + std::to_string(t) + " coincide");
  return ctx.A()[s] / ctx.A()[t] * b.eta_prime()[t] / diff / kPi;
}

void check_index(const KernelContext& ctx, Index s, Index t) {
  if (s < 0 || t < 0 || s >= ctx.size() || t >= ctx.size()) throw InvalidInput("kernel node index out of range");
}

}  // namespace

KernelContext::KernelContext(DiscretizedBoundary boundary, Complex alpha, KernelOptions options)
    : boundary_(std::move(boundary)),
      alpha_(alpha),
      options_(std::move(options)),
      cot_correction_(cot_correction_column(boundary_.nodes_per_component())) {
  if (!options_.backend) options_.backend = default_backend();
  if (options_.upsample < 1) throw InvalidInput("upsample factor must be >= 1");
  const Index total = boundary_.size();
  const Index n = boundary_.nodes_per_component();
  A_.resize(total);
  eta_prime_over_shift_.resize(total);
  diag_N_.resize(total);
  diag_M_.resize(total);
  double nearest = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < total; ++j) {
    const Complex shift = boundary_.eta()[j] - alpha_;
    nearest = std::min(nearest, std::abs(shift));
    A_[j] = rotation(theta(boundary_.component_of(j)) != 0.0) * shift;
    eta_prime_over_shift_[j] = boundary_.eta_prime()[j] / shift;
    const Complex d = boundary_.eta_second()[j] / (2.0 * boundary_.eta_prime()[j]) - eta_prime_over_shift_[j];
    diag_N_[j] = d.imag() / kPi;
    diag_M_[j] = d.real() / kPi;
  }
  if (!(nearest > 1e-8)) throw GeometryError("auxiliary point alpha lies on (or too close to) the boundary");
  if (!diag_N_.allFinite()) throw GeometryError("degenerate boundary: vanishing derivative at a node");

  if (!options_.refine_graded || options_.upsample == 1) return;
  const int factor = options_.upsample;
  const Index nf = n * factor;
  for (Index k = 0; k < boundary_.component_count(); ++k) {
    const auto& spec = boundary_.component(k);
    if (!is_graded(spec.shape)) continue;
    FineGrid g{k, nf, factor, CVector(nf), CVector(nf), CVector(nf), CVector(nf),
               Circulant(cot_correction_column(nf)), {}};
    const Complex rot = rotation(theta(k) != 0.0);
    double spacing = 0.0;
    for (Index j = boundary_.begin(k); j < boundary_.begin(k) + n; ++j)
      spacing = std::max(spacing, boundary_.weight() * std::abs(boundary_.eta_prime()[j]));
    for (Index s = 0; s < total; ++s)
      if (boundary_.component_of(s) != k &&
          distance_to_curve(spec.shape, boundary_.eta()[s]) < options_.near_field * spacing)
        g.near_targets.push_back(s);
    for (Index f = 0; f < nf; ++f) {
      const double t = kTwoPi * static_cast<double>(f) / static_cast<double>(nf);
      const auto p = sample_curve(spec.shape, t, boundary_.corner_phase());
      g.anchor[f] = p.anchor;
      g.offset[f] = p.offset;
      g.eta_prime[f] = p.derivative;
      g.A[f] = rot * (p.position() - alpha_);
    }
    fine_.push_back(std::move(g));
  }
}

double KernelContext::theta(Index k) const {
  return boundary_.component(k).role == BoundaryRole::InsulatedHole ? 0.5 * kPi : 0.0;
}

double kernel_N(const KernelContext& ctx, Index s, Index t) {
  check_index(ctx, s, t);
  if (s == t) return ctx.diag_N()[s];
  return raw_kernel(ctx, s, t).imag();
}

double kernel_M(const KernelContext& ctx, Index s, Index t) {
  check_index(ctx, s, t);
  if (s == t) throw InvalidInput("kernel_M is singular on the diagonal; use kernel_M_regular");
  return raw_kernel(ctx, s, t).real();
}

double kernel_M_regular(const KernelContext& ctx, Index s, Index t) {
  check_index(ctx, s, t);
  const auto& b = ctx.boundary();
  if (b.component_of(s) != b.component_of(t))
    throw InvalidInput("kernel_M_regular needs both nodes on one component");
  if (s == t) return ctx.diag_M_regular()[s];
  const double ds = kTwoPi * static_cast<double>(s - t) / static_cast<double>(b.nodes_per_component());
  return raw_kernel(ctx, s, t).real() + 1.0 / (kTwoPi * std::tan(0.5 * ds));
}

namespace {

struct Split {
  std::vector<double> re, im;
  explicit Split(const CVector& v) : re(static_cast<std::size_t>(v.size())), im(re.size()) {
    for (Index j = 0; j < v.size(); ++j) {
      re[static_cast<std::size_t>(j)] = v[j].real();
      im[static_cast<std::size_t>(j)] = v[j].imag();
    }
  }
};

// Σ_{j ∈ [lo, hi), j ≠ skip} q_j / (x_j − z) where x = anchor + offset is
// differenced term by term: (xa_j − za) + (xo_j − zo). Null offsets mean 0.
Complex pair_sum(const double* ar, const double* ai, const double* orr, const double* oi, const double* qr,
                 const double* qi, Index lo, Index skip, Index hi, double zar, double zai, double zor,
                 double zoi) {
  double sr = 0.0, si = 0.0;
  for (const auto& [from, to] : {std::pair{lo, skip}, std::pair{skip + 1, hi}}) {
    double tr = 0.0, ti = 0.0;
    if (orr) {
#pragma omp simd reduction(+ : tr, ti)
      for (Index j = from; j < to; ++j) {
        const double dx = (ar[j] - zar) + (orr[j] - zor);
        const double dy = (ai[j] - zai) + (oi[j] - zoi);
        const double inv = 1.0 / (dx * dx + dy * dy);
        tr += (qr[j] * dx + qi[j] * dy) * inv;
        ti += (qi[j] * dx - qr[j] * dy) * inv;
      }
    } else {
#pragma omp simd reduction(+ : tr, ti)
      for (Index j = from; j < to; ++j) {
        const double dx = ar[j] - zar;
        const double dy = ai[j] - zai;
        const double inv = 1.0 / (dx * dx + dy * dy);
        tr += (qr[j] * dx + qi[j] * dy) * inv;
        ti += (qi[j] * dx - qr[j] * dy) * inv;
      }
    }
    sr += tr;
    si += ti;
  }
  return {sr, si};
}

struct Outputs {
  bool n, m;
};

std::pair<Vector, Vector> apply_impl(const KernelContext& ctx, const Vector& mu, Outputs want) {
  const auto& b = ctx.boundary();
  if (mu.size() != ctx.size())
    throw InvalidInput("density has " + std::to_string(mu.size()) + " entries, boundary has " +
                       std::to_string(ctx.size()));
  const Index n = b.nodes_per_component();
  const double w = b.weight();
  const CVector charges = (w * mu.cast<Complex>().array() * b.eta_prime().array() / ctx.A().array()).matrix();
  CVector sum;
  ctx.backend().self_sum(b.eta(), charges, sum);
  const CVector rotated = (ctx.A().array() * sum.array()).matrix();

  Vector out_n, out_m;
  if (want.n) out_n = rotated.imag() / kPi;
  if (want.m) out_m = rotated.real() / kPi;

  std::vector<const KernelContext::FineGrid*> fine_of(static_cast<std::size_t>(b.component_count()), nullptr);
  for (const auto& g : ctx.fine_grids()) fine_of[static_cast<std::size_t>(g.component)] = &g;

  for (Index k = 0; k < b.component_count(); ++k) {
    const Index base = b.begin(k);
    const Vector mu_k = mu.segment(base, n);
    const auto* fine = fine_of[static_cast<std::size_t>(k)];
    if (!fine) {
      if (want.n) out_n.segment(base, n) += w * ctx.diag_N().segment(base, n).cwiseProduct(mu_k);
      if (want.m)
        out_m.segment(base, n) += w * ctx.diag_M_regular().segment(base, n).cwiseProduct(mu_k) +
                                  ctx.cot_correction().apply(mu_k);
      continue;
    }
    // Replace the coarse same-component quadrature by the fine one.
    const int factor = fine->factor;
    const Index nf = fine->size;
    const double wf = kTwoPi / static_cast<double>(nf);
    const Vector mu_f = trig_upsample(mu_k, factor);
    const CVector q_f = (wf * mu_f.cast<Complex>().array() * fine->eta_prime.array() / fine->A.array()).matrix();
    Vector circ_f;
    if (want.m) circ_f = fine->cot_correction.apply(mu_f);
    const Split eta(b.eta().segment(base, n)), q(charges.segment(base, n));
    const Split fa(fine->anchor), fo(fine->offset), fq(q_f);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
      const Index s = base + i;
      const Complex coarse = pair_sum(eta.re.data(), eta.im.data(), nullptr, nullptr, q.re.data(),
                                      q.im.data(), 0, i, n, eta.re[i], eta.im[i], 0.0, 0.0);
      const Index fi = i * factor;
      const Complex fine_sum =
          pair_sum(fa.re.data(), fa.im.data(), fo.re.data(), fo.im.data(), fq.re.data(), fq.im.data(), 0, fi,
                   nf, b.anchor()[s].real(), b.anchor()[s].imag(), b.offset()[s].real(), b.offset()[s].imag());
      const Complex delta = ctx.A()[s] * (fine_sum - coarse) / kPi;
      if (want.n) out_n[s] += delta.imag() + wf * ctx.diag_N()[s] * mu[s];
      if (want.m) out_m[s] += delta.real() + wf * ctx.diag_M_regular()[s] * mu[s] + circ_f[fi];
    }
    const auto& near = fine->near_targets;
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < near.size(); ++t) {
      const Index s = near[t];
      const Complex z = b.eta()[s];
      const Complex coarse = pair_sum(eta.re.data(), eta.im.data(), nullptr, nullptr, q.re.data(), q.im.data(), 0,
                                      n, n, z.real(), z.imag(), 0.0, 0.0);
      const Complex fine_sum = pair_sum(fa.re.data(), fa.im.data(), fo.re.data(), fo.im.data(), fq.re.data(),
                                        fq.im.data(), 0, nf, nf, z.real(), z.imag(), 0.0, 0.0);
      const Complex delta = ctx.A()[s] * (fine_sum - coarse) / kPi;
      if (want.n) out_n[s] += delta.imag();
      if (want.m) out_m[s] += delta.real();
    }
  }
  if ((want.n && !out_n.allFinite()) || (want.m && !out_m.allFinite()))
    throw GeometryError("non-finite kernel sum: coincident boundary nodes");
  return {std::move(out_n), std::move(out_m)};
}

}  // namespace

Vector apply_N(const KernelContext& ctx, const Vector& mu) { return apply_impl(ctx, mu, {true, false}).first; }

Vector apply_M(const KernelContext& ctx, const Vector& mu) { return apply_impl(ctx, mu, {false, true}).second; }

std::pair<Vector, Vector> apply_NM(const KernelContext& ctx, const Vector& mu) {
  return apply_impl(ctx, mu, {true, true});
}

}  // namespace cntfield
