#include "cntfield/summation.hpp"

#include <vector>

#include "cntfield/errors.hpp"

namespace cntfield {

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

// Accumulates Σ_{j ∈ [lo, hi)} q_j / (x_j − z) into (sr, si).
inline void accumulate(const double* xr, const double* xi, const double* qr, const double* qi, Index lo,
                       Index hi, double zr, double zi, double& sr, double& si) {
  double ar = 0.0, ai = 0.0;
#pragma omp simd reduction(+ : ar, ai)
  for (Index j = lo; j < hi; ++j) {
    const double dx = xr[j] - zr;
    const double dy = xi[j] - zi;
    const double inv = 1.0 / (dx * dx + dy * dy);
    ar += (qr[j] * dx + qi[j] * dy) * inv;
    ai += (qi[j] * dx - qr[j] * dy) * inv;
  }
  sr += ar;
  si += ai;
}

}  // namespace

void DenseBackend::self_sum(const CVector& sources, const CVector& charges, CVector& out) const {
  if (sources.size() != charges.size()) throw InvalidInput("self_sum: sources and charges differ in size");
  const Index n = sources.size();
  const Split x(sources), q(charges);
  out.resize(n);
  const double *xr = x.re.data(), *xi = x.im.data(), *qr = q.re.data(), *qi = q.im.data();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    double sr = 0.0, si = 0.0;
    accumulate(xr, xi, qr, qi, 0, i, xr[i], xi[i], sr, si);
    accumulate(xr, xi, qr, qi, i + 1, n, xr[i], xi[i], sr, si);
    out[i] = {sr, si};
  }
}

void DenseBackend::target_sum(const CVector& sources, const CMatrix& charges, const CVector& targets,
                              CMatrix& out) const {
  if (sources.size() != charges.rows()) throw InvalidInput("target_sum: sources and charges differ in size");
  const Index n = sources.size();
  const Index cols = charges.cols();
  const Split x(sources);
  std::vector<Split> q;
  q.reserve(static_cast<std::size_t>(cols));
  for (Index c = 0; c < cols; ++c) q.emplace_back(CVector(charges.col(c)));
  out.resize(targets.size(), cols);
  const double *xr = x.re.data(), *xi = x.im.data();
#pragma omp parallel
  {
    std::vector<double> kr(static_cast<std::size_t>(n)), ki(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (Index i = 0; i < targets.size(); ++i) {
      const double zr = targets[i].real(), zi = targets[i].imag();
#pragma omp simd
      for (Index j = 0; j < n; ++j) {
        const double dx = xr[j] - zr;
        const double dy = xi[j] - zi;
        const double inv = 1.0 / (dx * dx + dy * dy);
        kr[static_cast<std::size_t>(j)] = dx * inv;
        ki[static_cast<std::size_t>(j)] = -dy * inv;
      }
      for (Index c = 0; c < cols; ++c) {
        const double* qr = q[static_cast<std::size_t>(c)].re.data();
        const double* qi = q[static_cast<std::size_t>(c)].im.data();
        double sr = 0.0, si = 0.0;
#pragma omp simd reduction(+ : sr, si)
        for (Index j = 0; j < n; ++j) {
          sr += qr[j] * kr[static_cast<std::size_t>(j)] - qi[j] * ki[static_cast<std::size_t>(j)];
          si += qr[j] * ki[static_cast<std::size_t>(j)] + qi[j] * kr[static_cast<std::size_t>(j)];
        }
        out(i, c) = {sr, si};
      }
    }
  }
}

std::shared_ptr<const SummationBackend> default_backend() {
  static const auto backend = std::make_shared<const DenseBackend>();
  return backend;
}

}  // namespace cntfield
