#pragma once

// Operations on samples of 2π-periodic functions taken on the equispaced
// grid t_j = 2πj/n. All routines require an even, positive n.

#include <vector>

#include "cntfield/types.hpp"

namespace cntfield {

/// Derivative of the trigonometric interpolant of degree < n/2 (Nyquist mode dropped).
CVector spectral_derivative(const CVector& samples);
Vector spectral_derivative(const Vector& samples);

/// Trigonometric interpolant resampled on a grid `factor` times finer.
/// Coarse node j maps to fine node j*factor. The Nyquist mode is split
/// symmetrically, so real input gives real output.
CVector trig_upsample(const CVector& samples, int factor);
Vector trig_upsample(const Vector& samples, int factor);

/// Periodic conjugation (discrete Hilbert transform)
///   v(s) = (1/2π) PV∫ cot((s − t)/2) μ(t) dt
/// by the alternate-point trapezoidal rule: only nodes whose index differs
/// from the target by an odd number contribute, each with weight 4π/n.
/// Exact for trigonometric polynomials of degree < n/2; cos(kt) ↦ sin(kt).
Vector conjugation(const Vector& values);

/// Multiplication by the circulant matrix C(i, j) = c[(i − j) mod n], done
/// with FFTs.
class Circulant {
 public:
  explicit Circulant(const Vector& first_column);
  Index size() const { return static_cast<Index>(spectrum_.size()); }
  Vector apply(const Vector& x) const;

 private:
  std::vector<Complex> spectrum_;
};

}  // namespace cntfield
