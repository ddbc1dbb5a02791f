#include "cntfield/spectral.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "cntfield/errors.hpp"

namespace cntfield {
namespace {

void require_even(Index n, const char* where) {
  if (n <= 0 || n % 2 != 0) {
    throw InvalidInput(std::string(where) + ": sample count must be even and positive, got " +
                       std::to_string(n));
  }
}

std::vector<Complex> forward(const CVector& samples) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(samples.data(), samples.data() + samples.size());
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

CVector inverse(const std::vector<Complex>& spectrum) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.inv(out, spectrum);
  return Eigen::Map<const CVector>(out.data(), static_cast<Index>(out.size()));
}

}  // namespace

CVector spectral_derivative(const CVector& samples) {
  const Index n = samples.size();
  require_even(n, "spectral_derivative");
  auto spectrum = forward(samples);
  for (Index k = 0; k < n; ++k) {
    const Index wave = k < n / 2 ? k : k - n;
    spectrum[k] *= (k == n / 2) ? Complex(0.0) : Complex(0.0, static_cast<double>(wave));
  }
  return inverse(spectrum);
}

Vector spectral_derivative(const Vector& samples) {
  return spectral_derivative(CVector(samples.cast<Complex>())).real();
}

CVector trig_upsample(const CVector& samples, int factor) {
  const Index n = samples.size();
  require_even(n, "trig_upsample");
  if (factor < 1) throw InvalidInput("trig_upsample: factor must be >= 1");
  if (factor == 1) return samples;
  const Index fine = n * factor;
  const auto coarse = forward(samples);
  std::vector<Complex> spectrum(static_cast<std::size_t>(fine), Complex(0.0));
  for (Index k = 0; k < n / 2; ++k) spectrum[k] = coarse[k];
  for (Index k = n / 2 + 1; k < n; ++k) spectrum[fine - n + k] = coarse[k];
  spectrum[n / 2] = 0.5 * coarse[n / 2];
  spectrum[fine - n / 2] = 0.5 * coarse[n / 2];
  for (auto& c : spectrum) c *= static_cast<double>(factor);
  return inverse(spectrum);
}

Vector trig_upsample(const Vector& samples, int factor) {
  return trig_upsample(CVector(samples.cast<Complex>()), factor).real();
}

Vector conjugation(const Vector& values) {
  const Index n = values.size();
  require_even(n, "conjugation");
  // cot table indexed by (i - j) mod n; only odd offsets are used.
  Vector table = Vector::Zero(n);
  for (Index d = 1; d < n; d += 2) table[d] = (2.0 / n) / std::tan(kPi * d / n);
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index j = (i + 1) % 2; j < n; j += 2) acc += table[(i - j + n) % n] * values[j];
    out[i] = acc;
  }
  return out;
}

Circulant::Circulant(const Vector& first_column)
    : spectrum_(forward(CVector(first_column.cast<Complex>()))) {}

Vector Circulant::apply(const Vector& x) const {
  if (x.size() != size()) throw InvalidInput("Circulant::apply: dimension mismatch");
  auto s = forward(CVector(x.cast<Complex>()));
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= spectrum_[k];
  return inverse(s).real();
}

}  // namespace cntfield
