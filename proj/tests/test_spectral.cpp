#include <random>

#include "cntfield/errors.hpp"
#include "cntfield/spectral.hpp"
#include "doctest.h"

using namespace cntfield;

namespace {

Vector grid(Index n) { return Vector::LinSpaced(n, 0.0, kTwoPi * double(n - 1) / double(n)); }

}  // namespace

TEST_CASE("spectral derivative of cos t is -sin t") {
  const Vector t = grid(64);
  const Vector d = spectral_derivative(Vector(t.array().cos()));
  CHECK((d + Vector(t.array().sin())).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("spectral derivative of a constant vanishes") {
  CHECK(spectral_derivative(Vector(Vector::Constant(32, 2.5))).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spectral derivative of exp(3it) at n = 16") {
  const Vector t = grid(16);
  CVector f(16), expected(16);
  for (Index j = 0; j < 16; ++j) {
    f[j] = std::exp(Complex(0, 3 * t[j]));
    expected[j] = Complex(0, 3) * f[j];
  }
  CHECK((spectral_derivative(f) - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("spectral derivative rejects odd or empty input") {
  CHECK_THROWS_AS(spectral_derivative(Vector(Vector::Zero(7))), InvalidInput);
  CHECK_THROWS_AS(spectral_derivative(Vector(0)), InvalidInput);
  CHECK_THROWS_AS(conjugation(Vector::Zero(9)), InvalidInput);
}

TEST_CASE("trig_upsample reproduces band-limited functions on the fine grid") {
  const Index n = 32;
  const int factor = 5;
  auto fn = [](double t) { return 1.0 + std::cos(3 * t) - 0.5 * std::sin(7 * t) + 0.25 * std::cos(15 * t); };
  Vector coarse(n);
  for (Index j = 0; j < n; ++j) coarse[j] = fn(kTwoPi * j / n);
  const Vector fine = trig_upsample(coarse, factor);
  REQUIRE(fine.size() == n * factor);
  double err = 0;
  for (Index j = 0; j < fine.size(); ++j) err = std::max(err, std::abs(fine[j] - fn(kTwoPi * j / fine.size())));
  CHECK(err < 1e-13);
  for (Index j = 0; j < n; ++j) CHECK(fine[j * factor] == doctest::Approx(coarse[j]).epsilon(1e-14));
}

TEST_CASE("conjugation maps cos kt to sin kt for every k < n/2") {
  const Index n = 128;
  const Vector t = grid(n);
  double worst = 0;
  for (Index k = 1; k < n / 2; ++k) {
    const Vector v = conjugation(Vector((k * t.array()).cos()));
    worst = std::max(worst, (v - Vector((k * t.array()).sin())).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);
  // and sin kt to -cos kt
  const Vector s = conjugation(Vector((5 * t.array()).sin()));
  CHECK((s + Vector((5 * t.array()).cos())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conjugation annihilates constants") {
  CHECK(conjugation(Vector::Constant(64, 3.0)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("conjugation of a random degree-5 trigonometric polynomial") {
  const Index n = 64;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  double a[6], b[6];
  for (int k = 0; k <= 5; ++k) a[k] = u(rng), b[k] = u(rng);
  Vector f(n), expected(n);
  for (Index j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    f[j] = a[0];
    expected[j] = 0.0;
    for (int k = 1; k <= 5; ++k) {
      f[j] += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
      expected[j] += a[k] * std::sin(k * t) - b[k] * std::cos(k * t);
    }
  }
  CHECK((conjugation(f) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Circulant matches the explicit product") {
  const Index n = 24;
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  Vector c(n), x(n);
  for (Index i = 0; i < n; ++i) c[i] = g(rng), x[i] = g(rng);
  Vector direct = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) direct[i] += c[(i - j + n) % n] * x[j];
  CHECK((Circulant(c).apply(x) - direct).cwiseAbs().maxCoeff() < 1e-13);
}
