#include "cntfield/errors.hpp"
#include "cntfield/geometry.hpp"
#include "cntfield/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cntfield;

TEST_CASE("segment normalizes its angle and validates length") {
  CHECK(Segment(0.0, 1.0, kPi + 0.25).angle == doctest::Approx(0.25));
  CHECK(Segment(0.0, 1.0, -0.25).angle == doctest::Approx(kPi - 0.25));
  CHECK(Segment(0.0, 1.0, kPi).angle == 0.0);
  CHECK_THROWS_AS(Segment(0.0, 0.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(Segment(0.0, -1.0, 0.0), InvalidInput);
  const auto [a, b] = Segment({1, 1}, 0.2, kPi / 2).endpoints();
  CHECK(std::abs(a - Complex(1, 0.9)) < 1e-15);
  CHECK(std::abs(b - Complex(1, 1.1)) < 1e-15);
}

TEST_CASE("ellipse_param examples") {
  const Segment unit(0.0, 2.0, 0.0);
  CHECK(std::abs(ellipse_param(unit, 1.0, kPi / 2).position() - Complex(0, -1)) < 1e-15);
  const auto p0 = ellipse_param(unit, 1.0, 0.0);
  CHECK(std::abs(p0.position() - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(p0.derivative - Complex(0, -1)) < 1e-15);
  const auto p = ellipse_param(Segment({1, 1}, 0.1, kPi / 2), 0.01, 0.0);
  CHECK(std::abs(p.position() - Complex(1, 1.05)) < 1e-15);
}

TEST_CASE("ellipse at aspect 1 traces the unit circle clockwise") {
  const Segment unit(0.0, 2.0, 0.0);
  for (int i = 0; i < 50; ++i) {
    const double t = kTwoPi * i / 50;
    const auto p = ellipse_param(unit, 1.0, t);
    CHECK(std::abs(std::abs(p.position()) - 1.0) < 1e-15);
    CHECK(std::abs(p.position() - std::exp(Complex(0, -t))) < 1e-15);
  }
}

TEST_CASE("ellipse derivatives match finite differences") {
  const Segment s({0.3, -0.2}, 0.4, 0.7);
  const double h = 1e-5;
  for (double t : {0.1, 1.3, 2.9, 5.0}) {
    const auto p = ellipse_param(s, 0.05, t);
    const auto fd1 = (ellipse_param(s, 0.05, t + h).position() - ellipse_param(s, 0.05, t - h).position()) / (2 * h);
    const auto fd2 = (ellipse_param(s, 0.05, t + h).derivative - ellipse_param(s, 0.05, t - h).derivative) / (2 * h);
    CHECK(std::abs(p.derivative - fd1) < 1e-9);
    CHECK(std::abs(p.second - fd2) < 1e-9);
  }
}

TEST_CASE("kress grading is a bijection of [0,1] flat at both ends") {
  for (int p : {2, 3, 4, 6}) {
    const auto g0 = kress_grading(0.0, p), g1 = kress_grading(1.0, p), gh = kress_grading(0.5, p);
    CHECK(g0.value == doctest::Approx(0.0));
    CHECK(g1.value == doctest::Approx(1.0));
    CHECK(gh.value == doctest::Approx(0.5));
    CHECK(std::abs(g0.d1) < 1e-15);
    CHECK(std::abs(g1.d1) < 1e-15);
    double prev = -1;
    for (int i = 0; i <= 100; ++i) {
      const auto g = kress_grading(i / 100.0, p);
      CHECK(g.value >= prev);
      CHECK(g.value + g.complement == doctest::Approx(1.0));
      prev = g.value;
    }
  }
  // derivatives against finite differences
  const double h = 1e-6;
  for (double s : {0.05, 0.3, 0.6, 0.93}) {
    const auto g = kress_grading(s, kSquareGradingOrder);
    const auto gp = kress_grading(s + h, kSquareGradingOrder), gm = kress_grading(s - h, kSquareGradingOrder);
    CHECK(g.d1 == doctest::Approx((gp.value - gm.value) / (2 * h)).epsilon(1e-7));
    CHECK(g.d2 == doctest::Approx((gp.d1 - gm.d1) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("square_param examples") {
  // corner (1,1) is corner 1 of the counter-clockwise square
  const double tc = square_corner_parameter(1);
  const auto c = square_param(1.0, tc, Orientation::CounterClockwise);
  CHECK(std::abs(c.position() - Complex(1, 1)) < 1e-15);
  CHECK(std::abs(c.derivative) < 1e-15);
  CHECK(std::abs(c.second) < 1e-14);
  // midpoint of the first side
  const auto m = square_param(1.0, kPi / 4, Orientation::CounterClockwise);
  CHECK(std::max(std::abs(m.position().real()), std::abs(m.position().imag())) == doctest::Approx(1.0));
  CHECK(std::abs(m.position() - Complex(1, 0)) < 1e-15);
  for (int i = 0; i < 97; ++i) {
    const auto p = square_param(0.5, kTwoPi * i / 97 + 0.01, Orientation::Clockwise);
    CHECK(std::max(std::abs(p.position().real()), std::abs(p.position().imag())) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("square derivative vanishes at every corner to order >= 2") {
  for (auto o : {Orientation::CounterClockwise, Orientation::Clockwise}) {
    for (int k = 0; k < 4; ++k) {
      const double tc = square_corner_parameter(k, 0.1);
      const auto p = square_param(0.7, tc, o, 0.1);
      CHECK(std::abs(p.derivative) < 1e-14);
      CHECK(std::abs(p.second) < 1e-12);
      // |η'| ~ ε³ next to the corner
      const double e = 1e-3;
      CHECK(std::abs(square_param(0.7, tc + e, o, 0.1).derivative) < 1e-6);
      CHECK(std::abs(square_param(0.7, tc - e, o, 0.1).derivative) < 1e-6);
    }
  }
}

TEST_CASE("square derivatives match finite differences and anchors are corners") {
  const double h = 1e-6;
  for (double t : {0.2, 1.0, 2.0, 3.3, 4.4, 5.9}) {
    const auto p = square_param(1.0, t, Orientation::CounterClockwise, 0.05);
    const auto fd = (square_param(1.0, t + h, Orientation::CounterClockwise, 0.05).position() -
                     square_param(1.0, t - h, Orientation::CounterClockwise, 0.05).position()) / (2 * h);
    CHECK(std::abs(p.derivative - fd) < 1e-8);
    CHECK(std::abs(std::abs(p.anchor.real()) - 1) < 1e-15);
    CHECK(std::abs(std::abs(p.anchor.imag()) - 1) < 1e-15);
  }
}

TEST_CASE("spectral derivative of sampled curves agrees with the analytic derivative") {
  const Index n = 256;
  SUBCASE("ellipses and circles: < 1e-10") {
    const std::vector<CurveShape> shapes = {ThinEllipse{Segment({0.2, 0.1}, 0.5, 1.0), 0.05},
                                            ThinEllipse{Segment({0.2, 0.1}, 0.5, 1.0), 0.2},
                                            CircleCurve{{0.1, 0.0}, 0.7, Orientation::Clockwise}};
    for (const auto& s : shapes) {
      DiscretizedBoundary b({{s, BoundaryRole::Dirichlet}}, n);
      CHECK((spectral_derivative(b.eta()) - b.eta_prime()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("graded squares: error decays under refinement") {
    double prev = 1e300;
    for (Index m : {64, 128, 256, 512, 1024}) {
      DiscretizedBoundary b({{SquareCurve{1.0, Orientation::CounterClockwise}, BoundaryRole::Dirichlet}}, m);
      const double err = (spectral_derivative(b.eta()) - b.eta_prime()).cwiseAbs().maxCoeff();
      CHECK(err < prev / 4);
      prev = err;
    }
    CHECK(prev < 1e-7);
  }
}

TEST_CASE("discrete winding numbers reflect the orientation of each curve") {
  // The trapezoidal winding sum about an ellipse center converges like
  // exp(−aspect·n), so the grid must resolve the ellipse thickness.
  Domain d = oracle::example1(0.05);
  const DiscretizedBoundary b(d.layout(), 512);
  for (Index k = 0; k < Index(d.cnts.size()); ++k)
    CHECK(b.winding_number(k, d.cnts[std::size_t(k)].center) == doctest::Approx(-1.0).epsilon(1e-9));
  // On the squares the sum converges at fourth order only: η' vanishes like
  // |t − t_c|³ at a corner but turns through a right angle there.
  double prev = 1.0;
  for (Index n : {128, 256, 512}) {
    const DiscretizedBoundary bn(d.layout(), n);
    const double inner = bn.winding_number(Index(d.cnts.size()), 0.0) + 1.0;
    const double outer = bn.winding_number(Index(d.cnts.size()) + 1, 0.0) - 1.0;
    CHECK(std::abs(inner) < prev / 12);
    CHECK(std::abs(outer) < prev / 12);
    prev = std::max(std::abs(inner), std::abs(outer));
  }
  CHECK(prev < 1e-8);
}

TEST_CASE("segment_min_distance") {
  const Segment a(0.5, 1.0, 0.0);
  CHECK(segment_min_distance(a, a) == 0.0);
  CHECK(segment_min_distance(Segment(0.0, 1.0, 0.0), Segment({0, 1}, 1.0, 0.0)) == doctest::Approx(1.0));
  // (0,0)-(1,0) against (2,1)-(2,-1)
  CHECK(segment_min_distance(Segment(0.5, 1.0, 0.0), Segment(2.0, 2.0, kPi / 2)) == doctest::Approx(1.0));
  CHECK(oracle::sampled_segment_distance(0.0, 1.0, {2, 1}, {2, -1}) == doctest::Approx(1.0));
  // crossing segments
  CHECK(segment_min_distance(Segment(0.0, 1.0, 0.3), Segment(0.0, 1.0, 1.5)) == 0.0);
  // random pairs against the sampling oracle
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const Segment s1({u(rng), u(rng)}, 0.1 + std::abs(u(rng)), 3 * u(rng));
    const Segment s2({u(rng), u(rng)}, 0.1 + std::abs(u(rng)), 3 * u(rng));
    const auto [a0, a1] = s1.endpoints();
    const auto [b0, b1] = s2.endpoints();
    const double brute = std::min(oracle::sampled_segment_distance(a0, a1, b0, b1),
                                  oracle::sampled_segment_distance(b0, b1, a0, a1));
    // the sampled oracle overestimates by at most half a sample spacing
    const double exact = segment_min_distance(s1, s2);
    CHECK(exact <= brute + 1e-12);
    CHECK(exact >= brute - 0.5 * std::max(s1.length, s2.length) / 2000 - 1e-12);
  }
}

TEST_CASE("segment_box_distance") {
  CHECK(segment_box_distance(Segment({0.8, 0}, 0.2, 0), 0.5) == doctest::Approx(0.2));
  CHECK(segment_box_distance(Segment({0.8, 0}, 0.8, 0), 0.5) == 0.0);
  CHECK(segment_box_distance(Segment({0.7, 0.7}, 0.1, kPi / 4), 0.5) ==
        doctest::Approx(std::sqrt(2.0) * (0.7 - 0.5) - 0.05));
  // a long segment passing across the box with both endpoints outside
  CHECK(segment_box_distance(Segment(0.0, 1.6, 0.0), 0.5) == 0.0);
}

TEST_CASE("distance_to_curve and inside_curve") {
  const SquareCurve sq{1.0, Orientation::CounterClockwise};
  CHECK(distance_to_curve(sq, {0.5, 0.2}) == doctest::Approx(0.5));
  CHECK(distance_to_curve(sq, {2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(inside_curve(sq, {0.99, -0.99}));
  CHECK_FALSE(inside_curve(sq, {1.01, 0}));
  const ThinEllipse e{Segment(0.0, 1.0, 0.0), 0.1};
  CHECK(inside_curve(e, {0.49, 0.0}));
  CHECK_FALSE(inside_curve(e, {0.0, 0.051}));
  CHECK(distance_to_curve(e, {0.0, 0.5}) == doctest::Approx(0.45));
}

TEST_CASE("domain layout, membership and default alpha") {
  Domain d = oracle::example1(0.01);
  const auto layout = d.layout();
  REQUIRE(layout.size() == d.cnts.size() + 2);
  CHECK(layout.back().role == BoundaryRole::Dirichlet);
  CHECK(layout[d.cnts.size()].role == BoundaryRole::InsulatedHole);
  CHECK(d.contains(d.alpha));
  CHECK(d.alpha == Complex(0.75, 0.0));
  CHECK_FALSE(d.contains(0.0));
  CHECK_FALSE(d.contains(d.cnts[0].center));
  // a nanotube sitting on the preferred point forces the grid fallback
  Domain blocked;
  blocked.cnts = {Segment({0.75, 0.0}, 0.2, 0.0)};
  blocked.inner_half_side = 0.5;
  const Complex alpha = default_alpha(blocked);
  CHECK(blocked.contains(alpha));
  CHECK(blocked.distance_to_boundary(alpha) >= 0.02);
  // no inner square
  Domain plain;
  plain.inner_half_side = 0.0;
  CHECK(plain.layout().size() == 1);
  CHECK(default_alpha(plain) == Complex(0.5, 0.0));
}

TEST_CASE("discretized boundary validation and corner windows") {
  CHECK_THROWS_AS(DiscretizedBoundary({{SquareCurve{}, BoundaryRole::Dirichlet}}, 7), InvalidInput);
  CHECK_THROWS_AS(DiscretizedBoundary({{SquareCurve{}, BoundaryRole::Inclusion}}, 16), InvalidInput);
  CHECK_THROWS_AS(DiscretizedBoundary({{SquareCurve{}, BoundaryRole::Dirichlet}, {SquareCurve{}, BoundaryRole::Dirichlet}}, 16),
                  InvalidInput);
  const DiscretizedBoundary b({{SquareCurve{}, BoundaryRole::Dirichlet}}, 64);
  int flagged = 0;
  for (Index j = 0; j < 64; ++j) flagged += b.in_corner_window(j);
  CHECK(flagged == 24);  // three nodes on either side of four corners
  CHECK(b.in_corner_window(0));
  CHECK(b.in_corner_window(1));
  CHECK_FALSE(b.in_corner_window(8));
  // corners sit halfway between nodes 0 and 1
  const auto p = sample_curve(SquareCurve{}, b.corner_phase(), b.corner_phase());
  CHECK(std::abs(p.position() - Complex(1, -1)) < 1e-15);
}
