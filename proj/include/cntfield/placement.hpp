#pragma once

// Seeded random sequential placement of non-overlapping nanotubes in the
// square ring.

#include <cstdint>
#include <vector>

#include "cntfield/geometry.hpp"

namespace cntfield {

struct LengthLaw {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  double min = 0.1;
  double max = 0.1;

  static LengthLaw fixed(double length) { return {Kind::Fixed, length, length}; }
  static LengthLaw uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
};

struct PlacementOptions {
  double separation = 0.01;  // min gap between two ellipses
  double clearance = 0.02;   // min gap to either square
  double aspect = 0.01;      // ellipse thickness counts against both gaps
  long attempts_per_cnt = 10000;
};

/// m segments with uniform angles in [0, π) and centers uniform over the
/// admissible part of the ring, drawn by rejection. Deterministic for a
/// fixed seed on every platform (uniforms are built from raw 64-bit draws).
/// Throws CapacityError once attempts_per_cnt·m candidates were rejected.
std::vector<Segment> generate_cnts(int m, const LengthLaw& law, double inner_half_side,
                                   const PlacementOptions& options, std::uint64_t seed);

/// True if `candidate` respects the ring clearance and the separation from
/// every segment in `placed`.
bool admissible(const Segment& candidate, const std::vector<Segment>& placed, double inner_half_side,
                const PlacementOptions& options);

}  // namespace cntfield
