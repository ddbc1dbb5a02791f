#include "cntfield/placement.hpp"

#include <random>
#include <string>

#include "cntfield/errors.hpp"

namespace cntfield {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void validate(int m, const LengthLaw& law, double inner_half_side, const PlacementOptions& o) {
  if (m < 0) throw InvalidInput("number of CNTs must be non-negative");
  if (!(law.min > 0) || law.max < law.min) throw InvalidInput("length law needs 0 < min <= max");
  if (law.max >= 2.0) throw InvalidInput("CNT length must be below the outer side length");
  if (inner_half_side < 0 || inner_half_side >= 1) throw InvalidInput("inner_half_side must lie in [0, 1)");
  if (o.separation < 0 || o.clearance < 0) throw InvalidInput("separation and clearance must be non-negative");
  if (!(o.aspect > 0) || o.aspect > 1) throw InvalidInput("aspect must lie in (0, 1]");
  if (o.attempts_per_cnt <= 0) throw InvalidInput("attempt budget must be positive");
}

}  // namespace

bool admissible(const Segment& candidate, const std::vector<Segment>& placed, double inner_half_side,
                const PlacementOptions& options) {
  const double thick = 0.5 * options.aspect * candidate.length;
  const auto [a, b] = candidate.endpoints();
  const double limit = 1.0 - options.clearance - thick;
  for (Complex p : {a, b})
    if (std::abs(p.real()) >= limit || std::abs(p.imag()) >= limit) return false;
  if (inner_half_side > 0 && segment_box_distance(candidate, inner_half_side) - thick < options.clearance)
    return false;
  for (const auto& s : placed) {
    const double gap = segment_min_distance(candidate, s) - thick - 0.5 * options.aspect * s.length;
    if (gap < options.separation) return false;
  }
  return true;
}

std::vector<Segment> generate_cnts(int m, const LengthLaw& law, double inner_half_side,
                                   const PlacementOptions& options, std::uint64_t seed) {
  validate(m, law, inner_half_side, options);
  std::mt19937_64 rng(seed);
  std::vector<Segment> placed;
  placed.reserve(static_cast<std::size_t>(m));
  const long budget = options.attempts_per_cnt * m;
  long attempts = 0;
  while (static_cast<int>(placed.size()) < m) {
    if (attempts >= budget)
      throw CapacityError("placed " + std::to_string(placed.size()) + " of " + std::to_string(m) +
                              " CNTs before exhausting the budget of " + std::to_string(budget) + " attempts",
                          budget);
    ++attempts;
    const double x = 2.0 * uniform01(rng) - 1.0;
    const double y = 2.0 * uniform01(rng) - 1.0;
    const double angle = kPi * uniform01(rng);
    const double u = uniform01(rng);
    const double length = law.kind == LengthLaw::Kind::Fixed ? law.min : law.min + (law.max - law.min) * u;
    Segment candidate({x, y}, length, angle);
    if (admissible(candidate, placed, inner_half_side, options)) placed.push_back(candidate);
  }
  return placed;
}

}  // namespace cntfield
