#pragma once

// Run configuration: a flat "key = value" file, '#' starts a comment.
// Every key has a default; unknown keys are rejected. Individual keys can be
// overridden from the command line.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cntfield/field.hpp"
#include "cntfield/placement.hpp"

namespace cntfield {

struct RunConfig {
  std::uint64_t seed = 1;
  DomainShape domain = DomainShape::SquareRing;
  int m = 4;
  LengthLaw length_law = LengthLaw::uniform(0.2, 0.5);
  double inner_half_side = 0.5;
  double aspect = 0.01;
  Index n = 512;
  double gmres_tol = 1e-12;
  int gmres_maxit = 100;
  double separation = 0.01;
  double clearance = 0.02;
  int upsample = 31;
  BBox bbox;
  Index nx = 500, ny = 500;
  std::vector<std::string> outputs = {"geometry", "solution", "field_csv", "field_bin", "phase_ppm", "contour_ppm", "report"};
  std::vector<Complex> probe_points;
  int threads = 0;  // 0: OpenMP default
  int contour_levels = 20;
  double standoff = 0.02;
  double guard = 1.0;
  std::string output_dir = ".";
  std::string prefix = "run";

  bool wants(const std::string& output) const;
};

/// Parses the key = value text. Throws InvalidInput naming the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Applies "key=value" overrides in order.
void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides);
/// Checks every field against the preconditions of the modules it feeds.
void validate(const RunConfig& config);

/// Canonical text of the effective configuration (sorted keys, all values).
std::string canonical_text(const RunConfig& config);
/// FNV-1a 64-bit hash of canonical_text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

}  // namespace cntfield
