#pragma once

// File formats. Byte layouts are described in docs/formats.md.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cntfield/field.hpp"
#include "cntfield/render.hpp"
#include "cntfield/solver.hpp"

namespace cntfield {

/// Everything needed to rebuild a Domain exactly.
struct GeometryRecord {
  Domain domain;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// Hash of the geometric content (shape, aspect, inner_half_side, alpha, CNTs).
std::string geometry_hash(const Domain& domain);

void write_geometry(const GeometryRecord& record, std::ostream& out);
/// Throws InvalidInput naming the offending line / CNT record.
GeometryRecord read_geometry(std::istream& in);

struct SolutionRecord {
  GeometryRecord geometry;
  Index n = 0;
  int upsample = 31;
  BoundarySolution solution;
};

void write_solution(const SolutionRecord& record, std::ostream& out);
SolutionRecord read_solution(std::istream& in);

struct FieldHeader {
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// CSV with '#' header lines, then "x,y,mask,U,Re_q,Im_q[,band]".
void write_field_csv(const FieldGrid& grid, const FieldHeader& header, std::ostream& out,
                     const BandGrid* bands = nullptr);
void write_field_binary(const FieldGrid& grid, const FieldHeader& header, std::ostream& out);
FieldGrid read_field_binary(std::istream& in, FieldHeader* header = nullptr);

/// Helpers that open the file and translate stream failures into IoError.
void save_text(const std::string& path, const std::string& content);
std::string load_text(const std::string& path);

}  // namespace cntfield
