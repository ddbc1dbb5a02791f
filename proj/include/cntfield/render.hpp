#pragma once

// Figures from a FieldGrid: banded temperature contours and a phase portrait
// of the heat flux. Colors: arg q = 0 red, π/2 green, π cyan, 3π/2 violet,
// with the hue interpolated linearly in between. Brightness follows a
// sawtooth in log|q| with one period per factor √2, which draws the modulus
// contour lines.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cntfield/field.hpp"

namespace cntfield {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Row 0 is the top of the picture (largest y).
struct RasterImage {
  Index width = 0, height = 0;
  std::vector<Rgb> pixels;

  const Rgb& at(Index x, Index y) const { return pixels[static_cast<std::size_t>(y * width + x)]; }
};

inline constexpr Rgb kMaskedColor{211, 211, 211};
inline constexpr Rgb kZeroFluxColor{128, 128, 128};

/// Hue in degrees [0, 360) assigned to the direction of q.
double flux_hue_degrees(Complex q);
/// Hue in degrees [0, 360) of an RGB color (standard HSV hue).
double rgb_hue_degrees(const Rgb& c);
Rgb hsv_to_rgb(double hue_degrees, double saturation, double value);
Rgb phase_color(Complex q);

RasterImage phase_portrait(const FieldGrid& grid);

/// Band index floor((U + 1)/2 · levels) clamped to [0, levels − 1]; −1 on masked cells.
struct BandGrid {
  Index nx = 0, ny = 0;
  int levels = 0;
  std::vector<int> band;
};
BandGrid contour_bands(const FieldGrid& grid, int levels);

/// Bands colored from blue (U = −1) to red (U = 1); masked cells light gray.
RasterImage band_image(const BandGrid& bands);

/// Plain PPM (P3): header "P3\n<w> <h>\n255\n", then one row of triples per line.
/// A non-empty comment goes on its own "# " line right after "P3".
void write_ppm(const RasterImage& image, std::ostream& out, const std::string& comment = "");

}  // namespace cntfield
