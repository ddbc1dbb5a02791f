#include "cntfield/render.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cntfield/errors.hpp"

namespace cntfield {

namespace {

constexpr double kContourPeriod = 0.34657359027997264;  // ln √2

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

}  // namespace

double flux_hue_degrees(Complex q) {
  double a = std::arg(q);
  if (a < 0) a += kTwoPi;
  // (arg, hue) anchors; linear in between.
  static constexpr double arg_at[5] = {0.0, 0.5 * kPi, kPi, 1.5 * kPi, kTwoPi};
  static constexpr double hue_at[5] = {0.0, 120.0, 180.0, 270.0, 360.0};
  for (int i = 0; i < 4; ++i) {
    if (a <= arg_at[i + 1]) {
      const double s = (a - arg_at[i]) / (arg_at[i + 1] - arg_at[i]);
      return std::fmod(hue_at[i] + s * (hue_at[i + 1] - hue_at[i]), 360.0);
    }
  }
  return 0.0;
}

Rgb hsv_to_rgb(double hue, double s, double v) {
  hue = std::fmod(hue, 360.0);
  if (hue < 0) hue += 360.0;
  const double c = v * s;
  const double hp = hue / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  const double m = v - c;
  return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

double rgb_hue_degrees(const Rgb& c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double d = mx - mn;
  if (d == 0) return 0.0;
  double h;
  if (mx == r)
    h = std::fmod((g - b) / d, 6.0);
  else if (mx == g)
    h = (b - r) / d + 2.0;
  else
    h = (r - g) / d + 4.0;
  h *= 60.0;
  return h < 0 ? h + 360.0 : h;
}

Rgb phase_color(Complex q) {
  const double mod = std::abs(q);
  if (!std::isfinite(mod)) return kMaskedColor;
  if (mod == 0.0) return kZeroFluxColor;
  const double x = std::log(mod) / kContourPeriod;
  const double saw = x - std::floor(x);
  return hsv_to_rgb(flux_hue_degrees(q), 1.0, 0.6 + 0.4 * saw);
}

RasterImage phase_portrait(const FieldGrid& grid) {
  RasterImage img{grid.nx, grid.ny, std::vector<Rgb>(static_cast<std::size_t>(grid.size()))};
  for (Index iy = 0; iy < grid.ny; ++iy) {
    for (Index ix = 0; ix < grid.nx; ++ix) {
      const auto c = static_cast<std::size_t>(grid.index(ix, iy));
      const auto p = static_cast<std::size_t>((grid.ny - 1 - iy) * grid.nx + ix);
      img.pixels[p] = grid.mask[c] == CellMask::Ring ? phase_color(grid.q[c]) : kMaskedColor;
    }
  }
  return img;
}

BandGrid contour_bands(const FieldGrid& grid, int levels) {
  if (levels < 2) throw InvalidInput("contour_bands needs at least two levels");
  BandGrid out{grid.nx, grid.ny, levels, std::vector<int>(static_cast<std::size_t>(grid.size()), -1)};
  for (Index c = 0; c < grid.size(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    if (grid.mask[i] != CellMask::Ring) continue;
    const double b = std::floor(0.5 * (grid.U[i] + 1.0) * levels);
    out.band[i] = static_cast<int>(std::clamp(b, 0.0, static_cast<double>(levels - 1)));
  }
  return out;
}

RasterImage band_image(const BandGrid& bands) {
  RasterImage img{bands.nx, bands.ny, std::vector<Rgb>(bands.band.size())};
  for (Index iy = 0; iy < bands.ny; ++iy) {
    for (Index ix = 0; ix < bands.nx; ++ix) {
      const int b = bands.band[static_cast<std::size_t>(iy * bands.nx + ix)];
      Rgb c = kMaskedColor;
      // Cold bands blue, hot bands red.
      if (b >= 0) c = hsv_to_rgb(240.0 * (1.0 - (b + 0.5) / bands.levels), 0.7, 0.95);
      img.pixels[static_cast<std::size_t>((bands.ny - 1 - iy) * bands.nx + ix)] = c;
    }
  }
  return img;
}

void write_ppm(const RasterImage& image, std::ostream& out, const std::string& comment) {
  out << "P3\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << image.width << ' ' << image.height << "\n255\n";
  for (Index y = 0; y < image.height; ++y) {
    for (Index x = 0; x < image.width; ++x) {
      const auto& p = image.at(x, y);
      out << (x ? " " : "") << int(p.r) << ' ' << int(p.g) << ' ' << int(p.b);
    }
    out << '\n';
  }
}

}  // namespace cntfield
