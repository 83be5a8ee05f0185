#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "gvb/graph.hpp"
#include "gvb/layout.hpp"

namespace gvb {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

std::string to_hex(Rgb c);
/// "#rrggbb"; throws ParameterError otherwise.
Rgb rgb_from_hex(const std::string& hex);
/// Relative luminance in [0,1].
double luminance(Rgb c);

struct ColorScheme {
  enum class Kind { uniform, random_palette };
  Kind kind = Kind::uniform;
  Rgb color{0x1f, 0x78, 0xb4};
  std::uint64_t seed = 0;

  static ColorScheme uniform(Rgb c) { return {Kind::uniform, c, 0}; }
  static ColorScheme random_palette(std::uint64_t seed) { return {Kind::random_palette, {}, seed}; }

  friend bool operator==(const ColorScheme&, const ColorScheme&) = default;
};

/// Random palettes never exceed this luminance so nodes stay visible on white.
inline constexpr double kPaletteLuminanceCap = 0.75;

/// Per-node fill colours for `scheme`.
std::vector<Rgb> node_colors(const ColorScheme& scheme, int node_count);

struct StyleSpec {
  LayoutKind layout = LayoutKind::spring;
  bool show_labels = true;
  bool directed_arrows = false;
  ColorScheme color_scheme;
  Rgb edge_color{0x33, 0x33, 0x33};
  int node_radius_px = 15;
  int edge_width_px = 2;
  bool weight_labels = false;
  double overlap_severity = 0.0;

  friend bool operator==(const StyleSpec&, const StyleSpec&) = default;
};

/// Throws ParameterError if radius/width are not positive or severity is
/// outside [0,1].
void validate(const StyleSpec& s);

nlohmann::json to_json(const StyleSpec& s);
StyleSpec style_from_json(const nlohmann::json& j);

inline constexpr int kCanvasSize = 600;
/// Distance from the canvas border to the unit square holding node centres.
inline constexpr int kCanvasMargin = 40;
/// Arrowheads: isosceles triangle, 10 px from base to tip, 8 px base.
inline constexpr double kArrowLength = 10.0;
inline constexpr double kArrowHalfWidth = 4.0;

/// Node diameter in layout units for a full canvas (pair = false) or one
/// half of a pair canvas.
double node_diameter_unit(const StyleSpec& s, bool pair = false);

struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

struct RenderedImage {
  std::string svg;
  Raster raster;
  /// FNV-1a 64 over width, height and the RGB bytes, as 16 hex digits.
  std::string content_hash;
};

std::string raster_hash(const Raster& r);

/// Nodes as filled circles over straight edges. Labels are centred on nodes
/// when show_labels; arrowheads end at the target's rim when
/// directed_arrows; weights sit on a white box at each edge midpoint when
/// weight_labels. Throws ParameterError when pos does not match the graph
/// or the canvas is empty.
RenderedImage render_graph(const Graph& g, const Positions& pos, const StyleSpec& style,
                           int width = kCanvasSize, int height = kCanvasSize);

/// Two panels side by side titled "Graph 1" and "Graph 2". Both graphs
/// must be labeled.
RenderedImage render_pair(const Graph& g1, const Positions& p1, const StyleSpec& s1,
                          const Graph& g2, const Positions& p2, const StyleSpec& s2,
                          int width = kCanvasSize, int height = kCanvasSize);

}  // namespace gvb
