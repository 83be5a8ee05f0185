#pragma once

#include <vector>

#include "gvb/graph.hpp"

namespace gvb {

/// Stroke font on a 4 x 6 cell (y grows downwards, descenders reach 7.5),
/// advance 5 units. Covers digits, '-', ' ' and the letters of "Graph";
/// any other character renders as an outlined box.
using GlyphStrokes = std::vector<std::vector<Point>>;

const GlyphStrokes& glyph_strokes(char c);

inline constexpr double kGlyphCellWidth = 4.0;
inline constexpr double kGlyphCellHeight = 6.0;
inline constexpr double kGlyphAdvance = 5.0;

}  // namespace gvb
