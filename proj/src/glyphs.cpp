#include "gvb/glyphs.hpp"

#include <map>

namespace gvb {

namespace {

const std::map<char, GlyphStrokes>& font() {
  static const std::map<char, GlyphStrokes> table = {
      {'0', {{{1, 0}, {3, 0}, {4, 1}, {4, 5}, {3, 6}, {1, 6}, {0, 5}, {0, 1}, {1, 0}}}},
      {'1', {{{1, 1}, {2, 0}, {2, 6}}, {{1, 6}, {3, 6}}}},
      {'2', {{{0, 1}, {1, 0}, {3, 0}, {4, 1}, {4, 2}, {0, 6}, {4, 6}}}},
      {'3', {{{0, 0}, {4, 0}, {2, 2.5}, {3, 2.5}, {4, 3.5}, {4, 5}, {3, 6}, {1, 6}, {0, 5}}}},
      {'4', {{{3, 6}, {3, 0}, {0, 4}, {4, 4}}}},
      {'5', {{{4, 0}, {0, 0}, {0, 2.5}, {3, 2.5}, {4, 3.5}, {4, 5}, {3, 6}, {0, 6}}}},
      {'6',
       {{{3, 0}, {1, 0}, {0, 1}, {0, 5}, {1, 6}, {3, 6}, {4, 5}, {4, 3.5}, {3, 2.5}, {0, 2.5}}}},
      {'7', {{{0, 0}, {4, 0}, {1.5, 6}}}},
      {'8',
       {{{1, 0}, {3, 0}, {4, 1}, {4, 2}, {3, 3}, {1, 3}, {0, 2}, {0, 1}, {1, 0}},
        {{1, 3}, {3, 3}, {4, 4}, {4, 5}, {3, 6}, {1, 6}, {0, 5}, {0, 4}, {1, 3}}}},
      {'9',
       {{{4, 3.5}, {1, 3.5}, {0, 2.5}, {0, 1}, {1, 0}, {3, 0}, {4, 1}, {4, 5}, {3, 6}, {1, 6}}}},
      {'-', {{{0.5, 3}, {3.5, 3}}}},
      {' ', {}},
      {'G',
       {{{4, 1}, {3, 0}, {1, 0}, {0, 1}, {0, 5}, {1, 6}, {3, 6}, {4, 5}, {4, 3.5}, {2.5, 3.5}}}},
      {'r', {{{0, 2}, {0, 6}}, {{0, 3.5}, {1.5, 2}, {3.5, 2}}}},
      {'a',
       {{{0.5, 2}, {3, 2}, {3.5, 2.5}, {3.5, 6}},
        {{3.5, 3.5}, {1, 3.5}, {0, 4.5}, {0, 5}, {1, 6}, {2.5, 6}, {3.5, 5}}}},
      {'p', {{{0, 7.5}, {0, 2}, {3, 2}, {4, 3}, {4, 5}, {3, 6}, {0, 6}}}},
      {'h', {{{0, 0}, {0, 6}}, {{0, 3}, {1, 2}, {3, 2}, {4, 3}, {4, 6}}}},
  };
  return table;
}

}  // namespace

const GlyphStrokes& glyph_strokes(char c) {
  static const GlyphStrokes box = {{{0, 0}, {4, 0}, {4, 6}, {0, 6}, {0, 0}}};
  const auto& t = font();
  auto it = t.find(c);
  return it == t.end() ? box : it->second;
}

}  // namespace gvb
