#include "gvb/render.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <set>
#include <variant>

#include "gvb/errors.hpp"
#include "gvb/glyphs.hpp"
#include "gvb/oracles.hpp"
#include "gvb/rng.hpp"

namespace gvb {

std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb rgb_from_hex(const std::string& hex) {
  unsigned r = 0, g = 0, b = 0;
  if (hex.size() != 7 || hex[0] != '#' ||
      !std::all_of(hex.begin() + 1, hex.end(), [](unsigned char ch) { return std::isxdigit(ch); }) ||
      std::sscanf(hex.c_str() + 1, "%2x%2x%2x", &r, &g, &b) != 3)
    throw ParameterError("bad colour: " + hex);
  return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
}

double luminance(Rgb c) { return (0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b) / 255.0; }

std::vector<Rgb> node_colors(const ColorScheme& scheme, int node_count) {
  std::vector<Rgb> out(static_cast<std::size_t>(node_count), scheme.color);
  if (scheme.kind == ColorScheme::Kind::uniform) return out;
  Rng rng(scheme.seed);
  for (auto& c : out) {
    do {
      c = {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
           static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
           static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
    } while (luminance(c) > kPaletteLuminanceCap);
  }
  return out;
}

void validate(const StyleSpec& s) {
  if (s.node_radius_px <= 0) throw ParameterError("style: node radius must be positive");
  if (s.edge_width_px <= 0) throw ParameterError("style: edge width must be positive");
  if (!(s.overlap_severity >= 0.0 && s.overlap_severity <= 1.0))
    throw ParameterError("style: overlap severity must lie in [0,1]");
}

nlohmann::json to_json(const StyleSpec& s) {
  nlohmann::json cs;
  if (s.color_scheme.kind == ColorScheme::Kind::uniform) {
    cs = {{"kind", "uniform"}, {"color", to_hex(s.color_scheme.color)}};
  } else {
    cs = {{"kind", "random_palette"}, {"seed", s.color_scheme.seed}};
  }
  return {{"layout", std::string(to_string(s.layout))},
          {"show_labels", s.show_labels},
          {"directed_arrows", s.directed_arrows},
          {"color_scheme", cs},
          {"edge_color", to_hex(s.edge_color)},
          {"node_radius_px", s.node_radius_px},
          {"edge_width_px", s.edge_width_px},
          {"weight_labels", s.weight_labels},
          {"overlap_severity", s.overlap_severity}};
}

StyleSpec style_from_json(const nlohmann::json& j) {
  try {
    StyleSpec s;
    s.layout = layout_kind_from_string(j.at("layout").get<std::string>());
    s.show_labels = j.at("show_labels").get<bool>();
    s.directed_arrows = j.at("directed_arrows").get<bool>();
    const auto& cs = j.at("color_scheme");
    const auto kind = cs.at("kind").get<std::string>();
    if (kind == "uniform") {
      s.color_scheme = ColorScheme::uniform(rgb_from_hex(cs.at("color").get<std::string>()));
    } else if (kind == "random_palette") {
      s.color_scheme = ColorScheme::random_palette(cs.at("seed").get<std::uint64_t>());
    } else {
      throw ParameterError("style: unknown colour scheme " + kind);
    }
    s.edge_color = rgb_from_hex(j.value("edge_color", std::string("#333333")));
    s.node_radius_px = j.at("node_radius_px").get<int>();
    s.edge_width_px = j.at("edge_width_px").get<int>();
    s.weight_labels = j.at("weight_labels").get<bool>();
    s.overlap_severity = j.at("overlap_severity").get<double>();
    validate(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("style json: ") + e.what());
  }
}

namespace {

constexpr double kPairTitleSpace = 50.0;
constexpr double kPairSideMargin = 20.0;
constexpr double kPairBottomMargin = 20.0;

struct Frame {
  double x0, y0, span;

  Point map(Point p) const { return {x0 + p.x * span, y0 + (1.0 - p.y) * span}; }
};

Frame single_frame(int width, int height) {
  const double span = std::min(width, height) - 2.0 * kCanvasMargin;
  return {(width - span) / 2.0, (height - span) / 2.0, span};
}

Frame pair_frame(int width, int height, int panel) {
  const double panel_w = width / 2.0;
  const double span = std::min(panel_w - 2.0 * kPairSideMargin,
                               height - kPairTitleSpace - kPairBottomMargin);
  const double free_h = height - kPairTitleSpace - kPairBottomMargin;
  return {panel * panel_w + (panel_w - span) / 2.0, kPairTitleSpace + (free_h - span) / 2.0, span};
}

double snap(double v) { return std::round(v * 100.0) / 100.0; }
Point snap(Point p) { return {snap(p.x), snap(p.y)}; }

struct CircleOp {
  Point c;
  double r;
  Rgb fill, stroke;
  double stroke_width;
};
struct LineOp {
  Point a, b;
  double width;
  Rgb color;
};
struct PolygonOp {
  std::vector<Point> pts;
  Rgb fill;
};
struct TextOp {
  std::string cls, text;
  std::vector<std::vector<Point>> strokes;
  double stroke_width;
  Rgb color;
  bool has_box;
  Point box_min, box_max;
};
using Op = std::variant<CircleOp, LineOp, PolygonOp, TextOp>;

class Scene {
 public:
  Scene(int w, int h) : width_(w), height_(h) {}

  void circle(Point c, double r, Rgb fill, Rgb stroke, double sw) {
    ops_.push_back(CircleOp{snap(c), snap(r), fill, stroke, snap(sw)});
  }
  void line(Point a, Point b, double w, Rgb color) {
    ops_.push_back(LineOp{snap(a), snap(b), snap(w), color});
  }
  void polygon(std::vector<Point> pts, Rgb fill) {
    for (auto& p : pts) p = snap(p);
    ops_.push_back(PolygonOp{std::move(pts), fill});
  }
  void text(const std::string& cls, const std::string& s, Point centre, double height, Rgb color,
            bool boxed) {
    const double scale = height / kGlyphCellHeight;
    const double total_w =
        s.empty() ? 0.0 : ((s.size() - 1) * kGlyphAdvance + kGlyphCellWidth) * scale;
    const double x0 = centre.x - total_w / 2.0, y0 = centre.y - height / 2.0;
    TextOp op{cls, s, {}, snap(std::max(1.2, height / 7.0)), color, boxed, {}, {}};
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (const auto& stroke : glyph_strokes(s[i])) {
        std::vector<Point> pts;
        for (const auto& p : stroke)
          pts.push_back(snap(Point{x0 + (i * kGlyphAdvance + p.x) * scale, y0 + p.y * scale}));
        op.strokes.push_back(std::move(pts));
      }
    }
    const double pad = 0.3 * height;
    op.box_min = snap(Point{x0 - pad, y0 - pad});
    op.box_max = snap(Point{x0 + total_w + pad, y0 + height + pad});
    ops_.push_back(std::move(op));
  }

  std::string svg() const;
  Raster rasterize() const;

 private:
  int width_, height_;
  std::vector<Op> ops_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Scene::svg() const {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_) +
         "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " + std::to_string(width_) +
         " " + std::to_string(height_) + "\">\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + std::to_string(width_) +
         "\" height=\"" + std::to_string(height_) + "\" fill=\"#ffffff\"/>\n";
  for (const auto& op : ops_) {
    if (const auto* c = std::get_if<CircleOp>(&op)) {
      out += "<circle cx=\"" + fmt(c->c.x) + "\" cy=\"" + fmt(c->c.y) + "\" r=\"" + fmt(c->r) +
             "\" fill=\"" + to_hex(c->fill) + "\" stroke=\"" + to_hex(c->stroke) +
             "\" stroke-width=\"" + fmt(c->stroke_width) + "\"/>\n";
    } else if (const auto* l = std::get_if<LineOp>(&op)) {
      out += "<line x1=\"" + fmt(l->a.x) + "\" y1=\"" + fmt(l->a.y) + "\" x2=\"" + fmt(l->b.x) +
             "\" y2=\"" + fmt(l->b.y) + "\" stroke=\"" + to_hex(l->color) + "\" stroke-width=\"" +
             fmt(l->width) + "\" stroke-linecap=\"round\"/>\n";
    } else if (const auto* p = std::get_if<PolygonOp>(&op)) {
      out += "<polygon points=\"";
      for (std::size_t i = 0; i < p->pts.size(); ++i) {
        if (i) out += ' ';
        out += fmt(p->pts[i].x) + "," + fmt(p->pts[i].y);
      }
      out += "\" fill=\"" + to_hex(p->fill) + "\"/>\n";
    } else if (const auto* t = std::get_if<TextOp>(&op)) {
      out += "<g class=\"" + t->cls + "\" data-text=\"" + t->text + "\">";
      if (t->has_box) {
        out += "<rect x=\"" + fmt(t->box_min.x) + "\" y=\"" + fmt(t->box_min.y) + "\" width=\"" +
               fmt(t->box_max.x - t->box_min.x) + "\" height=\"" +
               fmt(t->box_max.y - t->box_min.y) + "\" fill=\"#ffffff\"/>";
      }
      if (!t->strokes.empty()) {
        out += "<path d=\"";
        for (const auto& s : t->strokes) {
          for (std::size_t i = 0; i < s.size(); ++i)
            out += (i ? " L" : "M") + fmt(s[i].x) + " " + fmt(s[i].y);
          out += ' ';
        }
        out.pop_back();
        out += "\" fill=\"none\" stroke=\"" + to_hex(t->color) + "\" stroke-width=\"" +
               fmt(t->stroke_width) + "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>";
      }
      out += "</g>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

class Canvas {
 public:
  Canvas(int w, int h) : r_{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3, 255)} {}

  void blend(int x, int y, Rgb c, double cov) {
    if (cov <= 0.0 || x < 0 || y < 0 || x >= r_.width || y >= r_.height) return;
    cov = std::min(cov, 1.0);
    auto* px = &r_.rgb[(static_cast<std::size_t>(y) * r_.width + x) * 3];
    const std::uint8_t comp[3] = {c.r, c.g, c.b};
    for (int k = 0; k < 3; ++k)
      px[k] = static_cast<std::uint8_t>(std::lround(px[k] * (1.0 - cov) + comp[k] * cov));
  }

  void disc(Point c, double r, Rgb color) {
    const int y0 = static_cast<int>(std::floor(c.y - r - 1)), y1 = static_cast<int>(std::ceil(c.y + r + 1));
    const int x0 = static_cast<int>(std::floor(c.x - r - 1)), x1 = static_cast<int>(std::ceil(c.x + r + 1));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double d = std::hypot(x + 0.5 - c.x, y + 0.5 - c.y);
        blend(x, y, color, r + 0.5 - d);
      }
  }

  void ring(Point c, double r, double width, Rgb color) {
    const double outer = r + width / 2.0;
    const int y0 = static_cast<int>(std::floor(c.y - outer - 1)), y1 = static_cast<int>(std::ceil(c.y + outer + 1));
    const int x0 = static_cast<int>(std::floor(c.x - outer - 1)), x1 = static_cast<int>(std::ceil(c.x + outer + 1));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double d = std::hypot(x + 0.5 - c.x, y + 0.5 - c.y);
        blend(x, y, color, width / 2.0 + 0.5 - std::abs(d - r));
      }
  }

  // Round-capped segment; visits only rows/columns the capsule can touch.
  void capsule(Point a, Point b, double width, Rgb color) {
    const double rad = width / 2.0, reach = rad + 1.0;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    const int y0 = static_cast<int>(std::floor(std::min(a.y, b.y) - reach));
    const int y1 = static_cast<int>(std::ceil(std::max(a.y, b.y) + reach));
    for (int y = y0; y <= y1; ++y) {
      const double yc = y + 0.5;
      double t0 = 0.0, t1 = 1.0;
      if (std::abs(dy) > 1e-9) {
        t0 = (yc - reach - a.y) / dy;
        t1 = (yc + reach - a.y) / dy;
        if (t0 > t1) std::swap(t0, t1);
        t0 = std::clamp(t0, 0.0, 1.0);
        t1 = std::clamp(t1, 0.0, 1.0);
      }
      const double xa = a.x + t0 * dx, xb = a.x + t1 * dx;
      const int x0 = static_cast<int>(std::floor(std::min(xa, xb) - reach));
      const int x1 = static_cast<int>(std::ceil(std::max(xa, xb) + reach));
      for (int x = x0; x <= x1; ++x) {
        const double px = x + 0.5 - a.x, py = yc - a.y;
        double t = len2 > 0 ? (px * dx + py * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double d = std::hypot(px - t * dx, py - t * dy);
        blend(x, y, color, rad + 0.5 - d);
      }
    }
  }

  // Convex polygon, either winding.
  void convex(const std::vector<Point>& pts, Rgb color) {
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      const auto& q = pts[(i + 1) % pts.size()];
      area += p.x * q.y - q.x * p.y;
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double orient = area >= 0 ? 1.0 : -1.0;
    for (int y = static_cast<int>(std::floor(ymin)) - 1; y <= static_cast<int>(std::ceil(ymax)); ++y)
      for (int x = static_cast<int>(std::floor(xmin)) - 1; x <= static_cast<int>(std::ceil(xmax)); ++x) {
        double sd = 1e9;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const auto& p = pts[i];
          const auto& q = pts[(i + 1) % pts.size()];
          const double ex = q.x - p.x, ey = q.y - p.y;
          const double len = std::hypot(ex, ey);
          if (len == 0) continue;
          sd = std::min(sd, orient * (ex * (y + 0.5 - p.y) - ey * (x + 0.5 - p.x)) / len);
        }
        blend(x, y, color, sd + 0.5);
      }
  }

  Raster take() { return std::move(r_); }

 private:
  Raster r_;
};

Raster Scene::rasterize() const {
  Canvas canvas(width_, height_);
  for (const auto& op : ops_) {
    if (const auto* c = std::get_if<CircleOp>(&op)) {
      canvas.disc(c->c, c->r, c->fill);
      if (c->stroke_width > 0) canvas.ring(c->c, c->r, c->stroke_width, c->stroke);
    } else if (const auto* l = std::get_if<LineOp>(&op)) {
      canvas.capsule(l->a, l->b, l->width, l->color);
    } else if (const auto* p = std::get_if<PolygonOp>(&op)) {
      canvas.convex(p->pts, p->fill);
    } else if (const auto* t = std::get_if<TextOp>(&op)) {
      if (t->has_box)
        canvas.convex({t->box_min, {t->box_max.x, t->box_min.y}, t->box_max, {t->box_min.x, t->box_max.y}},
                      Rgb{255, 255, 255});
      for (const auto& s : t->strokes) {
        if (s.size() == 1) canvas.capsule(s[0], s[0], t->stroke_width, t->color);
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
          canvas.capsule(s[i], s[i + 1], t->stroke_width, t->color);
      }
    }
  }
  return canvas.take();
}

void draw_graph(Scene& scene, const Graph& g, const Positions& pos, const StyleSpec& style,
                const Frame& frame) {
  if (static_cast<int>(pos.size()) != g.node_count())
    throw ParameterError("render: positions do not match node count");
  validate(style);
  std::vector<Point> px(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) px[i] = frame.map(pos[i]);
  const double r = style.node_radius_px;
  const bool arrows = style.directed_arrows && g.directed();

  // Reciprocal directed pairs share one line and get an arrowhead each.
  std::set<UndirectedEdge> drawn;
  for (const auto& e : g.edges()) {
    const UndirectedEdge key{std::min(e.u, e.v), std::max(e.u, e.v)};
    const Point a = px[e.u], b = px[e.v];
    const double dx = b.x - a.x, dy = b.y - a.y, len = std::hypot(dx, dy);
    if (drawn.insert(key).second) scene.line(a, b, style.edge_width_px, style.edge_color);
    if (arrows && len > r + kArrowLength) {
      const double ux = dx / len, uy = dy / len;
      const Point tip{b.x - ux * r, b.y - uy * r};
      const Point base{tip.x - ux * kArrowLength, tip.y - uy * kArrowLength};
      scene.polygon({tip,
                     {base.x - uy * kArrowHalfWidth, base.y + ux * kArrowHalfWidth},
                     {base.x + uy * kArrowHalfWidth, base.y - ux * kArrowHalfWidth}},
                    style.edge_color);
    }
  }
  const auto colors = node_colors(style.color_scheme, g.node_count());
  for (int v = 0; v < g.node_count(); ++v) {
    scene.circle(px[v], r, colors[v], Rgb{0x22, 0x22, 0x22}, 1.0);
    if (style.show_labels) {
      const Rgb ink = luminance(colors[v]) > 0.5 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
      scene.text("label", g.label_of(v), px[v], std::max(6.0, 0.8 * r), ink, false);
    }
  }
  if (style.weight_labels) {
    for (const auto& e : g.edges()) {
      if (!e.weight) continue;
      const Point mid{(px[e.u].x + px[e.v].x) / 2.0, (px[e.u].y + px[e.v].y) / 2.0};
      scene.text("weight", std::to_string(*e.weight), mid, 11.0, Rgb{0xb0, 0x1c, 0x1c}, true);
    }
  }
}

RenderedImage finish(const Scene& scene) {
  RenderedImage img;
  img.svg = scene.svg();
  img.raster = scene.rasterize();
  img.content_hash = raster_hash(img.raster);
  return img;
}

void check_canvas(int width, int height) {
  if (width <= 0 || height <= 0) throw ParameterError("render: canvas must have positive size");
}

}  // namespace

double node_diameter_unit(const StyleSpec& s, bool pair) {
  const Frame f = pair ? pair_frame(kCanvasSize, kCanvasSize, 0) : single_frame(kCanvasSize, kCanvasSize);
  return 2.0 * s.node_radius_px / f.span;
}

std::string raster_hash(const Raster& r) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  for (int shift = 0; shift < 32; shift += 8) feed(static_cast<std::uint8_t>(r.width >> shift));
  for (int shift = 0; shift < 32; shift += 8) feed(static_cast<std::uint8_t>(r.height >> shift));
  for (auto b : r.rgb) feed(b);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RenderedImage render_graph(const Graph& g, const Positions& pos, const StyleSpec& style, int width,
                           int height) {
  check_canvas(width, height);
  Scene scene(width, height);
  draw_graph(scene, g, pos, style, single_frame(width, height));
  return finish(scene);
}

RenderedImage render_pair(const Graph& g1, const Positions& p1, const StyleSpec& s1,
                          const Graph& g2, const Positions& p2, const StyleSpec& s2, int width,
                          int height) {
  check_canvas(width, height);
  if (!g1.labels() || !g2.labels()) throw UnsupportedInput("render_pair: graphs must be labeled");
  Scene scene(width, height);
  const Rgb title{0x11, 0x11, 0x11};
  scene.text("title", "Graph 1", {width / 4.0, 24.0}, 16.0, title, false);
  scene.text("title", "Graph 2", {3.0 * width / 4.0, 24.0}, 16.0, title, false);
  draw_graph(scene, g1, p1, s1, pair_frame(width, height, 0));
  draw_graph(scene, g2, p2, s2, pair_frame(width, height, 1));
  return finish(scene);
}

}  // namespace gvb
