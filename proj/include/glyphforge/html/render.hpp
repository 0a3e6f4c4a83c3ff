#pragma once

#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "glyphforge/core.hpp"
#include "glyphforge/glyph.hpp"
#include "glyphforge/html/dom.hpp"
#include "glyphforge/image.hpp"

namespace glyphforge::html {

inline constexpr int kDefaultPageWidth = 512;
inline constexpr int kDefaultPageHeight = 512;
inline constexpr int kDefaultImageSize = 64;
inline constexpr int kRootFontPx = 16;

// Inherited text properties.
struct TextProps {
  int font_px = kRootFontPx;
  Rgb color{0, 0, 0};
  bool bold = false;
  glyph::Align align = glyph::Align::left;
};

inline int font_scale(int font_px) { return std::max(1, static_cast<int>(std::lround(font_px / 8.0))); }
inline int line_height(int scale) { return 10 * scale; }

inline int default_font_px(std::string_view tag, int inherited) {
  if (tag == "h1") return 32;
  if (tag == "h2") return 24;
  if (tag == "h3" || tag == "p") return 16;
  return inherited;
}

inline int default_margin(std::string_view tag) {
  return (tag == "p" || tag == "h1" || tag == "h2" || tag == "h3") ? 4 : 0;
}

inline int style_int(const Node& n, std::string_view key, int fallback) {
  const auto* v = n.style_value(key);
  if (!v) return fallback;
  return parse_length(*v).value_or(fallback);
}

inline TextProps inherit(const Node& n, const TextProps& parent) {
  TextProps p = parent;
  p.font_px = style_int(n, "font-size", default_font_px(n.tag, parent.font_px));
  if (const auto* c = n.style_value("color"))
    if (auto rgb = parse_color(*c)) p.color = *rgb;
  if (n.tag == "h1" || n.tag == "h2" || n.tag == "h3") p.bold = true;
  if (const auto* w = n.style_value("font-weight")) p.bold = *w == "bold";
  if (const auto* a = n.style_value("text-align"))
    p.align = *a == "center" ? glyph::Align::center : *a == "right" ? glyph::Align::right : glyph::Align::left;
  return p;
}

inline PixelBox content_box(const Node& n, const PixelBox& box) {
  const int pad = style_int(n, "padding", 0);
  return {box.x + pad, box.y + pad, std::max(0, box.w - 2 * pad), std::max(0, box.h - 2 * pad)};
}

struct TextMetrics {
  int scale = 1;
  std::vector<glyph::TextLine> lines;
  int height = 0;
  bool hard_broken = false;
};

inline TextMetrics measure_text(std::u32string_view text, int content_w, int font_px) {
  TextMetrics m;
  m.scale = font_scale(font_px);
  const int cell = glyph::GlyphFont::kCell * m.scale;
  const auto capacity = static_cast<std::size_t>(std::max(1, content_w / cell));
  auto soft = glyph::detail::wrap(text, capacity, false);
  if (soft) {
    m.lines = std::move(*soft);
  } else {
    m.lines = *glyph::detail::wrap(text, capacity, true);
    m.hard_broken = true;
  }
  m.height = static_cast<int>(m.lines.size()) * line_height(m.scale);
  return m;
}

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

namespace detail {

// Lays out `n` with its outer top-left at (x, y) and returns the y where the
// next sibling starts.
inline int lay(Node& n, int x, int y, int avail_w, const TextProps& parent_props) {
  const TextProps props = inherit(n, parent_props);
  const int margin = style_int(n, "margin", default_margin(n.tag));
  if (!n.box) {
    PixelBox b;
    b.x = x + margin;
    b.y = y + margin;
    const int def_w = n.tag == "img" ? kDefaultImageSize : std::max(0, avail_w - 2 * margin);
    b.w = std::max(0, style_int(n, "width", def_w));
    const int pad = style_int(n, "padding", 0);
    const int inner_w = std::max(0, b.w - 2 * pad);
    int content_h = 0;
    if (n.tag == "img") {
      content_h = kDefaultImageSize;
    } else if (!n.text.empty()) {
      content_h = measure_text(utf8_decode(n.text), inner_w, props.font_px).height;
    } else {
      int cy = b.y + pad;
      for (auto& c : n.children) cy = lay(c, b.x + pad, cy, inner_w, props);
      content_h = cy - (b.y + pad);
    }
    const int natural_h = n.tag == "img" ? content_h : content_h + 2 * pad;
    b.h = std::max(0, style_int(n, "height", natural_h));
    n.box = b;
  } else {
    const PixelBox inner = content_box(n, *n.box);
    int cy = inner.y;
    for (auto& c : n.children) {
      if (c.box) {
        cy = std::max(cy, c.box->y + c.box->h + style_int(c, "margin", default_margin(c.tag)));
        lay(c, c.box->x, c.box->y, c.box->w, props);
      } else {
        cy = lay(c, inner.x, cy, inner.w, props);
      }
    }
  }
  return n.box->y + n.box->h + margin;
}

}  // namespace detail

inline PixelBox page_box(const DocTree& doc) {
  if (doc.root.box) return *doc.root.box;
  return {0, 0, style_int(doc.root, "width", kDefaultPageWidth), style_int(doc.root, "height", kDefaultPageHeight)};
}

// Assigns a frozen box to every node that lacks one. Nodes that already carry
// a box keep it, so text edits never move their neighbours.
inline void freeze_layout(DocTree& doc) {
  const PixelBox page = page_box(doc);
  if (page.w <= 0 || page.h <= 0 || page.w > 8192 || page.h > 8192)
    fail(ErrorKind::config, "render", "page size must be within 1..8192 pixels");
  doc.root.box = page;
  TextProps root_props;
  const TextProps props = inherit(doc.root, root_props);
  Node& body = doc.body();
  if (!body.box) body.box = page;
  detail::lay(body, body.box->x, body.box->y, body.box->w, props);
}

// ---------------------------------------------------------------------------
// Paint
// ---------------------------------------------------------------------------

struct Rendered {
  Image image;
  std::map<int, PixelBox> geometry;
  std::set<int> overflowing;  // text nodes whose text does not fit their box
};

inline void paint_placeholder(Image& img, const PixelBox& area, const PixelBox& box, std::string_view url) {
  const auto h = fnv1a64(url);
  const Rgb light = {static_cast<std::uint8_t>(160 + (h & 63)), static_cast<std::uint8_t>(160 + ((h >> 8) & 63)),
                     static_cast<std::uint8_t>(160 + ((h >> 16) & 63))};
  const Rgb dark = {static_cast<std::uint8_t>(light[0] - 96), static_cast<std::uint8_t>(light[1] - 96),
                    static_cast<std::uint8_t>(light[2] - 96)};
  for (int y = area.y; y < area.y + area.h; ++y)
    for (int x = area.x; x < area.x + area.w; ++x) {
      const bool odd = (((x - box.x) / 8) + ((y - box.y) / 8)) & 1;
      const Rgb& c = odd ? dark : light;
      auto* p = img.at(x, y);
      p[0] = c[0];
      p[1] = c[1];
      p[2] = c[2];
    }
}

namespace detail {

inline void paint_node(const Node& n, const PixelBox& clip, const TextProps& parent_props, Rendered& out) {
  if (!n.box) fail(ErrorKind::consistency, "render", "node " + std::to_string(n.id) + " has no frozen box");
  const TextProps props = inherit(n, parent_props);
  const PixelBox box = *n.box;
  out.geometry[n.id] = box;
  const PixelBox visible = box.intersect(clip);
  if (const auto* bg = n.style_value("background"); bg && *bg != "transparent")
    if (auto rgb = parse_color(*bg)) fill_box(out.image, visible, *rgb);
  if (n.tag == "img") {
    const auto it = n.attrs.find("src");
    paint_placeholder(out.image, visible, box, it == n.attrs.end() ? std::string_view{} : std::string_view(it->second));
    return;
  }
  if (!n.text.empty()) {
    const PixelBox inner = content_box(n, box);
    const auto text = utf8_decode(n.text);
    const auto m = measure_text(text, inner.w, props.font_px);
    if (m.hard_broken || m.height > inner.h) out.overflowing.insert(n.id);
    const int cell = glyph::GlyphFont::kCell * m.scale;
    const int lh = line_height(m.scale);
    const glyph::TextStyle style{props.color, props.bold, props.align};
    const PixelBox area = inner.intersect(visible);
    for (std::size_t k = 0; k < m.lines.size(); ++k) {
      const auto& line = m.lines[k];
      const int line_w = static_cast<int>(line.length()) * cell;
      int x = inner.x;
      if (props.align == glyph::Align::center) x += (inner.w - line_w) / 2;
      if (props.align == glyph::Align::right) x += inner.w - line_w;
      const int y = inner.y + static_cast<int>(k) * lh + m.scale;
      for (std::size_t i = line.begin; i < line.end; ++i) {
        glyph::draw_glyph(out.image, glyph::GlyphFont::builtin(), text[i], x, y, m.scale, area, style);
        x += cell;
      }
    }
  }
  for (const auto& c : n.children) paint_node(c, visible, props, out);
}

}  // namespace detail

// Paints a tree whose geometry is already frozen.
inline Rendered paint(const DocTree& doc) {
  const PixelBox page = page_box(doc);
  Rendered out;
  out.image = Image(page.w, page.h, 3, 255);
  TextProps root_props;
  const TextProps props = inherit(doc.root, root_props);
  out.geometry[doc.root.id] = page;
  if (const auto* bg = doc.root.style_value("background"); bg && *bg != "transparent")
    if (auto rgb = parse_color(*bg)) fill_box(out.image, page, *rgb);
  for (const auto& c : doc.root.children) detail::paint_node(c, page, props, out);
  return out;
}

// Freezes geometry (first call) and paints.
inline Rendered render(DocTree& doc) {
  freeze_layout(doc);
  return paint(doc);
}

// ---------------------------------------------------------------------------
// Content extraction
// ---------------------------------------------------------------------------

struct TextEntry {
  int id = -1;
  std::string text;
  PixelBox box;
};

struct ImageEntry {
  int id = -1;
  std::string url;
  PixelBox box;
  bool valid = false;
};

struct ContentRecord {
  std::vector<TextEntry> texts;
  std::vector<ImageEntry> images;
};

inline bool is_valid_url(std::string_view url) {
  static const std::regex pattern(R"(^https?://[A-Za-z0-9]([A-Za-z0-9.-]*[A-Za-z0-9])?(:[0-9]{1,5})?(/[^\s]*)?$)");
  return std::regex_match(url.begin(), url.end(), pattern);
}

inline ContentRecord extract(const DocTree& doc) {
  ContentRecord rec;
  doc.for_each([&](const Node& n) {
    if (!n.box) fail(ErrorKind::consistency, "extract", "node " + std::to_string(n.id) + " has no frozen box");
    if (n.tag == "img") {
      const auto it = n.attrs.find("src");
      const std::string url = it == n.attrs.end() ? "" : it->second;
      rec.images.push_back({n.id, url, *n.box, is_valid_url(url)});
    } else if (!n.text.empty()) {
      rec.texts.push_back({n.id, n.text, *n.box});
    }
  });
  return rec;
}

}  // namespace glyphforge::html
