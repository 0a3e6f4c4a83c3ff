#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/detail/font8x8_data.hpp"
#include "glyphforge/image.hpp"

namespace glyphforge::glyph {

// ---------------------------------------------------------------------------
// Bitmap font
// ---------------------------------------------------------------------------

// Fixed 8x8 cell font. Rows run top to bottom; bit 0 of each row byte is the
// leftmost pixel. Code points without a glyph draw as a hollow box.
class GlyphFont {
 public:
  static constexpr int kCell = 8;
  using Bitmap = std::array<std::uint8_t, 8>;
  static constexpr Bitmap kReplacement = {0x7E, 0x42, 0x42, 0x42, 0x42, 0x42, 0x7E, 0x00};

  GlyphFont() = default;

  static const GlyphFont& builtin() {
    static const GlyphFont font = [] {
      GlyphFont f;
      for (const auto& g : detail::kFont8x8) f.table_[g.code_point] = g.rows;
      return f;
    }();
    return font;
  }

  // Lines of "XXXX:HHHHHHHHHHHHHHHH" (code point hex, 8 row bytes hex); '#'
  // starts a comment. Later entries override earlier ones.
  void merge_hex(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      const auto colon = line.find(':');
      if (colon == std::string_view::npos || line.size() - colon - 1 != 16)
        fail(ErrorKind::parse, "glyph_font", "malformed font line " + std::to_string(line_no));
      const auto cp = static_cast<char32_t>(std::stoul(std::string(line.substr(0, colon)), nullptr, 16));
      Bitmap bm{};
      for (std::size_t i = 0; i < 8; ++i)
        bm[i] = static_cast<std::uint8_t>(std::stoul(std::string(line.substr(colon + 1 + 2 * i, 2)), nullptr, 16));
      table_[cp] = bm;
    }
  }

  static GlyphFont from_hex(std::string_view text) {
    GlyphFont f;
    f.merge_hex(text);
    return f;
  }

  bool covers(char32_t cp) const { return table_.count(cp) != 0; }
  const Bitmap& glyph(char32_t cp) const {
    auto it = table_.find(cp);
    return it == table_.end() ? kReplacement : it->second;
  }
  bool pixel(char32_t cp, int x, int y) const { return (glyph(cp)[static_cast<std::size_t>(y)] >> x) & 1; }
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::map<char32_t, Bitmap> table_;
};

// ---------------------------------------------------------------------------
// Text fitting
// ---------------------------------------------------------------------------

struct TextLine {
  std::size_t begin = 0;  // code point index, inclusive
  std::size_t end = 0;    // exclusive
  std::size_t length() const noexcept { return end - begin; }
};

struct TextFit {
  int scale = 1;
  std::vector<std::size_t> line_breaks;  // start index of every line after the first
  std::vector<TextLine> lines;
  int anchor_x = 0;  // block offset inside the box
  int anchor_y = 0;
  int block_w = 0;
  int block_h = 0;
  bool clipped = false;
};

namespace detail {

inline bool is_space(char32_t c) { return c == U' ' || c == U'\t' || c == U'\n'; }

// Greedy word wrap to at most `capacity` glyphs per line. Without hard
// breaking, a word longer than a line fails the wrap.
inline std::optional<std::vector<TextLine>> wrap(std::u32string_view text, std::size_t capacity, bool hard_break) {
  std::vector<TextLine> lines;
  std::optional<TextLine> current;
  std::size_t i = 0;
  auto flush = [&] {
    if (current) lines.push_back(*current);
    current.reset();
  };
  while (i < text.size()) {
    if (text[i] == U'\n') {
      flush();
      ++i;
      continue;
    }
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    TextLine word{i, j};
    if (word.length() > capacity) {
      if (!hard_break) return std::nullopt;
      flush();
      for (std::size_t k = word.begin; k < word.end; k += capacity)
        lines.push_back({k, std::min(word.end, k + capacity)});
      i = j;
      continue;
    }
    if (current && word.end - current->begin <= capacity) {
      current->end = word.end;
    } else {
      flush();
      current = word;
    }
    i = j;
  }
  flush();
  return lines;
}

}  // namespace detail

// Largest integer scale of the 8 px cell at which the greedily wrapped text
// fits the box; the block is centered. If scale 1 still overflows, words are
// hard-broken, the block is pinned to the top-left and the result is clipped.
inline TextFit fit_text(std::u32string_view text, int box_w, int box_h) {
  TextFit fit;
  const int cell = GlyphFont::kCell;
  const int max_scale = std::max(1, std::min(box_w, box_h) / cell);
  auto finish = [&](int scale, std::vector<TextLine> lines, bool clipped) {
    fit.scale = scale;
    fit.lines = std::move(lines);
    std::size_t widest = 0;
    for (std::size_t k = 0; k < fit.lines.size(); ++k) {
      widest = std::max(widest, fit.lines[k].length());
      if (k > 0) fit.line_breaks.push_back(fit.lines[k].begin);
    }
    fit.block_w = static_cast<int>(widest) * cell * scale;
    fit.block_h = static_cast<int>(fit.lines.size()) * cell * scale;
    fit.clipped = clipped;
    fit.anchor_x = fit.block_w <= box_w ? (box_w - fit.block_w) / 2 : 0;
    fit.anchor_y = fit.block_h <= box_h ? (box_h - fit.block_h) / 2 : 0;
    return fit;
  };
  for (int s = max_scale; s >= 1; --s) {
    const int capacity = box_w / (cell * s);
    if (capacity <= 0) continue;
    auto lines = detail::wrap(text, static_cast<std::size_t>(capacity), false);
    if (!lines) continue;
    if (static_cast<int>(lines->size()) * cell * s <= box_h) return finish(s, std::move(*lines), false);
  }
  const auto capacity = static_cast<std::size_t>(std::max(1, box_w / cell));
  return finish(1, *detail::wrap(text, capacity, true), true);
}

inline TextFit fit_text(std::string_view utf8, int box_w, int box_h) { return fit_text(utf8_decode(utf8), box_w, box_h); }

enum class Align { left, center, right };

struct TextStyle {
  Rgb color{255, 255, 255};
  bool bold = false;
  Align align = Align::center;
};

// Paints one glyph at (x, y) with the given scale, clipped to `clip`.
inline void draw_glyph(Image& img, const GlyphFont& font, char32_t cp, int x, int y, int scale, const PixelBox& clip,
                       const TextStyle& style) {
  const PixelBox bounds = clip.intersect({0, 0, img.width, img.height});
  const auto& bm = font.glyph(cp);
  for (int gy = 0; gy < GlyphFont::kCell; ++gy)
    for (int gx = 0; gx < GlyphFont::kCell; ++gx) {
      bool on = (bm[static_cast<std::size_t>(gy)] >> gx) & 1;
      if (!on && style.bold && gx > 0) on = (bm[static_cast<std::size_t>(gy)] >> (gx - 1)) & 1;
      if (!on) continue;
      for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx) {
          const int px = x + gx * scale + dx, py = y + gy * scale + dy;
          if (!bounds.contains(px, py)) continue;
          auto* p = img.at(px, py);
          for (int c = 0; c < img.channels; ++c) p[c] = style.color[static_cast<std::size_t>(c)];
        }
    }
}

// Draws `text` laid out by `fit` inside `box`; nothing escapes box ∩ clip.
inline void draw_text(Image& img, const GlyphFont& font, std::u32string_view text, const TextFit& fit,
                      const PixelBox& box, const PixelBox& clip, const TextStyle& style) {
  const PixelBox area = box.intersect(clip);
  const int cell = GlyphFont::kCell * fit.scale;
  for (std::size_t k = 0; k < fit.lines.size(); ++k) {
    const auto& line = fit.lines[k];
    const int line_w = static_cast<int>(line.length()) * cell;
    int x = box.x + fit.anchor_x;
    if (style.align == Align::center && line_w <= fit.block_w) x += (fit.block_w - line_w) / 2;
    if (style.align == Align::right && line_w <= fit.block_w) x += fit.block_w - line_w;
    const int y = box.y + fit.anchor_y + static_cast<int>(k) * cell;
    for (std::size_t i = line.begin; i < line.end; ++i) {
      draw_glyph(img, font, text[i], x, y, fit.scale, area, style);
      x += cell;
    }
  }
}

// ---------------------------------------------------------------------------
// Regions and the glyph prior canvas
// ---------------------------------------------------------------------------

// Normalized (x0, y0) top-left and (x1, y1) bottom-right corners in [0,1].
struct NormBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool operator==(const NormBox&) const = default;
};

enum class RegionRole { original, target };

inline std::string_view to_string(RegionRole role) { return role == RegionRole::original ? "original" : "target"; }

struct TextRegion {
  NormBox bbox;
  std::string text;
  RegionRole role = RegionRole::target;
  bool operator==(const TextRegion&) const = default;
};

// Returns an empty string when valid, otherwise the reason.
inline std::string region_problem(const TextRegion& r) {
  const auto& b = r.bbox;
  for (double v : {b.x0, b.y0, b.x1, b.y1})
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) return "coordinates outside [0,1]";
  if (!(b.x0 < b.x1)) return "x0 >= x1";
  if (!(b.y0 < b.y1)) return "y0 >= y1";
  if (r.role == RegionRole::target && r.text.empty()) return "empty target text";
  return {};
}

// floor for the top-left corner, ceil for the bottom-right, so the pixel box
// contains the real box.
inline PixelBox to_pixel_box(const NormBox& b, int width, int height) {
  const int x0 = std::clamp(static_cast<int>(std::floor(b.x0 * width)), 0, width);
  const int y0 = std::clamp(static_cast<int>(std::floor(b.y0 * height)), 0, height);
  const int x1 = std::clamp(static_cast<int>(std::ceil(b.x1 * width)), 0, width);
  const int y1 = std::clamp(static_cast<int>(std::ceil(b.y1 * height)), 0, height);
  return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

// Grayscale canvas whose pixels are only 0 or 255.
struct GlyphCanvas {
  Image image;

  int width() const noexcept { return image.width; }
  int height() const noexcept { return image.height; }
  bool binary() const {
    return std::all_of(image.pixels.begin(), image.pixels.end(), [](auto p) { return p == 0 || p == 255; });
  }
};

struct GlyphRender {
  GlyphCanvas canvas;
  std::vector<std::string> warnings;
};

// White-on-black glyph prior. Regions paint in list order, so later regions
// overwrite earlier ones where boxes overlap.
inline GlyphRender render_glyph(const std::vector<TextRegion>& regions, int width, int height,
                                const GlyphFont& font = GlyphFont::builtin()) {
  if (width < 1 || height < 1) fail(ErrorKind::shape, "render_glyph", "canvas must be at least 1x1");
  GlyphRender out;
  out.canvas.image = Image(width, height, 1, 0);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& region = regions[i];
    if (region.role != RegionRole::target) {
      out.warnings.push_back("region " + std::to_string(i) + ": not a target region, skipped");
      continue;
    }
    if (auto why = region_problem(region); !why.empty())
      fail(ErrorKind::shape, "render_glyph", "region " + std::to_string(i) + ": " + why);
    const auto box = to_pixel_box(region.bbox, width, height);
    if (box.empty()) {
      out.warnings.push_back("region " + std::to_string(i) + ": zero-area pixel box, skipped");
      continue;
    }
    const auto text = utf8_decode(region.text);
    const auto fit = fit_text(std::u32string_view(text), box.w, box.h);
    draw_text(out.canvas.image, font, text, fit, box, box, TextStyle{{255, 255, 255}, false, Align::center});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regions JSON: {"regions":[{"bbox":[x0,y0,x1,y1],"text":"...","role":"target"}]}
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json region_to_json(const TextRegion& r) {
  nlohmann::ordered_json j;
  j["bbox"] = {r.bbox.x0, r.bbox.y0, r.bbox.x1, r.bbox.y1};
  j["text"] = r.text;
  j["role"] = std::string(to_string(r.role));
  return j;
}

inline std::string regions_to_json(const std::vector<TextRegion>& regions) {
  nlohmann::ordered_json j;
  j["regions"] = nlohmann::ordered_json::array();
  for (const auto& r : regions) j["regions"].push_back(region_to_json(r));
  return j.dump(2) + "\n";
}

// Parses one tuple; problems are appended to `errors` with the entry index.
inline std::optional<TextRegion> region_from_json(const nlohmann::json& j, RegionRole default_role, std::size_t index,
                                                  std::vector<std::string>& errors) {
  const std::string where = std::string(to_string(default_role)) + "[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("bbox") || !j["bbox"].is_array() || j["bbox"].size() != 4) {
    errors.push_back(where + ": bbox must be an array of 4 numbers");
    return std::nullopt;
  }
  TextRegion r;
  r.role = default_role;
  try {
    r.bbox = {j["bbox"][0].get<double>(), j["bbox"][1].get<double>(), j["bbox"][2].get<double>(),
              j["bbox"][3].get<double>()};
    if (j.contains("text")) r.text = j["text"].get<std::string>();
    if (j.contains("role")) {
      const auto role = j["role"].get<std::string>();
      if (role == "original") r.role = RegionRole::original;
      else if (role == "target") r.role = RegionRole::target;
      else {
        errors.push_back(where + ": unknown role '" + role + "'");
        return std::nullopt;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    errors.push_back(where + ": " + e.what());
    return std::nullopt;
  }
  if (auto why = region_problem(r); !why.empty()) {
    errors.push_back(where + ": " + why);
    return std::nullopt;
  }
  return r;
}

inline std::vector<TextRegion> regions_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, "regions", e.what());
  }
  if (!j.is_object() || !j.contains("regions") || !j["regions"].is_array())
    fail(ErrorKind::parse, "regions", "expected an object with a \"regions\" array");
  std::vector<TextRegion> out;
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < j["regions"].size(); ++i)
    if (auto r = region_from_json(j["regions"][i], RegionRole::target, i, errors)) out.push_back(*r);
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
    fail(ErrorKind::parse, "regions", msg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Detect-and-plan client
// ---------------------------------------------------------------------------

struct RegionPlan {
  std::vector<TextRegion> original;
  std::vector<TextRegion> target;
};

// Returns the raw service response:
//   {"original":[{bbox,text}...], "target":[...], "coords":"normalized"|"per_mille"|"pixels"}
class PlannerClient {
 public:
  virtual ~PlannerClient() = default;
  virtual nlohmann::json detect_and_plan(const Image& source, const std::string& instruction) = 0;
};

// Replays stored responses keyed by instruction; "*" matches any instruction.
class FixturePlanner : public PlannerClient {
 public:
  explicit FixturePlanner(nlohmann::json responses) : responses_(std::move(responses)) {}

  nlohmann::json detect_and_plan(const Image&, const std::string& instruction) override {
    if (responses_.contains(instruction)) return responses_[instruction];
    if (responses_.contains("*")) return responses_["*"];
    fail(ErrorKind::protocol, "plan_regions", "no fixture response for instruction '" + instruction + "'");
  }

 private:
  nlohmann::json responses_;
};

// Validates both tuple lists and converts coordinates to normalized [0,1].
inline RegionPlan plan_regions(PlannerClient& client, const Image& source, const std::string& instruction) {
  const auto response = client.detect_and_plan(source, instruction);
  if (!response.is_object()) fail(ErrorKind::protocol, "plan_regions", "response is not a JSON object");
  std::string coords = response.value("coords", std::string("normalized"));
  double sx = 1.0, sy = 1.0;
  if (coords == "per_mille") {
    sx = sy = 1000.0;
  } else if (coords == "pixels") {
    sx = source.width;
    sy = source.height;
  } else if (coords != "normalized") {
    fail(ErrorKind::protocol, "plan_regions", "unknown coordinate convention '" + coords + "'");
  }
  RegionPlan plan;
  std::vector<std::string> errors;
  for (auto role : {RegionRole::original, RegionRole::target}) {
    const char* key = role == RegionRole::original ? "original" : "target";
    if (!response.contains(key) || !response[key].is_array()) {
      errors.push_back(std::string(key) + ": missing tuple list");
      continue;
    }
    const auto& list = response[key];
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto entry = list[i];
      if (entry.is_object() && entry.contains("bbox") && entry["bbox"].is_array() && entry["bbox"].size() == 4 &&
          std::all_of(entry["bbox"].begin(), entry["bbox"].end(), [](const auto& v) { return v.is_number(); })) {
        entry["bbox"] = {entry["bbox"][0].template get<double>() / sx, entry["bbox"][1].template get<double>() / sy,
                         entry["bbox"][2].template get<double>() / sx, entry["bbox"][3].template get<double>() / sy};
      }
      entry.erase("role");
      if (auto r = region_from_json(entry, role, i, errors))
        (role == RegionRole::original ? plan.original : plan.target).push_back(*r);
    }
  }
  if (!errors.empty()) {
    std::string msg = "malformed tuples: ";
    for (std::size_t i = 0; i < errors.size(); ++i) msg += (i ? "; " : "") + errors[i];
    fail(ErrorKind::protocol, "plan_regions", msg);
  }
  return plan;
}

}  // namespace glyphforge::glyph
