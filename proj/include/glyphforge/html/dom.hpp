#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glyphforge/core.hpp"
#include "glyphforge/image.hpp"

namespace glyphforge::html {

inline constexpr std::array<std::string_view, 9> kTags = {"html", "body", "div", "p", "span", "h1", "h2", "h3", "img"};
inline constexpr std::array<std::string_view, 9> kStyleKeys = {
    "width", "height", "font-size", "color", "background", "padding", "margin", "text-align", "font-weight"};

inline bool is_known_tag(std::string_view t) { return std::find(kTags.begin(), kTags.end(), t) != kTags.end(); }
inline bool is_style_key(std::string_view k) {
  return std::find(kStyleKeys.begin(), kStyleKeys.end(), k) != kStyleKeys.end();
}

struct Node {
  int id = -1;
  std::string tag;
  std::map<std::string, std::string> attrs;
  std::map<std::string, std::string> style;
  std::vector<Node> children;
  std::string text;
  std::optional<PixelBox> box;  // frozen geometry, absolute pixels
  std::size_t src_begin = 0;
  std::size_t src_end = 0;

  bool is_text_leaf() const noexcept { return children.empty() && !text.empty(); }
  const std::string* style_value(std::string_view key) const {
    auto it = style.find(std::string(key));
    return it == style.end() ? nullptr : &it->second;
  }
};

struct DocTree {
  Node root;
  std::vector<std::string> notes;

  Node* find(int id) { return find_in(root, id); }
  const Node* find(int id) const { return find_in(const_cast<Node&>(root), id); }

  // Parent of the node with `id` together with the child index.
  std::optional<std::pair<Node*, std::size_t>> locate(int id) { return locate_in(root, id); }

  void for_each(const std::function<void(const Node&)>& fn) const { visit(root, fn); }
  void for_each_mut(const std::function<void(Node&)>& fn) { visit_mut(root, fn); }

  int max_id() const {
    int best = -1;
    for_each([&](const Node& n) { best = std::max(best, n.id); });
    return best;
  }

  Node& body() {
    for (auto& c : root.children)
      if (c.tag == "body") return c;
    fail(ErrorKind::consistency, "html", "document has no body");
  }
  const Node& body() const { return const_cast<DocTree*>(this)->body(); }

 private:
  static Node* find_in(Node& n, int id) {
    if (n.id == id) return &n;
    for (auto& c : n.children)
      if (auto* hit = find_in(c, id)) return hit;
    return nullptr;
  }
  static std::optional<std::pair<Node*, std::size_t>> locate_in(Node& n, int id) {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (n.children[i].id == id) return std::pair{&n, i};
      if (auto hit = locate_in(n.children[i], id)) return hit;
    }
    return std::nullopt;
  }
  static void visit(const Node& n, const std::function<void(const Node&)>& fn) {
    fn(n);
    for (const auto& c : n.children) visit(c, fn);
  }
  static void visit_mut(Node& n, const std::function<void(Node&)>& fn) {
    fn(n);
    for (auto& c : n.children) visit_mut(c, fn);
  }
};

// ---------------------------------------------------------------------------
// Style values
// ---------------------------------------------------------------------------

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline const std::map<std::string, Rgb, std::less<>>& named_colors() {
  static const std::map<std::string, Rgb, std::less<>> colors = {
      {"black", {0, 0, 0}},       {"white", {255, 255, 255}}, {"red", {255, 0, 0}},      {"green", {0, 128, 0}},
      {"blue", {0, 0, 255}},      {"yellow", {255, 255, 0}},  {"orange", {255, 165, 0}}, {"purple", {128, 0, 128}},
      {"gray", {128, 128, 128}},  {"grey", {128, 128, 128}},  {"navy", {0, 0, 128}},     {"teal", {0, 128, 128}},
      {"maroon", {128, 0, 0}},    {"silver", {192, 192, 192}}, {"olive", {128, 128, 0}}, {"lime", {0, 255, 0}},
      {"aqua", {0, 255, 255}},    {"fuchsia", {255, 0, 255}}, {"pink", {255, 192, 203}}, {"brown", {165, 42, 42}}};
  return colors;
}

inline std::optional<Rgb> parse_color(std::string_view v) {
  v = trim(v);
  const std::string lower = to_lower(v);
  if (auto it = named_colors().find(lower); it != named_colors().end()) return it->second;
  if (lower.size() != 4 && lower.size() != 7) return std::nullopt;
  if (lower[0] != '#') return std::nullopt;
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  Rgb out{};
  for (std::size_t i = 0; i < 3; ++i) {
    int hi, lo;
    if (lower.size() == 4) {
      hi = lo = hex(lower[1 + i]);
    } else {
      hi = hex(lower[1 + 2 * i]);
      lo = hex(lower[2 + 2 * i]);
    }
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return out;
}

inline std::string color_hex(const Rgb& c) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "#";
  for (auto v : c) {
    out += digits[v >> 4];
    out += digits[v & 15];
  }
  return out;
}

inline std::optional<int> parse_length(std::string_view v) {
  v = trim(v);
  if (v.size() > 2 && v.substr(v.size() - 2) == "px") v.remove_suffix(2);
  v = trim(v);
  if (v.empty() || v.size() > 6) return std::nullopt;
  double value = 0.0;
  bool dot = false;
  double scale = 0.1;
  for (char c : v) {
    if (c == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (dot) {
        value += scale * (c - '0');
        scale *= 0.1;
      } else {
        value = value * 10 + (c - '0');
      }
    } else {
      return std::nullopt;
    }
  }
  return static_cast<int>(std::lround(value));
}

// Canonical form of a whitelisted style value, or nullopt if unusable.
inline std::optional<std::string> normalize_style_value(std::string_view key, std::string_view value) {
  if (key == "width" || key == "height" || key == "font-size" || key == "padding" || key == "margin") {
    auto n = parse_length(value);
    if (!n) return std::nullopt;
    if (key == "font-size" && *n < 1) return std::nullopt;
    return std::to_string(*n) + "px";
  }
  if (key == "color" || key == "background") {
    const auto lower = to_lower(trim(value));
    if (key == "background" && (lower == "none" || lower == "transparent")) return "transparent";
    auto c = parse_color(value);
    if (!c) return std::nullopt;
    return color_hex(*c);
  }
  if (key == "text-align") {
    const auto lower = to_lower(trim(value));
    if (lower == "left" || lower == "center" || lower == "right") return lower;
    return std::nullopt;
  }
  if (key == "font-weight") {
    const auto lower = to_lower(trim(value));
    if (lower == "bold" || lower == "700" || lower == "800" || lower == "900" || lower == "bolder") return "bold";
    if (lower == "normal" || lower == "400" || lower == "300" || lower == "lighter") return "normal";
    return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += s[i];
      continue;
    }
    const auto name = s.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (name == "amp") cp = U'&';
    else if (name == "lt") cp = U'<';
    else if (name == "gt") cp = U'>';
    else if (name == "quot") cp = U'"';
    else if (name == "apos") cp = U'\'';
    else if (name == "nbsp") cp = U' ';
    else if (name.size() > 1 && name[0] == '#') {
      char32_t v = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      bool ok = name.size() > (hex ? 2u : 1u);
      for (std::size_t k = hex ? 2 : 1; k < name.size() && ok; ++k) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(name[k])));
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        if (d < 0 || v > 0x10FFFF) ok = false;
        else v = v * (hex ? 16 : 10) + static_cast<char32_t>(d);
      }
      if (ok && v > 0 && v <= 0x10FFFF) cp = v;
    }
    if (!cp) {
      out += s[i];
      continue;
    }
    out += utf8_encode(std::u32string(1, *cp));
    i = semi;
  }
  return out;
}

// Collapses whitespace runs to one space and trims both ends.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

inline std::string position(std::string_view src, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

struct Token {
  enum Kind { text, start, end } kind = text;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  bool self_closing = false;
  std::string data;
  std::size_t begin = 0;
  std::size_t end_pos = 0;
};

inline bool ieq_prefix(std::string_view s, std::size_t at, std::string_view what) {
  if (at + what.size() > s.size()) return false;
  for (std::size_t k = 0; k < what.size(); ++k)
    if (std::tolower(static_cast<unsigned char>(s[at + k])) != what[k]) return false;
  return true;
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_name_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
  };
  while (i < src.size()) {
    if (src[i] != '<') {
      const auto next = src.find('<', i);
      const auto stop = next == std::string_view::npos ? src.size() : next;
      out.push_back({Token::text, {}, {}, false, std::string(src.substr(i, stop - i)), i, stop});
      i = stop;
      continue;
    }
    if (src.compare(i, 4, "<!--") == 0) {
      const auto close = src.find("-->", i + 4);
      i = close == std::string_view::npos ? src.size() : close + 3;
      continue;
    }
    if (i + 1 < src.size() && (src[i + 1] == '!' || src[i + 1] == '?')) {
      const auto close = src.find('>', i);
      i = close == std::string_view::npos ? src.size() : close + 1;
      continue;
    }
    const bool closing = i + 1 < src.size() && src[i + 1] == '/';
    std::size_t j = i + (closing ? 2 : 1);
    const std::size_t name_start = j;
    while (j < src.size() && is_name_char(src[j])) ++j;
    if (j == name_start) {
      // A lone '<' is text.
      out.push_back({Token::text, {}, {}, false, "<", i, i + 1});
      ++i;
      continue;
    }
    Token tok;
    tok.kind = closing ? Token::end : Token::start;
    tok.name = to_lower(src.substr(name_start, j - name_start));
    tok.begin = i;
    while (j < src.size() && src[j] != '>') {
      if (std::isspace(static_cast<unsigned char>(src[j]))) {
        ++j;
        continue;
      }
      if (src[j] == '/') {
        tok.self_closing = true;
        ++j;
        continue;
      }
      const std::size_t an = j;
      while (j < src.size() && src[j] != '=' && src[j] != '>' && src[j] != '/' &&
             !std::isspace(static_cast<unsigned char>(src[j])))
        ++j;
      std::string aname = to_lower(src.substr(an, j - an));
      while (j < src.size() && std::isspace(static_cast<unsigned char>(src[j]))) ++j;
      std::string value;
      if (j < src.size() && src[j] == '=') {
        ++j;
        while (j < src.size() && std::isspace(static_cast<unsigned char>(src[j]))) ++j;
        if (j < src.size() && (src[j] == '"' || src[j] == '\'')) {
          const char q = src[j];
          const auto close = src.find(q, j + 1);
          if (close == std::string_view::npos)
            fail(ErrorKind::parse, "parse", "unterminated attribute value at " + position(src, j));
          value = decode_entities(src.substr(j + 1, close - j - 1));
          j = close + 1;
        } else {
          const std::size_t vs = j;
          while (j < src.size() && src[j] != '>' && !std::isspace(static_cast<unsigned char>(src[j]))) ++j;
          value = decode_entities(src.substr(vs, j - vs));
        }
      }
      if (!aname.empty()) tok.attrs.emplace_back(std::move(aname), std::move(value));
    }
    if (j >= src.size()) fail(ErrorKind::parse, "parse", "unterminated tag <" + tok.name + "> at " + position(src, i));
    tok.end_pos = j + 1;
    i = j + 1;
    const bool raw = tok.kind == Token::start && (tok.name == "script" || tok.name == "style");
    out.push_back(std::move(tok));
    if (raw) {
      // Raw-text content runs to the matching end tag.
      const std::string closer = "</" + out.back().name;
      std::size_t k = i;
      while (k < src.size() && !ieq_prefix(src, k, closer)) ++k;
      i = k;
    }
  }
  return out;
}

inline bool is_void(std::string_view t) {
  return t == "img" || t == "br" || t == "hr" || t == "meta" || t == "link" || t == "input" || t == "source" ||
         t == "wbr" || t == "area" || t == "col" || t == "embed" || t == "base" || t == "param" || t == "track";
}

inline bool is_dropped(std::string_view t) {
  return t == "head" || t == "script" || t == "style" || t == "title" || t == "meta" || t == "link" ||
         t == "noscript" || t == "template" || t == "br" || t == "base";
}

inline bool is_block(std::string_view t) { return t == "div" || t == "p" || t == "h1" || t == "h2" || t == "h3"; }

inline std::optional<PixelBox> parse_box(std::string_view v) {
  std::array<int, 4> vals{};
  std::size_t k = 0;
  std::size_t pos = 0;
  while (k < 4) {
    while (pos < v.size() && v[pos] == ' ') ++pos;
    const std::size_t start = pos;
    if (pos < v.size() && v[pos] == '-') ++pos;
    while (pos < v.size() && std::isdigit(static_cast<unsigned char>(v[pos]))) ++pos;
    if (pos == start) return std::nullopt;
    vals[k++] = std::stoi(std::string(v.substr(start, pos - start)));
  }
  while (pos < v.size() && v[pos] == ' ') ++pos;
  if (pos != v.size() || vals[2] < 0 || vals[3] < 0) return std::nullopt;
  return PixelBox{vals[0], vals[1], vals[2], vals[3]};
}

}  // namespace detail

// Tolerant parser for the HTML subset. Everything is normalized into an
// html > body skeleton; non-whitelisted tags become div (or are dropped for
// head/script/style and similar) with a note; mixed text and element children
// are separated by wrapping text runs in span elements.
inline DocTree parse(std::string_view src) {
  using detail::Token;
  const auto tokens = detail::tokenize(src);
  DocTree doc;
  doc.root.tag = "html";
  doc.root.src_begin = 0;
  doc.root.src_end = src.size();
  Node body_proto;
  body_proto.tag = "body";
  body_proto.src_begin = 0;
  body_proto.src_end = src.size();
  doc.root.children.push_back(body_proto);

  struct Open {
    Node* node;
    std::string source_tag;
    std::size_t opened_at;
  };
  std::vector<Open> stack = {{&doc.root, "html", 0}, {&doc.root.children[0], "body", 0}};
  auto note = [&](std::size_t at, const std::string& msg) { doc.notes.push_back(detail::position(src, at) + ": " + msg); };

  auto apply_attrs = [&](Node& n, const Token& tok) {
    for (const auto& [k, v] : tok.attrs) {
      if (k == "style") {
        std::size_t p = 0;
        while (p <= v.size()) {
          const auto semi = v.find(';', p);
          const auto decl = std::string_view(v).substr(p, semi == std::string::npos ? std::string::npos : semi - p);
          p = semi == std::string::npos ? v.size() + 1 : semi + 1;
          if (detail::collapse_whitespace(decl).empty()) continue;
          const auto colon = decl.find(':');
          if (colon == std::string_view::npos) {
            note(tok.begin, "malformed style declaration '" + std::string(trim(decl)) + "' dropped");
            continue;
          }
          const auto key = to_lower(trim(decl.substr(0, colon)));
          const auto val = trim(decl.substr(colon + 1));
          if (!is_style_key(key)) {
            note(tok.begin, "style property '" + key + "' is outside the whitelist, dropped");
            continue;
          }
          auto norm = normalize_style_value(key, val);
          if (!norm) {
            note(tok.begin, "unusable value '" + std::string(val) + "' for " + key + ", dropped");
            continue;
          }
          n.style[key] = *norm;
        }
      } else if (k == "data-gf-id") {
        try {
          n.id = std::stoi(v);
        } catch (const std::exception&) {
          note(tok.begin, "ignoring malformed data-gf-id '" + v + "'");
        }
      } else if (k == "data-gf-box") {
        if (auto b = detail::parse_box(v)) n.box = *b;
        else note(tok.begin, "ignoring malformed data-gf-box '" + v + "'");
      } else if (k == "id" || k == "src" || k == "alt" || k.starts_with("data-gf-")) {
        n.attrs[k] = v;
      }
    }
  };

  std::size_t skip_depth = 0;
  std::string skip_tag;
  bool seen_html_tag = false, seen_body_tag = false;

  // Closes `p` elements implied by an incoming block start tag.
  auto close_open_p = [&](std::size_t at) {
    for (std::size_t k = stack.size(); k-- > 2;) {
      if (stack[k].node->tag == "p") {
        for (std::size_t m = stack.size(); m-- > k;) stack[m].node->src_end = at;
        stack.resize(k);
        return;
      }
      if (!(stack[k].node->tag == "span")) return;
    }
  };

  for (const auto& tok : tokens) {
    if (skip_depth > 0) {
      if (tok.kind == Token::start && tok.name == skip_tag && !tok.self_closing) ++skip_depth;
      if (tok.kind == Token::end && tok.name == skip_tag) --skip_depth;
      continue;
    }
    if (tok.kind == Token::text) {
      const auto text = detail::collapse_whitespace(detail::decode_entities(tok.data));
      if (text.empty()) continue;
      Node& parent = *stack.back().node;
      if (parent.tag == "img") continue;
      if (parent.children.empty() && &parent != &doc.root && parent.tag != "body") {
        parent.text = parent.text.empty() ? text : parent.text + " " + text;
        continue;
      }
      if (!parent.children.empty() && parent.children.back().src_end == tok.begin &&
          parent.children.back().attrs.contains("data-gf-run")) {
        auto& run = parent.children.back();
        run.text += " " + text;
        run.src_end = tok.end_pos;
        continue;
      }
      Node run;
      run.tag = "span";
      run.attrs["data-gf-run"] = "1";
      run.text = text;
      run.src_begin = tok.begin;
      run.src_end = tok.end_pos;
      parent.children.push_back(std::move(run));
      continue;
    }
    if (tok.kind == Token::start) {
      if (detail::is_dropped(tok.name)) {
        note(tok.begin, "<" + tok.name + "> dropped");
        if (!detail::is_void(tok.name) && !tok.self_closing) {
          skip_depth = 1;
          skip_tag = tok.name;
        }
        continue;
      }
      if (tok.name == "html") {
        if (seen_html_tag) note(tok.begin, "repeated <html> ignored");
        else apply_attrs(doc.root, tok);
        seen_html_tag = true;
        doc.root.src_begin = tok.begin;
        continue;
      }
      if (tok.name == "body") {
        if (seen_body_tag) note(tok.begin, "repeated <body> ignored");
        else apply_attrs(doc.root.children[0], tok);
        seen_body_tag = true;
        doc.root.children[0].src_begin = tok.begin;
        continue;
      }
      std::string tag = tok.name;
      Node n;
      if (!is_known_tag(tag)) {
        note(tok.begin, "<" + tag + "> normalized to <div>");
        n.attrs["data-gf-orig"] = tag;
        tag = "div";
      }
      n.tag = tag;
      apply_attrs(n, tok);
      n.src_begin = tok.begin;
      n.src_end = tok.end_pos;
      if (detail::is_block(tag)) close_open_p(tok.begin);
      Node& parent = *stack.back().node;
      if (parent.tag == "img") fail(ErrorKind::parse, "parse", "element inside <img> at " + detail::position(src, tok.begin));
      // Text already held by the parent moves into a run before element
      // children are added.
      if (!parent.text.empty()) {
        Node run;
        run.tag = "span";
        run.attrs["data-gf-run"] = "1";
        run.text = std::move(parent.text);
        run.src_begin = parent.src_begin;
        run.src_end = tok.begin;
        parent.text.clear();
        parent.children.push_back(std::move(run));
      }
      parent.children.push_back(std::move(n));
      const bool leaf = detail::is_void(tok.name) || tok.self_closing;
      if (!leaf) stack.push_back({&parent.children.back(), tok.name, tok.begin});
      continue;
    }
    // End tag.
    if (detail::is_void(tok.name) || detail::is_dropped(tok.name)) continue;
    if (tok.name == "html" || tok.name == "body") {
      for (std::size_t k = stack.size(); k-- > 2;) {
        const auto& t = stack[k].node->tag;
        if (t != "p" && t != "span")
          fail(ErrorKind::parse, "parse",
               "</" + tok.name + "> at " + detail::position(src, tok.begin) + " while <" + stack[k].source_tag +
                   "> opened at " + detail::position(src, stack[k].opened_at) + " is still open");
        stack[k].node->src_end = tok.begin;
      }
      stack.resize(2);
      if (tok.name == "body") doc.root.children[0].src_end = tok.end_pos;
      else doc.root.src_end = tok.end_pos;
      continue;
    }
    std::optional<std::size_t> match;
    for (std::size_t k = stack.size(); k-- > 2;) {
      if (stack[k].source_tag == tok.name) {
        match = k;
        break;
      }
      const auto& t = stack[k].node->tag;
      if (t != "p" && t != "span") break;
    }
    if (!match) {
      if (tok.name == "p") {
        note(tok.begin, "stray </p> ignored");
        continue;
      }
      fail(ErrorKind::parse, "parse", "unexpected </" + tok.name + "> at " + detail::position(src, tok.begin));
    }
    for (std::size_t k = stack.size(); k-- > *match;) stack[k].node->src_end = tok.end_pos;
    stack.resize(*match);
  }
  for (std::size_t k = stack.size(); k-- > 2;) {
    const auto& t = stack[k].node->tag;
    if (t != "p" && t != "span")
      fail(ErrorKind::parse, "parse",
           "<" + stack[k].source_tag + "> opened at " + detail::position(src, stack[k].opened_at) + " is never closed");
  }

  // Node ids: keep valid unique ids from the input, number the rest in
  // pre-order after the largest kept id.
  std::set<int> used;
  int next = 0;
  doc.for_each_mut([&](Node& n) {
    if (n.id >= 0 && !used.insert(n.id).second) {
      doc.notes.push_back("duplicate data-gf-id " + std::to_string(n.id) + " renumbered");
      n.id = -1;
    }
    if (n.id >= 0) next = std::max(next, n.id + 1);
  });
  doc.for_each_mut([&](Node& n) {
    if (n.id < 0) n.id = next++;
  });
  return doc;
}

// ---------------------------------------------------------------------------
// Serializer
// ---------------------------------------------------------------------------

inline std::string escape_text(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string escape_attr(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"') out += "&quot;";
    else if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

inline std::string style_string(const Node& n) {
  std::string out;
  for (auto key : kStyleKeys) {
    auto it = n.style.find(std::string(key));
    if (it == n.style.end()) continue;
    if (!out.empty()) out += ';';
    out += std::string(key) + ':' + it->second;
  }
  return out;
}

// Start tag plus own text: the part of a node that does not depend on its
// children.
inline std::string serialize_shallow(const Node& n) {
  std::string out = "<" + n.tag + " data-gf-id=\"" + std::to_string(n.id) + "\"";
  if (n.box)
    out += " data-gf-box=\"" + std::to_string(n.box->x) + " " + std::to_string(n.box->y) + " " +
           std::to_string(n.box->w) + " " + std::to_string(n.box->h) + "\"";
  for (const auto& [k, v] : n.attrs) out += " " + k + "=\"" + escape_attr(v) + "\"";
  const auto st = style_string(n);
  if (!st.empty()) out += " style=\"" + escape_attr(st) + "\"";
  out += ">";
  out += escape_text(n.text);
  return out;
}

namespace detail {
inline void serialize_into(const Node& n, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += serialize_shallow(n);
  if (n.tag == "img") {
    out += "\n";
    return;
  }
  if (n.children.empty()) {
    out += "</" + n.tag + ">\n";
    return;
  }
  out += "\n";
  for (const auto& c : n.children) serialize_into(c, depth + 1, out);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "</" + n.tag + ">\n";
}
}  // namespace detail

inline std::string serialize(const DocTree& doc) {
  std::string out = "<!DOCTYPE html>\n";
  detail::serialize_into(doc.root, 0, out);
  return out;
}

}  // namespace glyphforge::html
