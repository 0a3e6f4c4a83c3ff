#pragma once

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glyphforge/core.hpp"

namespace glyphforge {

// Axis-aligned pixel rectangle; [x, x+w) × [y, y+h).
struct PixelBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool empty() const noexcept { return w <= 0 || h <= 0; }
  bool contains(int px, int py) const noexcept {
    return px >= x && py >= y && px < x + w && py < y + h;
  }
  PixelBox intersect(const PixelBox& o) const noexcept {
    const int x0 = std::max(x, o.x), y0 = std::max(y, o.y);
    const int x1 = std::min(x + w, o.x + o.w), y1 = std::min(y + h, o.y + o.h);
    if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
    return {x0, y0, x1 - x0, y1 - y0};
  }
  bool operator==(const PixelBox&) const = default;
};

// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(c), fill) {
    if (w < 0 || h < 0 || (c != 1 && c != 3)) fail(ErrorKind::shape, "image", "invalid raster shape");
  }

  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
           static_cast<std::size_t>(channels);
  }
  std::uint8_t* at(int x, int y) noexcept { return pixels.data() + offset(x, y); }
  const std::uint8_t* at(int x, int y) const noexcept { return pixels.data() + offset(x, y); }

  bool same_shape(const Image& o) const noexcept {
    return width == o.width && height == o.height && channels == o.channels;
  }
  bool operator==(const Image&) const = default;
};

using Rgb = std::array<std::uint8_t, 3>;

inline void fill_box(Image& img, PixelBox box, Rgb color) {
  box = box.intersect({0, 0, img.width, img.height});
  for (int y = box.y; y < box.y + box.h; ++y)
    for (int x = box.x; x < box.x + box.w; ++x) {
      auto* p = img.at(x, y);
      for (int c = 0; c < img.channels; ++c) p[c] = color[static_cast<std::size_t>(c)];
    }
}

// Pixels where two same-shape rasters differ.
inline std::vector<std::pair<int, int>> diff_pixels(const Image& a, const Image& b) {
  if (!a.same_shape(b)) fail(ErrorKind::shape, "image", "diff of rasters with different shapes");
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x)
      if (!std::equal(a.at(x, y), a.at(x, y) + a.channels, b.at(x, y))) out.emplace_back(x, y);
  return out;
}

// Canonical byte serialization used for hashing: "WxHxC:" followed by pixels.
inline void hash_raster(Fnv1a64& h, const Image& img) {
  h.update(std::to_string(img.width) + "x" + std::to_string(img.height) + "x" + std::to_string(img.channels) + ":");
  h.update(img.pixels);
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "io", "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "io", "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "io", "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

// ---------------------------------------------------------------------------
// Base64 (RFC 4648, padded)
// ---------------------------------------------------------------------------

inline std::string base64_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out.push_back(table[v & 63]);
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(i + 1 < bytes.size() ? table[(v >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

inline std::vector<std::uint8_t> base64_decode(std::string_view text) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r' || c == ' ') continue;
    const int v = value(c);
    if (v < 0) fail(ErrorKind::protocol, "base64", "invalid character in base64 payload");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// PNG (8-bit gray / RGB, non-interlaced) over zlib
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32be(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

inline void png_chunk(std::vector<std::uint8_t>& out, const char* type, std::span<const std::uint8_t> data) {
  put_u32be(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const auto crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32be(out, static_cast<std::uint32_t>(crc));
}

inline std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

}  // namespace detail

// Filter type 0 on every row and zlib level 9, so output bytes depend only on
// the pixels.
inline std::vector<std::uint8_t> encode_png(const Image& img) {
  const std::size_t row = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.channels);
  std::vector<std::uint8_t> raw;
  raw.reserve((row + 1) * static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    const auto* p = img.pixels.data() + static_cast<std::size_t>(y) * row;
    raw.insert(raw.end(), p, p + row);
  }
  uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> z(zlen);
  if (compress2(z.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
    fail(ErrorKind::io, "png", "deflate failed");
  z.resize(zlen);

  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> ihdr;
  detail::put_u32be(ihdr, static_cast<std::uint32_t>(img.width));
  detail::put_u32be(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);
  ihdr.push_back(img.channels == 1 ? 0 : 2);
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  detail::png_chunk(out, "IHDR", ihdr);
  detail::png_chunk(out, "IDAT", z);
  detail::png_chunk(out, "IEND", {});
  return out;
}

// Accepts 8-bit gray, gray+alpha, RGB and RGBA; alpha is dropped.
inline Image decode_png(std::span<const std::uint8_t> bytes) {
  static constexpr std::array<std::uint8_t, 8> sig = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() < 8 || !std::equal(sig.begin(), sig.end(), bytes.begin()))
    fail(ErrorKind::protocol, "png", "not a PNG stream");
  std::size_t pos = 8;
  int width = 0, height = 0, color = -1;
  std::vector<std::uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t len = detail::get_u32be(bytes.data() + pos);
    const std::string type(reinterpret_cast<const char*>(bytes.data() + pos + 4), 4);
    if (pos + 12 + len > bytes.size()) fail(ErrorKind::protocol, "png", "truncated chunk");
    const auto* data = bytes.data() + pos + 8;
    if (type == "IHDR") {
      width = static_cast<int>(detail::get_u32be(data));
      height = static_cast<int>(detail::get_u32be(data + 4));
      if (data[8] != 8 || data[12] != 0) fail(ErrorKind::protocol, "png", "only 8-bit non-interlaced PNG is supported");
      color = data[9];
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  int in_channels = 0;
  switch (color) {
    case 0: in_channels = 1; break;
    case 2: in_channels = 3; break;
    case 4: in_channels = 2; break;
    case 6: in_channels = 4; break;
    default: fail(ErrorKind::protocol, "png", "unsupported color type");
  }
  const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(in_channels);
  std::vector<std::uint8_t> raw((stride + 1) * static_cast<std::size_t>(height));
  uLongf rawlen = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &rawlen, idat.data(), static_cast<uLong>(idat.size())) != Z_OK || rawlen != raw.size())
    fail(ErrorKind::protocol, "png", "inflate failed");

  std::vector<std::uint8_t> cur(stride), prev(stride, 0);
  const int out_channels = (in_channels <= 2) ? 1 : 3;
  Image img(width, height, out_channels);
  const std::size_t bpp = static_cast<std::size_t>(in_channels);
  for (int y = 0; y < height; ++y) {
    const auto* line = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
    const std::uint8_t filter = line[0];
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= bpp ? cur[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= bpp ? prev[i - bpp] : 0;
      int v = line[1 + i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += detail::paeth(a, b, c); break;
        default: fail(ErrorKind::protocol, "png", "bad filter type");
      }
      cur[i] = static_cast<std::uint8_t>(v & 0xFF);
    }
    for (int x = 0; x < width; ++x)
      for (int ch = 0; ch < out_channels; ++ch)
        img.at(x, y)[ch] = cur[static_cast<std::size_t>(x) * bpp + static_cast<std::size_t>(ch)];
    std::swap(cur, prev);
  }
  return img;
}

inline void write_png(const std::filesystem::path& path, const Image& img) { write_bytes(path, encode_png(img)); }
inline Image read_png(const std::filesystem::path& path) { return decode_png(read_bytes(path)); }

// Binary PGM (P5), maxval 255.
inline std::vector<std::uint8_t> encode_pgm(const Image& img) {
  if (img.channels != 1) fail(ErrorKind::shape, "pgm", "PGM requires a single-channel raster");
  const std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

inline Image decode_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string t;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) t.push_back(static_cast<char>(bytes[pos++]));
    return t;
  };
  if (token() != "P5") fail(ErrorKind::protocol, "pgm", "not a P5 stream");
  const int w = std::stoi(token());
  const int h = std::stoi(token());
  if (token() != "255") fail(ErrorKind::protocol, "pgm", "unsupported maxval");
  ++pos;
  Image img(w, h, 1);
  if (bytes.size() - pos < img.pixels.size()) fail(ErrorKind::protocol, "pgm", "truncated raster");
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), img.pixels.size(), img.pixels.begin());
  return img;
}

}  // namespace glyphforge
