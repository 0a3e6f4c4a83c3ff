// Generated from data/font/font8x8.hex. Public-domain 8x8 glyphs (font8x8).
#pragma once

#include <array>
#include <cstdint>

namespace glyphforge::detail {

struct EmbeddedGlyph {
  char32_t code_point;
  std::array<std::uint8_t, 8> rows;
};

inline constexpr std::array<EmbeddedGlyph, 191> kFont8x8 = {{
    {0x0020, {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x0021, {0x18, 0x3C, 0x3C, 0x18, 0x18, 0x00, 0x18, 0x00}},
    {0x0022, {0x36, 0x36, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x0023, {0x36, 0x36, 0x7F, 0x36, 0x7F, 0x36, 0x36, 0x00}},
    {0x0024, {0x0C, 0x3E, 0x03, 0x1E, 0x30, 0x1F, 0x0C, 0x00}},
    {0x0025, {0x00, 0x63, 0x33, 0x18, 0x0C, 0x66, 0x63, 0x00}},
    {0x0026, {0x1C, 0x36, 0x1C, 0x6E, 0x3B, 0x33, 0x6E, 0x00}},
    {0x0027, {0x06, 0x06, 0x03, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x0028, {0x18, 0x0C, 0x06, 0x06, 0x06, 0x0C, 0x18, 0x00}},
    {0x0029, {0x06, 0x0C, 0x18, 0x18, 0x18, 0x0C, 0x06, 0x00}},
    {0x002A, {0x00, 0x66, 0x3C, 0xFF, 0x3C, 0x66, 0x00, 0x00}},
    {0x002B, {0x00, 0x0C, 0x0C, 0x3F, 0x0C, 0x0C, 0x00, 0x00}},
    {0x002C, {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C, 0x06}},
    {0x002D, {0x00, 0x00, 0x00, 0x3F, 0x00, 0x00, 0x00, 0x00}},
    {0x002E, {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C, 0x00}},
    {0x002F, {0x60, 0x30, 0x18, 0x0C, 0x06, 0x03, 0x01, 0x00}},
    {0x0030, {0x3E, 0x63, 0x73, 0x7B, 0x6F, 0x67, 0x3E, 0x00}},
    {0x0031, {0x0C, 0x0E, 0x0C, 0x0C, 0x0C, 0x0C, 0x3F, 0x00}},
    {0x0032, {0x1E, 0x33, 0x30, 0x1C, 0x06, 0x33, 0x3F, 0x00}},
    {0x0033, {0x1E, 0x33, 0x30, 0x1C, 0x30, 0x33, 0x1E, 0x00}},
    {0x0034, {0x38, 0x3C, 0x36, 0x33, 0x7F, 0x30, 0x78, 0x00}},
    {0x0035, {0x3F, 0x03, 0x1F, 0x30, 0x30, 0x33, 0x1E, 0x00}},
    {0x0036, {0x1C, 0x06, 0x03, 0x1F, 0x33, 0x33, 0x1E, 0x00}},
    {0x0037, {0x3F, 0x33, 0x30, 0x18, 0x0C, 0x0C, 0x0C, 0x00}},
    {0x0038, {0x1E, 0x33, 0x33, 0x1E, 0x33, 0x33, 0x1E, 0x00}},
    {0x0039, {0x1E, 0x33, 0x33, 0x3E, 0x30, 0x18, 0x0E, 0x00}},
    {0x003A, {0x00, 0x0C, 0x0C, 0x00, 0x00, 0x0C, 0x0C, 0x00}},
    {0x003B, {0x00, 0x0C, 0x0C, 0x00, 0x00, 0x0C, 0x0C, 0x06}},
    {0x003C, {0x18, 0x0C, 0x06, 0x03, 0x06, 0x0C, 0x18, 0x00}},
    {0x003D, {0x00, 0x00, 0x3F, 0x00, 0x00, 0x3F, 0x00, 0x00}},
    {0x003E, {0x06, 0x0C, 0x18, 0x30, 0x18, 0x0C, 0x06, 0x00}},
    {0x003F, {0x1E, 0x33, 0x30, 0x18, 0x0C, 0x00, 0x0C, 0x00}},
    {0x0040, {0x3E, 0x63, 0x7B, 0x7B, 0x7B, 0x03, 0x1E, 0x00}},
    {0x0041, {0x0C, 0x1E, 0x33, 0x33, 0x3F, 0x33, 0x33, 0x00}},
    {0x0042, {0x3F, 0x66, 0x66, 0x3E, 0x66, 0x66, 0x3F, 0x00}},
    {0x0043, {0x3C, 0x66, 0x03, 0x03, 0x03, 0x66, 0x3C, 0x00}},
    {0x0044, {0x1F, 0x36, 0x66, 0x66, 0x66, 0x36, 0x1F, 0x00}},
    {0x0045, {0x7F, 0x46, 0x16, 0x1E, 0x16, 0x46, 0x7F, 0x00}},
    {0x0046, {0x7F, 0x46, 0x16, 0x1E, 0x16, 0x06, 0x0F, 0x00}},
    {0x0047, {0x3C, 0x66, 0x03, 0x03, 0x73, 0x66, 0x7C, 0x00}},
    {0x0048, {0x33, 0x33, 0x33, 0x3F, 0x33, 0x33, 0x33, 0x00}},
    {0x0049, {0x1E, 0x0C, 0x0C, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x004A, {0x78, 0x30, 0x30, 0x30, 0x33, 0x33, 0x1E, 0x00}},
    {0x004B, {0x67, 0x66, 0x36, 0x1E, 0x36, 0x66, 0x67, 0x00}},
    {0x004C, {0x0F, 0x06, 0x06, 0x06, 0x46, 0x66, 0x7F, 0x00}},
    {0x004D, {0x63, 0x77, 0x7F, 0x7F, 0x6B, 0x63, 0x63, 0x00}},
    {0x004E, {0x63, 0x67, 0x6F, 0x7B, 0x73, 0x63, 0x63, 0x00}},
    {0x004F, {0x1C, 0x36, 0x63, 0x63, 0x63, 0x36, 0x1C, 0x00}},
    {0x0050, {0x3F, 0x66, 0x66, 0x3E, 0x06, 0x06, 0x0F, 0x00}},
    {0x0051, {0x1E, 0x33, 0x33, 0x33, 0x3B, 0x1E, 0x38, 0x00}},
    {0x0052, {0x3F, 0x66, 0x66, 0x3E, 0x36, 0x66, 0x67, 0x00}},
    {0x0053, {0x1E, 0x33, 0x07, 0x0E, 0x38, 0x33, 0x1E, 0x00}},
    {0x0054, {0x3F, 0x2D, 0x0C, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x0055, {0x33, 0x33, 0x33, 0x33, 0x33, 0x33, 0x3F, 0x00}},
    {0x0056, {0x33, 0x33, 0x33, 0x33, 0x33, 0x1E, 0x0C, 0x00}},
    {0x0057, {0x63, 0x63, 0x63, 0x6B, 0x7F, 0x77, 0x63, 0x00}},
    {0x0058, {0x63, 0x63, 0x36, 0x1C, 0x1C, 0x36, 0x63, 0x00}},
    {0x0059, {0x33, 0x33, 0x33, 0x1E, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x005A, {0x7F, 0x63, 0x31, 0x18, 0x4C, 0x66, 0x7F, 0x00}},
    {0x005B, {0x1E, 0x06, 0x06, 0x06, 0x06, 0x06, 0x1E, 0x00}},
    {0x005C, {0x03, 0x06, 0x0C, 0x18, 0x30, 0x60, 0x40, 0x00}},
    {0x005D, {0x1E, 0x18, 0x18, 0x18, 0x18, 0x18, 0x1E, 0x00}},
    {0x005E, {0x08, 0x1C, 0x36, 0x63, 0x00, 0x00, 0x00, 0x00}},
    {0x005F, {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xFF}},
    {0x0060, {0x0C, 0x0C, 0x18, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x0061, {0x00, 0x00, 0x1E, 0x30, 0x3E, 0x33, 0x6E, 0x00}},
    {0x0062, {0x07, 0x06, 0x06, 0x3E, 0x66, 0x66, 0x3B, 0x00}},
    {0x0063, {0x00, 0x00, 0x1E, 0x33, 0x03, 0x33, 0x1E, 0x00}},
    {0x0064, {0x38, 0x30, 0x30, 0x3E, 0x33, 0x33, 0x6E, 0x00}},
    {0x0065, {0x00, 0x00, 0x1E, 0x33, 0x3F, 0x03, 0x1E, 0x00}},
    {0x0066, {0x1C, 0x36, 0x06, 0x0F, 0x06, 0x06, 0x0F, 0x00}},
    {0x0067, {0x00, 0x00, 0x6E, 0x33, 0x33, 0x3E, 0x30, 0x1F}},
    {0x0068, {0x07, 0x06, 0x36, 0x6E, 0x66, 0x66, 0x67, 0x00}},
    {0x0069, {0x0C, 0x00, 0x0E, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x006A, {0x30, 0x00, 0x30, 0x30, 0x30, 0x33, 0x33, 0x1E}},
    {0x006B, {0x07, 0x06, 0x66, 0x36, 0x1E, 0x36, 0x67, 0x00}},
    {0x006C, {0x0E, 0x0C, 0x0C, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x006D, {0x00, 0x00, 0x33, 0x7F, 0x7F, 0x6B, 0x63, 0x00}},
    {0x006E, {0x00, 0x00, 0x1F, 0x33, 0x33, 0x33, 0x33, 0x00}},
    {0x006F, {0x00, 0x00, 0x1E, 0x33, 0x33, 0x33, 0x1E, 0x00}},
    {0x0070, {0x00, 0x00, 0x3B, 0x66, 0x66, 0x3E, 0x06, 0x0F}},
    {0x0071, {0x00, 0x00, 0x6E, 0x33, 0x33, 0x3E, 0x30, 0x78}},
    {0x0072, {0x00, 0x00, 0x3B, 0x6E, 0x66, 0x06, 0x0F, 0x00}},
    {0x0073, {0x00, 0x00, 0x3E, 0x03, 0x1E, 0x30, 0x1F, 0x00}},
    {0x0074, {0x08, 0x0C, 0x3E, 0x0C, 0x0C, 0x2C, 0x18, 0x00}},
    {0x0075, {0x00, 0x00, 0x33, 0x33, 0x33, 0x33, 0x6E, 0x00}},
    {0x0076, {0x00, 0x00, 0x33, 0x33, 0x33, 0x1E, 0x0C, 0x00}},
    {0x0077, {0x00, 0x00, 0x63, 0x6B, 0x7F, 0x7F, 0x36, 0x00}},
    {0x0078, {0x00, 0x00, 0x63, 0x36, 0x1C, 0x36, 0x63, 0x00}},
    {0x0079, {0x00, 0x00, 0x33, 0x33, 0x33, 0x3E, 0x30, 0x1F}},
    {0x007A, {0x00, 0x00, 0x3F, 0x19, 0x0C, 0x26, 0x3F, 0x00}},
    {0x007B, {0x38, 0x0C, 0x0C, 0x07, 0x0C, 0x0C, 0x38, 0x00}},
    {0x007C, {0x18, 0x18, 0x18, 0x00, 0x18, 0x18, 0x18, 0x00}},
    {0x007D, {0x07, 0x0C, 0x0C, 0x38, 0x0C, 0x0C, 0x07, 0x00}},
    {0x007E, {0x6E, 0x3B, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x00A0, {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x00A1, {0x18, 0x18, 0x00, 0x18, 0x18, 0x18, 0x18, 0x00}},
    {0x00A2, {0x18, 0x18, 0x7E, 0x03, 0x03, 0x7E, 0x18, 0x18}},
    {0x00A3, {0x1C, 0x36, 0x26, 0x0F, 0x06, 0x67, 0x3F, 0x00}},
    {0x00A4, {0x00, 0x00, 0x63, 0x3E, 0x36, 0x3E, 0x63, 0x00}},
    {0x00A5, {0x33, 0x33, 0x1E, 0x3F, 0x0C, 0x3F, 0x0C, 0x0C}},
    {0x00A6, {0x18, 0x18, 0x18, 0x00, 0x18, 0x18, 0x18, 0x00}},
    {0x00A7, {0x7C, 0xC6, 0x1C, 0x36, 0x36, 0x1C, 0x33, 0x1E}},
    {0x00A8, {0x33, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x00A9, {0x3C, 0x42, 0x99, 0x85, 0x85, 0x99, 0x42, 0x3C}},
    {0x00AA, {0x3C, 0x36, 0x36, 0x7C, 0x00, 0x00, 0x00, 0x00}},
    {0x00AB, {0x00, 0xCC, 0x66, 0x33, 0x66, 0xCC, 0x00, 0x00}},
    {0x00AC, {0x00, 0x00, 0x00, 0x3F, 0x30, 0x30, 0x00, 0x00}},
    {0x00AD, {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x00AE, {0x3C, 0x42, 0x9D, 0xA5, 0x9D, 0xA5, 0x42, 0x3C}},
    {0x00AF, {0x7E, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x00B0, {0x1C, 0x36, 0x36, 0x1C, 0x00, 0x00, 0x00, 0x00}},
    {0x00B1, {0x18, 0x18, 0x7E, 0x18, 0x18, 0x00, 0x7E, 0x00}},
    {0x00B2, {0x1C, 0x30, 0x18, 0x0C, 0x3C, 0x00, 0x00, 0x00}},
    {0x00B3, {0x1C, 0x30, 0x18, 0x30, 0x1C, 0x00, 0x00, 0x00}},
    {0x00B4, {0x18, 0x0C, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {0x00B5, {0x00, 0x00, 0x66, 0x66, 0x66, 0x3E, 0x06, 0x03}},
    {0x00B6, {0xFE, 0xDB, 0xDB, 0xDE, 0xD8, 0xD8, 0xD8, 0x00}},
    {0x00B7, {0x00, 0x00, 0x00, 0x18, 0x18, 0x00, 0x00, 0x00}},
    {0x00B8, {0x00, 0x00, 0x00, 0x00, 0x00, 0x18, 0x30, 0x1E}},
    {0x00B9, {0x08, 0x0C, 0x08, 0x1C, 0x00, 0x00, 0x00, 0x00}},
    {0x00BA, {0x1C, 0x36, 0x36, 0x1C, 0x00, 0x00, 0x00, 0x00}},
    {0x00BB, {0x00, 0x33, 0x66, 0xCC, 0x66, 0x33, 0x00, 0x00}},
    {0x00BC, {0xC3, 0x63, 0x33, 0xBD, 0xEC, 0xF6, 0xF3, 0x03}},
    {0x00BD, {0xC3, 0x63, 0x33, 0x7B, 0xCC, 0x66, 0x33, 0xF0}},
    {0x00BE, {0x03, 0xC4, 0x63, 0xB4, 0xDB, 0xAC, 0xE6, 0x80}},
    {0x00BF, {0x0C, 0x00, 0x0C, 0x06, 0x03, 0x33, 0x1E, 0x00}},
    {0x00C0, {0x07, 0x00, 0x1C, 0x36, 0x63, 0x7F, 0x63, 0x00}},
    {0x00C1, {0x70, 0x00, 0x1C, 0x36, 0x63, 0x7F, 0x63, 0x00}},
    {0x00C2, {0x1C, 0x36, 0x00, 0x3E, 0x63, 0x7F, 0x63, 0x00}},
    {0x00C3, {0x6E, 0x3B, 0x00, 0x3E, 0x63, 0x7F, 0x63, 0x00}},
    {0x00C4, {0x63, 0x1C, 0x36, 0x63, 0x7F, 0x63, 0x63, 0x00}},
    {0x00C5, {0x0C, 0x0C, 0x00, 0x1E, 0x33, 0x3F, 0x33, 0x00}},
    {0x00C6, {0x7C, 0x36, 0x33, 0x7F, 0x33, 0x33, 0x73, 0x00}},
    {0x00C7, {0x1E, 0x33, 0x03, 0x33, 0x1E, 0x18, 0x30, 0x1E}},
    {0x00C8, {0x07, 0x00, 0x3F, 0x06, 0x1E, 0x06, 0x3F, 0x00}},
    {0x00C9, {0x38, 0x00, 0x3F, 0x06, 0x1E, 0x06, 0x3F, 0x00}},
    {0x00CA, {0x0C, 0x12, 0x3F, 0x06, 0x1E, 0x06, 0x3F, 0x00}},
    {0x00CB, {0x36, 0x00, 0x3F, 0x06, 0x1E, 0x06, 0x3F, 0x00}},
    {0x00CC, {0x07, 0x00, 0x1E, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x00CD, {0x38, 0x00, 0x1E, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x00CE, {0x0C, 0x12, 0x00, 0x1E, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x00CF, {0x33, 0x00, 0x1E, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x00D0, {0x3F, 0x66, 0x6F, 0x6F, 0x66, 0x66, 0x3F, 0x00}},
    {0x00D1, {0x3F, 0x00, 0x33, 0x37, 0x3F, 0x3B, 0x33, 0x00}},
    {0x00D2, {0x0E, 0x00, 0x18, 0x3C, 0x66, 0x3C, 0x18, 0x00}},
    {0x00D3, {0x70, 0x00, 0x18, 0x3C, 0x66, 0x3C, 0x18, 0x00}},
    {0x00D4, {0x3C, 0x66, 0x18, 0x3C, 0x66, 0x3C, 0x18, 0x00}},
    {0x00D5, {0x6E, 0x3B, 0x00, 0x3E, 0x63, 0x63, 0x3E, 0x00}},
    {0x00D6, {0xC3, 0x18, 0x3C, 0x66, 0x66, 0x3C, 0x18, 0x00}},
    {0x00D7, {0x00, 0x36, 0x1C, 0x08, 0x1C, 0x36, 0x00, 0x00}},
    {0x00D8, {0x5C, 0x36, 0x73, 0x7B, 0x6F, 0x36, 0x1D, 0x00}},
    {0x00D9, {0x0E, 0x00, 0x66, 0x66, 0x66, 0x66, 0x3C, 0x00}},
    {0x00DA, {0x70, 0x00, 0x66, 0x66, 0x66, 0x66, 0x3C, 0x00}},
    {0x00DB, {0x3C, 0x66, 0x00, 0x66, 0x66, 0x66, 0x3C, 0x00}},
    {0x00DC, {0x33, 0x00, 0x33, 0x33, 0x33, 0x33, 0x1E, 0x00}},
    {0x00DD, {0x70, 0x00, 0x66, 0x66, 0x3C, 0x18, 0x18, 0x00}},
    {0x00DE, {0x0F, 0x06, 0x3E, 0x66, 0x66, 0x3E, 0x06, 0x0F}},
    {0x00DF, {0x00, 0x1E, 0x33, 0x1F, 0x33, 0x1F, 0x03, 0x03}},
    {0x00E0, {0x07, 0x00, 0x1E, 0x30, 0x3E, 0x33, 0x7E, 0x00}},
    {0x00E1, {0x38, 0x00, 0x1E, 0x30, 0x3E, 0x33, 0x7E, 0x00}},
    {0x00E2, {0x7E, 0xC3, 0x3C, 0x60, 0x7C, 0x66, 0xFC, 0x00}},
    {0x00E3, {0x6E, 0x3B, 0x1E, 0x30, 0x3E, 0x33, 0x7E, 0x00}},
    {0x00E4, {0x33, 0x00, 0x1E, 0x30, 0x3E, 0x33, 0x7E, 0x00}},
    {0x00E5, {0x0C, 0x0C, 0x1E, 0x30, 0x3E, 0x33, 0x7E, 0x00}},
    {0x00E6, {0x00, 0x00, 0xFE, 0x30, 0xFE, 0x33, 0xFE, 0x00}},
    {0x00E7, {0x00, 0x00, 0x1E, 0x03, 0x03, 0x1E, 0x30, 0x1C}},
    {0x00E8, {0x07, 0x00, 0x1E, 0x33, 0x3F, 0x03, 0x1E, 0x00}},
    {0x00E9, {0x38, 0x00, 0x1E, 0x33, 0x3F, 0x03, 0x1E, 0x00}},
    {0x00EA, {0x7E, 0xC3, 0x3C, 0x66, 0x7E, 0x06, 0x3C, 0x00}},
    {0x00EB, {0x33, 0x00, 0x1E, 0x33, 0x3F, 0x03, 0x1E, 0x00}},
    {0x00EC, {0x07, 0x00, 0x0E, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x00ED, {0x1C, 0x00, 0x0E, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x00EE, {0x3E, 0x63, 0x1C, 0x18, 0x18, 0x18, 0x3C, 0x00}},
    {0x00EF, {0x33, 0x00, 0x0E, 0x0C, 0x0C, 0x0C, 0x1E, 0x00}},
    {0x00F0, {0x1B, 0x0E, 0x1B, 0x30, 0x3E, 0x33, 0x1E, 0x00}},
    {0x00F1, {0x00, 0x1F, 0x00, 0x1F, 0x33, 0x33, 0x33, 0x00}},
    {0x00F2, {0x00, 0x07, 0x00, 0x1E, 0x33, 0x33, 0x1E, 0x00}},
    {0x00F3, {0x00, 0x38, 0x00, 0x1E, 0x33, 0x33, 0x1E, 0x00}},
    {0x00F4, {0x1E, 0x33, 0x00, 0x1E, 0x33, 0x33, 0x1E, 0x00}},
    {0x00F5, {0x6E, 0x3B, 0x00, 0x1E, 0x33, 0x33, 0x1E, 0x00}},
    {0x00F6, {0x00, 0x33, 0x00, 0x1E, 0x33, 0x33, 0x1E, 0x00}},
    {0x00F7, {0x18, 0x18, 0x00, 0x7E, 0x00, 0x18, 0x18, 0x00}},
    {0x00F8, {0x00, 0x60, 0x3C, 0x76, 0x7E, 0x6E, 0x3C, 0x06}},
    {0x00F9, {0x00, 0x07, 0x00, 0x33, 0x33, 0x33, 0x7E, 0x00}},
    {0x00FA, {0x00, 0x38, 0x00, 0x33, 0x33, 0x33, 0x7E, 0x00}},
    {0x00FB, {0x1E, 0x33, 0x00, 0x33, 0x33, 0x33, 0x7E, 0x00}},
    {0x00FC, {0x00, 0x33, 0x00, 0x33, 0x33, 0x33, 0x7E, 0x00}},
    {0x00FD, {0x00, 0x38, 0x00, 0x33, 0x33, 0x3E, 0x30, 0x1F}},
    {0x00FE, {0x00, 0x00, 0x06, 0x3E, 0x66, 0x3E, 0x06, 0x00}},
    {0x00FF, {0x00, 0x33, 0x00, 0x33, 0x33, 0x3E, 0x30, 0x1F}},
}};

}  // namespace glyphforge::detail
