#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ncf {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// Parses "#rrggbb" (or "rrggbb"); nullopt otherwise.
std::optional<Rgb> parse_hex_color(std::string_view text);
std::string to_hex(Rgb c);

// Terminal colour theme: default fg/bg, the 16 ANSI colours and cursor/selection colours.
struct Theme {
  std::string name = "ncforge-dark";
  Rgb background{0x1e, 0x1e, 0x2e};
  Rgb foreground{0xff, 0xff, 0xff};
  // black, red, green, yellow, blue, purple, cyan, white, then the bright variants
  std::array<Rgb, 16> ansi{{{0x45, 0x47, 0x5a}, {0xf3, 0x8b, 0xa8}, {0xa6, 0xe3, 0xa1}, {0xf9, 0xe2, 0xaf},
                            {0x89, 0xb4, 0xfa}, {0xcb, 0xa6, 0xf7}, {0x94, 0xe2, 0xd5}, {0xff, 0xff, 0xff},
                            {0x58, 0x5b, 0x70}, {0xf3, 0x8b, 0xa8}, {0xa6, 0xe3, 0xa1}, {0xf9, 0xe2, 0xaf},
                            {0x89, 0xb4, 0xfa}, {0xcb, 0xa6, 0xf7}, {0x89, 0xdc, 0xeb}, {0xff, 0xff, 0xff}}};
  Rgb cursor{0xf5, 0xc2, 0xe7};
  Rgb cursor_accent{0x1e, 0x1e, 0x2e};
  Rgb selection_background{0x58, 0x5b, 0x70};

  bool operator==(const Theme&) const = default;
};

// JSON keys of the 16 ANSI entries, in palette order.
extern const std::array<const char*, 16> kThemeAnsiKeys;

}  // namespace ncf
