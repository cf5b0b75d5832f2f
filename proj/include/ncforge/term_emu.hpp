#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncforge/cast_io.hpp"

namespace ncf {

struct Color {
  enum class Kind : std::uint8_t { Default, Indexed, Rgb };
  Kind kind = Kind::Default;
  std::uint8_t index = 0;
  std::uint8_t r = 0, g = 0, b = 0;

  static constexpr Color default_color() { return {}; }
  static constexpr Color indexed(std::uint8_t i) { return {Kind::Indexed, i, 0, 0, 0}; }
  static constexpr Color rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) { return {Kind::Rgb, 0, r, g, b}; }

  bool operator==(const Color&) const = default;
};

enum Attr : std::uint8_t {
  kAttrBold = 1 << 0,
  kAttrUnderline = 1 << 1,
  kAttrInverse = 1 << 2,
};

struct Cell {
  char32_t glyph = U' ';
  Color fg;
  Color bg;
  std::uint8_t attrs = 0;

  bool operator==(const Cell&) const = default;
  bool blank() const { return glyph == U' ' && *this == Cell{}; }
};

struct Cursor {
  int row = 0;
  int col = 0;
  bool visible = true;
  bool operator==(const Cursor&) const = default;
};

// Screen state of the emulator. Everything needed to continue parsing a split
// escape sequence lives here too, so feeding a payload in pieces gives the
// same grid as feeding it whole.
struct TerminalGrid {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;  // row-major, height x width
  Cursor cursor;
  Cell pen;

  bool wrap_pending = false;
  int scroll_top = 0;
  int scroll_bottom = 0;  // inclusive
  Cursor saved_cursor;
  Cell saved_pen;
  std::optional<std::vector<Cell>> main_screen;  // set while the alternate screen is active
  std::string pending;                           // incomplete escape or UTF-8 tail

  Cell& at(int row, int col) { return cells[static_cast<std::size_t>(row) * width + col]; }
  const Cell& at(int row, int col) const { return cells[static_cast<std::size_t>(row) * width + col]; }

  bool operator==(const TerminalGrid&) const = default;
};

// Throws ZeroDimension when either side is < 1.
TerminalGrid new_grid(int width, int height);

// In-place transition; total on arbitrary bytes.
void feed(TerminalGrid& grid, std::string_view payload);

inline TerminalGrid apply_output(TerminalGrid grid, std::string_view payload) {
  feed(grid, payload);
  return grid;
}

bool is_blank(const TerminalGrid& grid);

// Raw glyphs of one row, including trailing blanks.
std::string row_text(const TerminalGrid& grid, int row);

// Rows normalized for text-space comparison; empty rows dropped.
std::vector<std::string> grid_to_lines(const TerminalGrid& grid);

struct ReplayFrame {
  double time = 0.0;
  TerminalGrid grid;
};

// Samples the screen at t = i / fps for i = 0..N, where N is the first index
// whose sample time reaches the last event; each sample reflects every Output
// event with time <= t. Resize events ("r", payload "COLSxROWS") recreate the
// grid at the new geometry. Throws InvalidConfig for fps <= 0.
std::vector<ReplayFrame> replay(const CastRecording& rec, double fps);

// Number of samples replay() produces for a recording whose last event is at `last_time`.
std::size_t replay_frame_count(double last_time, double fps);

// Standard xterm 256-colour palette entry for index >= 16 (0..15 come from a theme).
void xterm_palette(std::uint8_t index, std::uint8_t rgb[3]);

}  // namespace ncf
