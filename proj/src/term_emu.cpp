#include "ncforge/term_emu.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ncforge/error.hpp"
#include "ncforge/text.hpp"

namespace ncf {

namespace {

constexpr std::size_t kMaxPending = 4096;

int clamp(int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); }

struct Emulator {
  TerminalGrid& g;

  void clear_cells(int row, int col_begin, int col_end) {
    for (int c = col_begin; c < col_end; ++c) g.at(row, c) = Cell{};
  }

  void clear_rows(int row_begin, int row_end) {
    for (int r = row_begin; r < row_end; ++r) clear_cells(r, 0, g.width);
  }

  // Moves rows [top, bottom] up by n, blanking the bottom n.
  void scroll_up(int top, int bottom, int n) {
    n = std::min(n, bottom - top + 1);
    if (n <= 0) return;
    auto first = g.cells.begin() + static_cast<std::ptrdiff_t>(top) * g.width;
    auto last = g.cells.begin() + static_cast<std::ptrdiff_t>(bottom + 1) * g.width;
    std::rotate(first, first + static_cast<std::ptrdiff_t>(n) * g.width, last);
    clear_rows(bottom - n + 1, bottom + 1);
  }

  void scroll_down(int top, int bottom, int n) {
    n = std::min(n, bottom - top + 1);
    if (n <= 0) return;
    auto first = g.cells.begin() + static_cast<std::ptrdiff_t>(top) * g.width;
    auto last = g.cells.begin() + static_cast<std::ptrdiff_t>(bottom + 1) * g.width;
    std::rotate(first, last - static_cast<std::ptrdiff_t>(n) * g.width, last);
    clear_rows(top, top + n);
  }

  void move_to(int row, int col) {
    g.cursor.row = clamp(row, 0, g.height - 1);
    g.cursor.col = clamp(col, 0, g.width - 1);
    g.wrap_pending = false;
  }

  void line_feed() {
    g.wrap_pending = false;
    if (g.cursor.row == g.scroll_bottom) {
      scroll_up(g.scroll_top, g.scroll_bottom, 1);
    } else if (g.cursor.row < g.height - 1) {
      ++g.cursor.row;
    }
  }

  void reverse_index() {
    g.wrap_pending = false;
    if (g.cursor.row == g.scroll_top) {
      scroll_down(g.scroll_top, g.scroll_bottom, 1);
    } else if (g.cursor.row > 0) {
      --g.cursor.row;
    }
  }

  void put_glyph(char32_t cp) {
    if (g.wrap_pending) {
      g.cursor.col = 0;
      line_feed();
    }
    Cell cell = g.pen;
    cell.glyph = cp;
    g.at(g.cursor.row, g.cursor.col) = cell;
    if (g.cursor.col == g.width - 1) {
      g.wrap_pending = true;
    } else {
      ++g.cursor.col;
    }
  }

  void save_cursor() {
    g.saved_cursor = g.cursor;
    g.saved_pen = g.pen;
  }

  void restore_cursor() {
    g.pen = g.saved_pen;
    move_to(g.saved_cursor.row, g.saved_cursor.col);
  }

  void full_reset() {
    TerminalGrid fresh = new_grid(g.width, g.height);
    g = std::move(fresh);
  }

  void control(unsigned char c) {
    switch (c) {
      case '\r':
        g.cursor.col = 0;
        g.wrap_pending = false;
        break;
      case '\n':
      case '\v':
      case '\f':
        line_feed();
        break;
      case '\b':
        if (g.cursor.col > 0) --g.cursor.col;
        g.wrap_pending = false;
        break;
      case '\t':
        g.cursor.col = std::min(g.width - 1, (g.cursor.col / 8 + 1) * 8);
        g.wrap_pending = false;
        break;
      default:
        break;  // BEL, SO/SI, NUL and the rest are ignored
    }
  }

  // Parameter groups separated by ';'; each group may carry ':' sub-parameters.
  // A missing number is -1.
  using Groups = std::vector<std::vector<int>>;

  static Groups parse_params(std::string_view p) {
    Groups groups(1);
    int value = -1;
    for (char ch : p) {
      if (ch >= '0' && ch <= '9') {
        value = (value < 0 ? 0 : value);
        if (value < 100000) value = value * 10 + (ch - '0');
      } else if (ch == ';') {
        groups.back().push_back(value);
        groups.emplace_back();
        value = -1;
      } else if (ch == ':') {
        groups.back().push_back(value);
        value = -1;
      }
    }
    groups.back().push_back(value);
    return groups;
  }

  static int param(const Groups& groups, std::size_t i, int fallback) {
    if (i >= groups.size() || groups[i].empty() || groups[i][0] < 0) return fallback;
    return groups[i][0];
  }

  static std::uint8_t to_byte(int v) { return static_cast<std::uint8_t>(clamp(v, 0, 255)); }

  // Reads an extended colour starting at groups[i] (38 or 48). Returns the
  // number of extra top-level groups consumed.
  static std::size_t extended_color(const Groups& groups, std::size_t i, std::optional<Color>& out) {
    const auto& head = groups[i];
    if (head.size() > 1) {  // colon form: 38:5:n, 38:2:r:g:b or 38:2:cs:r:g:b
      if (head[1] == 5 && head.size() >= 3) {
        out = Color::indexed(to_byte(head[2]));
      } else if (head[1] == 2 && head.size() >= 5) {
        const std::size_t off = head.size() >= 6 ? 3 : 2;
        out = Color::rgb(to_byte(head[off]), to_byte(head[off + 1]), to_byte(head[off + 2]));
      }
      return 0;
    }
    const int mode = param(groups, i + 1, -1);
    if (mode == 5) {
      if (i + 2 < groups.size()) out = Color::indexed(to_byte(param(groups, i + 2, 0)));
      return std::min<std::size_t>(2, groups.size() - i - 1);
    }
    if (mode == 2) {
      if (i + 4 < groups.size())
        out = Color::rgb(to_byte(param(groups, i + 2, 0)), to_byte(param(groups, i + 3, 0)),
                         to_byte(param(groups, i + 4, 0)));
      return std::min<std::size_t>(4, groups.size() - i - 1);
    }
    return groups.size() - i - 1;  // unknown colour space: drop the rest
  }

  void sgr(const Groups& groups) {
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const int p = groups[i].empty() ? -1 : groups[i][0];
      if (p <= 0) {
        g.pen = Cell{};
      } else if (p == 1) {
        g.pen.attrs |= kAttrBold;
      } else if (p == 4) {
        g.pen.attrs |= kAttrUnderline;
      } else if (p == 7) {
        g.pen.attrs |= kAttrInverse;
      } else if (p == 22) {
        g.pen.attrs &= ~kAttrBold;
      } else if (p == 24) {
        g.pen.attrs &= ~kAttrUnderline;
      } else if (p == 27) {
        g.pen.attrs &= ~kAttrInverse;
      } else if (p >= 30 && p <= 37) {
        g.pen.fg = Color::indexed(static_cast<std::uint8_t>(p - 30));
      } else if (p == 39) {
        g.pen.fg = Color{};
      } else if (p >= 40 && p <= 47) {
        g.pen.bg = Color::indexed(static_cast<std::uint8_t>(p - 40));
      } else if (p == 49) {
        g.pen.bg = Color{};
      } else if (p >= 90 && p <= 97) {
        g.pen.fg = Color::indexed(static_cast<std::uint8_t>(p - 90 + 8));
      } else if (p >= 100 && p <= 107) {
        g.pen.bg = Color::indexed(static_cast<std::uint8_t>(p - 100 + 8));
      } else if (p == 38 || p == 48) {
        std::optional<Color> color;
        i += extended_color(groups, i, color);
        if (color) (p == 38 ? g.pen.fg : g.pen.bg) = *color;
      }
    }
  }

  void enter_alt_screen(bool save) {
    if (g.main_screen) return;
    if (save) save_cursor();
    g.main_screen = g.cells;
    clear_rows(0, g.height);
  }

  void leave_alt_screen(bool restore) {
    if (!g.main_screen) return;
    g.cells = std::move(*g.main_screen);
    g.main_screen.reset();
    if (restore) restore_cursor();
  }

  void private_mode(const Groups& groups, bool set) {
    for (const auto& grp : groups) {
      const int mode = grp.empty() ? -1 : grp[0];
      switch (mode) {
        case 25:
          g.cursor.visible = set;
          break;
        case 1049:
          set ? enter_alt_screen(true) : leave_alt_screen(true);
          break;
        case 47:
        case 1047:
          set ? enter_alt_screen(false) : leave_alt_screen(false);
          break;
        default:
          break;
      }
    }
  }

  void csi(std::string_view params, char prefix, std::string_view intermediates, char final_byte) {
    const Groups p = parse_params(params);
    if (prefix == '?') {
      if (intermediates.empty() && (final_byte == 'h' || final_byte == 'l')) private_mode(p, final_byte == 'h');
      return;
    }
    if (prefix != 0 || !intermediates.empty()) return;  // '>', '=', '<' and intermediates unsupported
    const int n = std::max(1, param(p, 0, 1));
    auto& cur = g.cursor;
    switch (final_byte) {
      case 'H':
      case 'f':
        move_to(param(p, 0, 1) - 1, param(p, 1, 1) - 1);
        break;
      case 'A':
        move_to(cur.row - n, cur.col);
        break;
      case 'B':
      case 'e':
        move_to(cur.row + n, cur.col);
        break;
      case 'C':
      case 'a':
        move_to(cur.row, cur.col + n);
        break;
      case 'D':
        move_to(cur.row, cur.col - n);
        break;
      case 'E':
        move_to(cur.row + n, 0);
        break;
      case 'F':
        move_to(cur.row - n, 0);
        break;
      case 'G':
      case '`':
        move_to(cur.row, param(p, 0, 1) - 1);
        break;
      case 'd':
        move_to(param(p, 0, 1) - 1, cur.col);
        break;
      case 'J':
        switch (param(p, 0, 0)) {
          case 0:
            clear_cells(cur.row, cur.col, g.width);
            clear_rows(cur.row + 1, g.height);
            break;
          case 1:
            clear_rows(0, cur.row);
            clear_cells(cur.row, 0, cur.col + 1);
            break;
          case 2:
            clear_rows(0, g.height);
            break;
          default:
            break;  // 3: scroll-back only, which is not modelled
        }
        g.wrap_pending = false;
        break;
      case 'K':
        switch (param(p, 0, 0)) {
          case 0:
            clear_cells(cur.row, cur.col, g.width);
            break;
          case 1:
            clear_cells(cur.row, 0, cur.col + 1);
            break;
          case 2:
            clear_cells(cur.row, 0, g.width);
            break;
          default:
            break;
        }
        g.wrap_pending = false;
        break;
      case 'X':
        clear_cells(cur.row, cur.col, std::min(g.width, cur.col + n));
        break;
      case 'P': {
        auto row = g.cells.begin() + static_cast<std::ptrdiff_t>(cur.row) * g.width;
        const int k = std::min(n, g.width - cur.col);
        std::rotate(row + cur.col, row + cur.col + k, row + g.width);
        clear_cells(cur.row, g.width - k, g.width);
        break;
      }
      case '@': {
        auto row = g.cells.begin() + static_cast<std::ptrdiff_t>(cur.row) * g.width;
        const int k = std::min(n, g.width - cur.col);
        std::rotate(row + cur.col, row + g.width - k, row + g.width);
        clear_cells(cur.row, cur.col, cur.col + k);
        break;
      }
      case 'L':
        if (cur.row >= g.scroll_top && cur.row <= g.scroll_bottom) scroll_down(cur.row, g.scroll_bottom, n);
        break;
      case 'M':
        if (cur.row >= g.scroll_top && cur.row <= g.scroll_bottom) scroll_up(cur.row, g.scroll_bottom, n);
        break;
      case 'S':
        scroll_up(g.scroll_top, g.scroll_bottom, n);
        break;
      case 'T':
        scroll_down(g.scroll_top, g.scroll_bottom, n);
        break;
      case 'm':
        sgr(p);
        break;
      case 'r': {
        const int top = param(p, 0, 1) - 1;
        const int bottom = param(p, 1, g.height) - 1;
        if (top >= 0 && bottom < g.height && top < bottom) {
          g.scroll_top = top;
          g.scroll_bottom = bottom;
        } else {
          g.scroll_top = 0;
          g.scroll_bottom = g.height - 1;
        }
        move_to(0, 0);
        break;
      }
      case 's':
        save_cursor();
        break;
      case 'u':
        restore_cursor();
        break;
      default:
        break;
    }
  }

  // Handles the escape sequence at buf[i] (buf[i] == ESC). Returns the index
  // after it, or npos when the sequence is incomplete.
  std::size_t escape(std::string_view buf, std::size_t i) {
    constexpr auto npos = std::string_view::npos;
    if (i + 1 >= buf.size()) return npos;
    const char kind = buf[i + 1];
    // ESC, CAN and SUB abort whatever sequence is in progress; a new ESC starts over.
    auto aborts = [](char ch) { return ch == '\x1b' || ch == '\x18' || ch == '\x1a'; };
    if (aborts(kind)) return kind == '\x1b' ? i + 1 : i + 2;
    switch (kind) {
      case '[': {
        std::size_t j = i + 2;
        char prefix = 0;
        if (j < buf.size() && (buf[j] == '?' || buf[j] == '>' || buf[j] == '=' || buf[j] == '<')) prefix = buf[j++];
        const std::size_t param_begin = j;
        while (j < buf.size() && static_cast<unsigned char>(buf[j]) >= 0x30 && static_cast<unsigned char>(buf[j]) <= 0x3F) ++j;
        const std::size_t param_end = j;
        while (j < buf.size() && static_cast<unsigned char>(buf[j]) >= 0x20 && static_cast<unsigned char>(buf[j]) <= 0x2F) ++j;
        const std::size_t inter_end = j;
        // Malformed sequences are skipped up to the next final byte.
        bool malformed = false;
        while (j < buf.size() && !aborts(buf[j]) &&
               !(static_cast<unsigned char>(buf[j]) >= 0x40 && static_cast<unsigned char>(buf[j]) <= 0x7E)) {
          malformed = true;
          ++j;
        }
        if (j >= buf.size()) return npos;
        if (aborts(buf[j])) return buf[j] == '\x1b' ? j : j + 1;
        if (!malformed)
          csi(buf.substr(param_begin, param_end - param_begin), prefix, buf.substr(param_end, inter_end - param_end), buf[j]);
        return j + 1;
      }
      case ']':
      case 'P':
      case '_':
      case '^':
      case 'X': {
        // String sequences end at BEL (OSC only) or ST (ESC \).
        for (std::size_t j = i + 2; j < buf.size(); ++j) {
          if (buf[j] == '\a' && kind == ']') return j + 1;
          if (buf[j] == '\x18' || buf[j] == '\x1a') return j + 1;
          if (buf[j] == '\x1b') {
            if (j + 1 >= buf.size()) return npos;
            // ST, or any other ESC ends the string and starts a new sequence
            return buf[j + 1] == '\\' ? j + 2 : j;
          }
        }
        return npos;
      }
      case '(':
      case ')':
      case '*':
      case '+':
      case '-':
      case '.':
      case '/':
      case '#':
      case '%':
      case ' ':
        if (i + 2 >= buf.size()) return npos;
        if (aborts(buf[i + 2])) return buf[i + 2] == '\x1b' ? i + 2 : i + 3;
        return i + 3;
      case '7':
        save_cursor();
        return i + 2;
      case '8':
        restore_cursor();
        return i + 2;
      case 'c':
        full_reset();
        return i + 2;
      case 'D':
        line_feed();
        return i + 2;
      case 'E':
        g.cursor.col = 0;
        line_feed();
        return i + 2;
      case 'M':
        reverse_index();
        return i + 2;
      default:
        return i + 2;
    }
  }

  void run(std::string_view payload) {
    std::string buf;
    std::string_view view = payload;
    if (!g.pending.empty()) {
      buf = std::move(g.pending);
      buf.append(payload);
      view = buf;
    }
    g.pending.clear();
    std::size_t i = 0;
    while (i < view.size()) {
      const auto c = static_cast<unsigned char>(view[i]);
      if (c == 0x1b) {
        const std::size_t next = escape(view, i);
        if (next == std::string_view::npos) {
          if (view.size() - i <= kMaxPending) g.pending.assign(view.substr(i));
          return;
        }
        i = next;
      } else if (c < 0x20) {
        control(c);
        ++i;
      } else if (c == 0x7F) {
        ++i;
      } else if (c < 0x80) {
        put_glyph(c);
        ++i;
      } else {
        const int len = (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 1;
        if (i + len > view.size()) {
          // Keep a truncated multi-byte sequence for the next payload if it is still plausible.
          bool plausible = len > 1;
          for (std::size_t k = i + 1; k < view.size(); ++k)
            plausible = plausible && (static_cast<unsigned char>(view[k]) & 0xC0) == 0x80;
          if (plausible) {
            g.pending.assign(view.substr(i));
            return;
          }
        }
        const std::size_t take = std::min<std::size_t>(len, view.size() - i);
        const std::u32string cps = utf8_decode(view.substr(i, take));
        const char32_t cp = cps.empty() ? U'�' : cps.front();
        if (cps.size() == 1) {
          i += take;
        } else {
          ++i;  // invalid sequence: consume one byte, emit U+FFFD
        }
        if (cp >= 0x80 && cp < 0xA0) continue;  // C1 controls are dropped
        put_glyph(cps.size() == 1 ? cp : U'�');
      }
    }
  }
};

}  // namespace

TerminalGrid new_grid(int width, int height) {
  if (width < 1 || height < 1)
    throw Error(ErrorCode::ZeroDimension, std::to_string(width) + "x" + std::to_string(height));
  TerminalGrid g;
  g.width = width;
  g.height = height;
  g.cells.assign(static_cast<std::size_t>(width) * height, Cell{});
  g.scroll_bottom = height - 1;
  return g;
}

void feed(TerminalGrid& grid, std::string_view payload) { Emulator{grid}.run(payload); }

bool is_blank(const TerminalGrid& grid) {
  return std::all_of(grid.cells.begin(), grid.cells.end(), [](const Cell& c) { return c.glyph == U' '; });
}

std::string row_text(const TerminalGrid& grid, int row) {
  std::string out;
  out.reserve(grid.width);
  for (int c = 0; c < grid.width; ++c) utf8_append(out, grid.at(row, c).glyph);
  return out;
}

std::vector<std::string> grid_to_lines(const TerminalGrid& grid) {
  std::vector<std::string> lines;
  for (int r = 0; r < grid.height; ++r) {
    auto line = normalize_line(row_text(grid, r));
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::size_t replay_frame_count(double last_time, double fps) {
  if (!(fps > 0.0) || !std::isfinite(fps)) throw Error(ErrorCode::InvalidConfig, "fps must be positive");
  if (last_time <= 0.0) return 1;
  // Smallest i with i / fps >= last_time, using the same expression as sampling.
  auto n = static_cast<std::size_t>(std::ceil(last_time * fps));
  while (n > 0 && static_cast<double>(n - 1) / fps >= last_time) --n;
  while (static_cast<double>(n) / fps < last_time) ++n;
  return n + 1;
}

namespace {

bool parse_resize(std::string_view payload, int& cols, int& rows) {
  const auto x = payload.find('x');
  if (x == std::string_view::npos) return false;
  const auto a = std::from_chars(payload.data(), payload.data() + x, cols);
  const auto b = std::from_chars(payload.data() + x + 1, payload.data() + payload.size(), rows);
  return a.ec == std::errc{} && b.ec == std::errc{} && a.ptr == payload.data() + x &&
         b.ptr == payload.data() + payload.size() && cols >= 1 && rows >= 1 && cols <= 10000 && rows <= 10000;
}

}  // namespace

std::vector<ReplayFrame> replay(const CastRecording& rec, double fps) {
  const std::size_t count = replay_frame_count(rec.duration(), fps);
  std::vector<ReplayFrame> frames;
  frames.reserve(count);
  TerminalGrid grid = new_grid(rec.header.width, rec.header.height);
  std::size_t next = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / fps;
    while (next < rec.events.size() && rec.events[next].time <= t) {
      const auto& ev = rec.events[next++];
      if (ev.kind == EventKind::Output) {
        feed(grid, ev.payload);
      } else if (ev.tag == "r") {
        int cols = 0, rows = 0;
        if (parse_resize(ev.payload, cols, rows)) grid = new_grid(cols, rows);
      }
    }
    frames.push_back({t, grid});
  }
  return frames;
}

void xterm_palette(std::uint8_t index, std::uint8_t rgb[3]) {
  static constexpr std::uint8_t kBase16[16][3] = {
      {0, 0, 0},     {205, 0, 0},   {0, 205, 0},   {205, 205, 0},   {0, 0, 238},     {205, 0, 205},
      {0, 205, 205}, {229, 229, 229}, {127, 127, 127}, {255, 0, 0}, {0, 255, 0},     {255, 255, 0},
      {92, 92, 255}, {255, 0, 255}, {0, 255, 255}, {255, 255, 255}};
  if (index < 16) {
    std::copy_n(kBase16[index], 3, rgb);
  } else if (index < 232) {
    static constexpr std::uint8_t kLevels[6] = {0, 95, 135, 175, 215, 255};
    const int i = index - 16;
    rgb[0] = kLevels[i / 36];
    rgb[1] = kLevels[(i / 6) % 6];
    rgb[2] = kLevels[i % 6];
  } else {
    const auto v = static_cast<std::uint8_t>(8 + 10 * (index - 232));
    rgb[0] = rgb[1] = rgb[2] = v;
  }
}

}  // namespace ncf
