#include "ncforge/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ncforge/error.hpp"
#include "ncforge/numeric.hpp"

namespace ncf {

std::vector<std::uint8_t> to_bytes(const Image& img) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.data.size()));
  for (Eigen::Index i = 0; i < img.data.size(); ++i) {
    const float v = std::clamp(img.data[i], 0.0f, 1.0f);
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
  }
  return out;
}

Image from_bytes(std::span<const std::uint8_t> bytes, int height, int width, int channels) {
  Image img(height, width, channels);
  if (bytes.size() != static_cast<std::size_t>(img.data.size()))
    throw Error(ErrorCode::DimensionMismatch, "byte count does not match image shape");
  for (std::size_t i = 0; i < bytes.size(); ++i) img.data[static_cast<Eigen::Index>(i)] = bytes[i] / 255.0f;
  return img;
}

Image resize_bilinear(const Image& img, int height, int width) {
  if (img.height == height && img.width == width) return img;
  Image out(height, width, img.channels);
  const double sy = static_cast<double>(img.height) / height;
  const double sx = static_cast<double>(img.width) / width;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(img.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(img.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < img.channels; ++c) {
        const double top = img.at(y0, x0, c) * (1 - wx) + img.at(y0, x1, c) * wx;
        const double bottom = img.at(y1, x0, c) * (1 - wx) + img.at(y1, x1, c) * wx;
        out.at(y, x, c) = static_cast<float>(top * (1 - wy) + bottom * wy);
      }
    }
  }
  return out;
}

Image to_grayscale(const Image& rgb) {
  if (rgb.channels == 1) return rgb;
  if (rgb.channels != 3) throw Error(ErrorCode::DimensionMismatch, "expected 3 channels");
  Image out(rgb.height, rgb.width, 1);
  for (int y = 0; y < rgb.height; ++y)
    for (int x = 0; x < rgb.width; ++x)
      out.at(y, x) = static_cast<float>(0.299 * rgb.at(y, x, 0) + 0.587 * rgb.at(y, x, 1) + 0.114 * rgb.at(y, x, 2));
  return out;
}

// ---- glyphs ----------------------------------------------------------------

namespace {

// Arm weights for box-drawing characters: up, down, left, right.
// 1 = light, 2 = heavy, 3 = double.
struct Arms {
  std::uint8_t up, down, left, right;
};

std::optional<Arms> box_arms(char32_t cp) {
  switch (cp) {
    case U'─': case U'┄': case U'┈': case U'╌': return Arms{0, 0, 1, 1};
    case U'━': case U'┅': case U'┉': case U'╍': return Arms{0, 0, 2, 2};
    case U'│': case U'┆': case U'┊': case U'╎': return Arms{1, 1, 0, 0};
    case U'┃': case U'┇': case U'┋': case U'╏': return Arms{2, 2, 0, 0};
    case U'┌': case U'╭': return Arms{0, 1, 0, 1};
    case U'┐': case U'╮': return Arms{0, 1, 1, 0};
    case U'└': case U'╰': return Arms{1, 0, 0, 1};
    case U'┘': case U'╯': return Arms{1, 0, 1, 0};
    case U'├': return Arms{1, 1, 0, 1};
    case U'┤': return Arms{1, 1, 1, 0};
    case U'┬': return Arms{0, 1, 1, 1};
    case U'┴': return Arms{1, 0, 1, 1};
    case U'┼': return Arms{1, 1, 1, 1};
    case U'┏': return Arms{0, 2, 0, 2};
    case U'┓': return Arms{0, 2, 2, 0};
    case U'┗': return Arms{2, 0, 0, 2};
    case U'┛': return Arms{2, 0, 2, 0};
    case U'┣': return Arms{2, 2, 0, 2};
    case U'┫': return Arms{2, 2, 2, 0};
    case U'┳': return Arms{0, 2, 2, 2};
    case U'┻': return Arms{2, 0, 2, 2};
    case U'╋': return Arms{2, 2, 2, 2};
    case U'═': return Arms{0, 0, 3, 3};
    case U'║': return Arms{3, 3, 0, 0};
    case U'╔': return Arms{0, 3, 0, 3};
    case U'╗': return Arms{0, 3, 3, 0};
    case U'╚': return Arms{3, 0, 0, 3};
    case U'╝': return Arms{3, 0, 3, 0};
    case U'╠': return Arms{3, 3, 0, 3};
    case U'╣': return Arms{3, 3, 3, 0};
    case U'╦': return Arms{0, 3, 3, 3};
    case U'╩': return Arms{3, 0, 3, 3};
    case U'╬': return Arms{3, 3, 3, 3};
    case U'╴': return Arms{0, 0, 1, 0};
    case U'╵': return Arms{1, 0, 0, 0};
    case U'╶': return Arms{0, 0, 0, 1};
    case U'╷': return Arms{0, 1, 0, 0};
    default: return std::nullopt;
  }
}

bool on_stroke(int pos, int center, std::uint8_t weight) {
  switch (weight) {
    case 1: return pos == center;
    case 2: return pos == center || pos == center + 1;
    case 3: return pos == center - 1 || pos == center + 1;
    default: return false;
  }
}

bool box_pixel(const Arms& a, int x, int y, CellSize cell) {
  const int cx = cell.width / 2;
  const int cy = cell.height / 2;
  if (x <= cx && on_stroke(y, cy, a.left)) return true;
  if (x >= cx && on_stroke(y, cy, a.right)) return true;
  if (y <= cy && on_stroke(x, cx, a.up)) return true;
  if (y >= cy && on_stroke(x, cx, a.down)) return true;
  return false;
}

std::optional<bool> block_pixel(char32_t cp, int x, int y, CellSize cell) {
  const int w = cell.width, h = cell.height;
  // Fractions are taken as integer pixel counts so the split is exact.
  auto lower = [&](int eighths) { return y >= h - (h * eighths + 4) / 8; };
  auto left = [&](int eighths) { return x < (w * eighths + 4) / 8; };
  const bool top_half = y < h / 2;
  const bool left_half = x < w / 2;
  auto quads = [&](bool ul, bool ur, bool ll, bool lr) {
    return top_half ? (left_half ? ul : ur) : (left_half ? ll : lr);
  };
  if (cp == U'▀') return top_half;
  if (cp >= U'▁' && cp <= U'▇') return lower(static_cast<int>(cp - U'▀'));
  if (cp == U'█') return true;
  if (cp >= U'▉' && cp <= U'▏') return left(static_cast<int>(U'▏' - cp) + 1);
  if (cp == U'▐') return !left_half;
  if (cp == U'░') return (x % 2 == 0) && (y % 2 == 0);
  if (cp == U'▒') return (x + y) % 2 == 0;
  if (cp == U'▓') return !((x % 2 == 1) && (y % 2 == 1));
  if (cp == U'▔') return y < (h + 4) / 8;
  if (cp == U'▕') return x >= w - (w + 4) / 8;
  switch (cp) {
    case U'▖': return quads(false, false, true, false);
    case U'▗': return quads(false, false, false, true);
    case U'▘': return quads(true, false, false, false);
    case U'▙': return quads(true, false, true, true);
    case U'▚': return quads(true, false, false, true);
    case U'▛': return quads(true, true, true, false);
    case U'▜': return quads(true, true, false, true);
    case U'▝': return quads(false, true, false, false);
    case U'▞': return quads(false, true, true, false);
    case U'▟': return quads(false, true, true, true);
    default: return std::nullopt;
  }
}

}  // namespace

bool glyph_pixel(char32_t cp, int x, int y, CellSize cell) {
  if (cp == U' ' || cp == 0xA0 || cp == 0) return false;
  if (cp > 0x20 && cp < 0x7F) {
    const int ox = (cell.width - kGlyphWidth) / 2;
    const int oy = (cell.height - kGlyphHeight) / 2;
    const int gx = x - ox, gy = y - oy;
    if (gx < 0 || gy < 0 || gx >= kGlyphWidth || gy >= kGlyphHeight) return false;
    return (detail::kAsciiFont[cp - 0x20][gy] & (0x80 >> gx)) != 0;
  }
  if (const auto arms = box_arms(cp)) return box_pixel(*arms, x, y, cell);
  if (const auto block = block_pixel(cp, x, y, cell)) return *block;
  // Replacement box: one-pixel outline inset by one pixel.
  const bool inside = x >= 1 && y >= 1 && x <= cell.width - 2 && y <= cell.height - 2;
  const bool edge = x == 1 || y == 1 || x == cell.width - 2 || y == cell.height - 2;
  return inside && edge;
}

Rgb resolve_color(const Color& c, const Theme& theme, bool foreground) {
  switch (c.kind) {
    case Color::Kind::Default:
      return foreground ? theme.foreground : theme.background;
    case Color::Kind::Indexed: {
      if (c.index < 16) return theme.ansi[c.index];
      std::uint8_t rgb[3];
      xterm_palette(c.index, rgb);
      return Rgb{rgb[0], rgb[1], rgb[2]};
    }
    case Color::Kind::Rgb:
      return Rgb{c.r, c.g, c.b};
  }
  return theme.foreground;
}

FrameTensor render_grid(const TerminalGrid& grid, const RenderOptions& opts) {
  const CellSize cell = opts.cell;
  if (cell.width < kGlyphWidth || cell.height < kGlyphHeight)
    throw Error(ErrorCode::InvalidConfig, "cell must be at least the glyph size");
  const int H = grid.height * cell.height;
  const int W = grid.width * cell.width;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(H) * W * 3);
  auto put = [&](int y, int x, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(y) * W + x) * 3;
    px[i] = c.r;
    px[i + 1] = c.g;
    px[i + 2] = c.b;
  };
  const auto& cur = grid.cursor;
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      const Cell& cl = grid.at(r, c);
      Rgb fg = resolve_color(cl.fg, opts.theme, true);
      Rgb bg = resolve_color(cl.bg, opts.theme, false);
      if (cl.attrs & kAttrInverse) std::swap(fg, bg);
      if (opts.draw_cursor && cur.visible && cur.row == r && cur.col == c) {
        bg = opts.theme.cursor;
        fg = opts.theme.cursor_accent;
      }
      const bool bold = (cl.attrs & kAttrBold) != 0 && cl.glyph > 0x20 && cl.glyph < 0x7F;
      const bool underline = (cl.attrs & kAttrUnderline) != 0;
      for (int y = 0; y < cell.height; ++y) {
        for (int x = 0; x < cell.width; ++x) {
          bool on = glyph_pixel(cl.glyph, x, y, cell);
          if (!on && bold && x > 0) on = glyph_pixel(cl.glyph, x - 1, y, cell);
          if (underline && y == cell.height - 1) on = true;
          put(r * cell.height + y, c * cell.width + x, on ? fg : bg);
        }
      }
    }
  }
  return from_bytes(px, H, W, 3);
}

// ---- letterbox -------------------------------------------------------------

LetterboxParams LetterboxParams::fit(int src_w, int src_h, int dst_w, int dst_h) {
  if (src_w < 1 || src_h < 1 || dst_w < 2 || dst_h < 2)
    throw Error(ErrorCode::InvalidConfig, "letterbox needs src >= 1 and dst >= 2 pixels");
  LetterboxParams p;
  p.src_w = src_w;
  p.src_h = src_h;
  p.dst_w = dst_w;
  p.dst_h = dst_h;
  p.scale = std::min(static_cast<double>(dst_w) / src_w, static_cast<double>(dst_h) / src_h);
  p.pad_x = (dst_w - p.scale * src_w) / 2.0;
  p.pad_y = (dst_h - p.scale * src_h) / 2.0;
  return p;
}

NormPoint letterbox_map_raw(double x_screen, double y_screen, const LetterboxParams& p) {
  if (!(x_screen >= 0.0 && x_screen < p.src_w && y_screen >= 0.0 && y_screen < p.src_h))
    throw Error(ErrorCode::OutOfSourceBounds,
                "(" + std::to_string(x_screen) + ", " + std::to_string(y_screen) + ")");
  return NormPoint{(p.scale * x_screen + p.pad_x) / (p.dst_w - 1), (p.scale * y_screen + p.pad_y) / (p.dst_h - 1)};
}

NormPoint letterbox_map(double x_screen, double y_screen, const LetterboxParams& p) {
  const NormPoint raw = letterbox_map_raw(x_screen, y_screen, p);
  return NormPoint{std::clamp(raw.x, 0.0, 1.0), std::clamp(raw.y, 0.0, 1.0)};
}

NormPoint letterbox_unmap(NormPoint pt, const LetterboxParams& p) {
  return NormPoint{(pt.x * (p.dst_w - 1) - p.pad_x) / p.scale, (pt.y * (p.dst_h - 1) - p.pad_y) / p.scale};
}

// ---- cursor ----------------------------------------------------------------

const CursorTemplate& default_arrow_template() {
  static const CursorTemplate tmpl = [] {
    static constexpr std::array<const char*, 19> kArrow = {
        "X...........", "XX..........", "XOX.........", "XOOX........", "XOOOX.......",
        "XOOOOX......", "XOOOOOX.....", "XOOOOOOX....", "XOOOOOOOX...", "XOOOOOOOOX..",
        "XOOOOOOOOOX.", "XOOOOOOXXXXX", "XOOOXOOX....", "XOOXXOOX....", "XOX..XOOX...",
        "XX...XOOX...", "X.....XOOX..", "......XOOX..", ".......XX..."};
    CursorTemplate t;
    t.height = static_cast<int>(kArrow.size());
    t.width = 12;
    t.rgb = Eigen::ArrayXf::Zero(t.height * t.width * 3);
    t.alpha = Eigen::ArrayXf::Zero(t.height * t.width);
    for (int y = 0; y < t.height; ++y) {
      for (int x = 0; x < t.width; ++x) {
        const char ch = kArrow[static_cast<std::size_t>(y)][x];
        if (ch == '.') continue;
        const float v = ch == 'O' ? 1.0f : 0.0f;
        t.alpha[y * t.width + x] = 1.0f;
        for (int c = 0; c < 3; ++c) t.rgb[(y * t.width + x) * 3 + c] = v;
      }
    }
    return t;
  }();
  return tmpl;
}

CursorLayer render_cursor_layer(std::optional<NormPoint> point, int height, int width, const CursorTemplate& tmpl) {
  CursorLayer layer;
  layer.foreground = Image(height, width, 3, 0.0f);  // neutral mid-grey in [-1,1]
  layer.mask = Image(height, width, 1, 0.0f);
  if (!point || !std::isfinite(point->x) || !std::isfinite(point->y)) return layer;
  layer.point = point;
  const double px = std::clamp(point->x, 0.0, 1.0);
  const double py = std::clamp(point->y, 0.0, 1.0);
  const auto hx = static_cast<int>(round_half_away(px * (width - 1)));
  const auto hy = static_cast<int>(round_half_away(py * (height - 1)));
  const int x0 = hx - tmpl.hot_x;
  const int y0 = hy - tmpl.hot_y;
  for (int ty = 0; ty < tmpl.height; ++ty) {
    const int y = y0 + ty;
    if (y < 0 || y >= height) continue;
    for (int tx = 0; tx < tmpl.width; ++tx) {
      const int x = x0 + tx;
      if (x < 0 || x >= width) continue;
      const float a = tmpl.alpha[ty * tmpl.width + tx];
      if (a <= 0.0f) continue;
      layer.mask.at(y, x) = a;
      for (int c = 0; c < 3; ++c) {
        const float blended = a * tmpl.rgb[(ty * tmpl.width + tx) * 3 + c] + (1.0f - a) * 0.5f;
        layer.foreground.at(y, x, c) = 2.0f * blended - 1.0f;
      }
    }
  }
  return layer;
}

ReferenceStream build_reference_stream(const FrameTensor& first_frame, std::span<const CursorLayer> layers) {
  if (layers.empty()) throw Error(ErrorCode::DimensionMismatch, "at least one layer is required");
  ReferenceStream out;
  out.ref_imgs.reserve(layers.size());
  out.ref_masks.reserve(layers.size());
  out.ref_imgs.push_back(first_frame);
  out.ref_masks.emplace_back(first_frame.height, first_frame.width, 1, 1.0f);
  for (std::size_t t = 1; t < layers.size(); ++t) {
    const auto& l = layers[t];
    if (l.foreground.height != first_frame.height || l.foreground.width != first_frame.width ||
        l.foreground.channels != first_frame.channels || l.mask.height != first_frame.height ||
        l.mask.width != first_frame.width || l.mask.channels != 1)
      throw Error(ErrorCode::DimensionMismatch, "layer " + std::to_string(t) + " does not match the first frame");
    out.ref_imgs.push_back(l.foreground);
    out.ref_masks.push_back(l.mask);
  }
  return out;
}

}  // namespace ncf
