#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ncforge/term_emu.hpp"
#include "ncforge/theme.hpp"

namespace ncf {

// Row-major (y, x, c) image with float samples. FrameTensor frames hold RGB in
// [0,1]; cursor foregrounds hold RGB in [-1,1]; masks are single-channel [0,1].
struct Image {
  int height = 0;
  int width = 0;
  int channels = 3;
  Eigen::ArrayXf data;

  Image() = default;
  Image(int h, int w, int c, float fill = 0.0f)
      : height(h), width(w), channels(c), data(Eigen::ArrayXf::Constant(static_cast<Eigen::Index>(h) * w * c, fill)) {}

  Eigen::Index index(int y, int x, int c = 0) const {
    return (static_cast<Eigen::Index>(y) * width + x) * channels + c;
  }
  float& at(int y, int x, int c = 0) { return data[index(y, x, c)]; }
  float at(int y, int x, int c = 0) const { return data[index(y, x, c)]; }

  bool same_shape(const Image& o) const { return height == o.height && width == o.width && channels == o.channels; }
  bool operator==(const Image& o) const { return same_shape(o) && (data == o.data).all(); }
};

using FrameTensor = Image;

// 8-bit quantization used for frame blocks on disk; exact for frames produced by render_grid.
std::vector<std::uint8_t> to_bytes(const Image& img);
Image from_bytes(std::span<const std::uint8_t> bytes, int height, int width, int channels);

// Bilinear resize with half-pixel centres (matches align_corners=false).
Image resize_bilinear(const Image& img, int height, int width);

// BT.601 luma of an RGB image; single-channel output.
Image to_grayscale(const Image& rgb);

// ---- terminal rendering -------------------------------------------------

namespace detail {
extern const std::uint8_t kAsciiFont[95][12];
}

inline constexpr int kGlyphWidth = 8;
inline constexpr int kGlyphHeight = 12;

struct CellSize {
  int width = kGlyphWidth;
  int height = kGlyphHeight;
};

// Whether the glyph covers pixel (x, y) of a cell. Printable ASCII comes from
// the embedded bitmap font, box-drawing (U+2500..257F) and block elements
// (U+2580..259F) are drawn procedurally, and anything else falls back to a
// hollow replacement box.
bool glyph_pixel(char32_t cp, int x, int y, CellSize cell);

struct RenderOptions {
  Theme theme;
  CellSize cell;
  bool draw_cursor = true;
};

Rgb resolve_color(const Color& c, const Theme& theme, bool foreground);

// Frame of grid.height*cell.height by grid.width*cell.width pixels. All
// compositing is integer RGB; the float frame is the 8-bit result / 255.
FrameTensor render_grid(const TerminalGrid& grid, const RenderOptions& opts = {});

// ---- screen coordinates --------------------------------------------------

struct LetterboxParams {
  double scale = 1.0;
  double pad_x = 0.0;
  double pad_y = 0.0;
  int src_w = 1, src_h = 1;
  int dst_w = 1, dst_h = 1;

  // Uniform scale min(dst/src) with the scaled content centred.
  static LetterboxParams fit(int src_w, int src_h, int dst_w, int dst_h);
};

struct NormPoint {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const NormPoint&) const = default;
};

// x = (s*x_screen + p_x) / (w_dst - 1), likewise for y, without clamping.
// Throws OutOfSourceBounds for coordinates outside [0, w_src) x [0, h_src).
NormPoint letterbox_map_raw(double x_screen, double y_screen, const LetterboxParams& p);

// letterbox_map_raw clamped to [0,1]^2.
NormPoint letterbox_map(double x_screen, double y_screen, const LetterboxParams& p);

// Screen coordinates for a normalized point (inverse of letterbox_map_raw).
NormPoint letterbox_unmap(NormPoint pt, const LetterboxParams& p);

// ---- cursor layers ---------------------------------------------------------

struct CursorTemplate {
  int height = 0;
  int width = 0;
  Eigen::ArrayXf rgb;    // height*width*3 in [0,1]
  Eigen::ArrayXf alpha;  // height*width in [0,1]
  int hot_x = 0;
  int hot_y = 0;
};

// 12x19 arrow, black outline with white fill, hotspot at the tip (0,0).
const CursorTemplate& default_arrow_template();

struct CursorLayer {
  FrameTensor foreground;  // RGB in [-1,1], mid-grey (0) where the arrow is absent
  Image mask;              // 1 channel, template alpha
  std::optional<NormPoint> point;
};

// Places the template hotspot at (round(x*(W-1)), round(y*(H-1))), clipped to
// the canvas. An absent or non-finite point yields an all-zero mask.
CursorLayer render_cursor_layer(std::optional<NormPoint> point, int height, int width,
                                const CursorTemplate& tmpl = default_arrow_template());

struct ReferenceStream {
  std::vector<Image> ref_imgs;
  std::vector<Image> ref_masks;
};

// ref_imgs[0] = first_frame with an all-ones mask; for t > 0 the cursor
// foreground and mask of layers[t]. Throws DimensionMismatch.
ReferenceStream build_reference_stream(const FrameTensor& first_frame, std::span<const CursorLayer> layers);

}  // namespace ncf
