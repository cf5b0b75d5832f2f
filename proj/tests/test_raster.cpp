#include <gtest/gtest.h>

#include "ncforge/error.hpp"
#include "ncforge/raster.hpp"
#include "ncforge/term_emu.hpp"

using namespace ncf;

TEST(Render, BlankGridIsUniformBackground) {
  RenderOptions opts;
  opts.draw_cursor = false;
  const auto f = render_grid(new_grid(2, 2), opts);
  EXPECT_EQ(f.height, 2 * kGlyphHeight);
  EXPECT_EQ(f.width, 2 * kGlyphWidth);
  const Rgb bg = opts.theme.background;
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) {
      ASSERT_EQ(f.at(y, x, 0), bg.r / 255.0f);
      ASSERT_EQ(f.at(y, x, 1), bg.g / 255.0f);
      ASSERT_EQ(f.at(y, x, 2), bg.b / 255.0f);
    }
}

TEST(Render, Deterministic) {
  const auto g = apply_output(new_grid(6, 2), "\x1b[31mab\x1b[0m c");
  EXPECT_EQ(render_grid(g), render_grid(g));
}

TEST(Render, GlyphBitmapExact) {
  RenderOptions opts;
  opts.draw_cursor = false;
  opts.theme.background = {0, 0, 0};
  opts.theme.foreground = {255, 255, 255};
  const auto g = apply_output(new_grid(2, 1), "X");
  const auto f = render_grid(g, opts);
  for (int y = 0; y < kGlyphHeight; ++y)
    for (int x = 0; x < kGlyphWidth; ++x) {
      const float want = glyph_pixel(U'X', x, y, opts.cell) ? 1.0f : 0.0f;
      for (int c = 0; c < 3; ++c) ASSERT_EQ(f.at(y, x, c), want) << x << "," << y;
    }
  int set = 0;
  for (int y = 0; y < kGlyphHeight; ++y)
    for (int x = 0; x < kGlyphWidth; ++x) set += glyph_pixel(U'X', x, y, opts.cell);
  EXPECT_GT(set, 0);
}

TEST(Render, BytesRoundTrip) {
  const auto f = render_grid(apply_output(new_grid(4, 2), "\x1b[1;32mok"));
  EXPECT_EQ(from_bytes(to_bytes(f), f.height, f.width, 3), f);
}

TEST(Letterbox, Formula) {
  auto p = LetterboxParams::fit(1024, 768, 256, 192);
  EXPECT_DOUBLE_EQ(p.scale, 0.25);
  EXPECT_DOUBLE_EQ(p.pad_x, 0.0);
  EXPECT_DOUBLE_EQ(p.pad_y, 0.0);
  const auto raw = letterbox_map_raw(1023, 767, p);
  EXPECT_DOUBLE_EQ(raw.x, 255.75 / 255.0);
  EXPECT_DOUBLE_EQ(raw.y, 191.75 / 191.0);
  const auto clamped = letterbox_map(1023, 767, p);
  EXPECT_EQ(clamped, (NormPoint{1.0, 1.0}));
  EXPECT_EQ(letterbox_map(0, 0, p), (NormPoint{0.0, 0.0}));
  EXPECT_THROW(letterbox_map_raw(1024, 0, p), Error);

  p = LetterboxParams::fit(256, 192, 256, 192);
  const auto q = letterbox_map(10, 20, p);
  EXPECT_DOUBLE_EQ(q.x, 10.0 / 255.0);
  EXPECT_DOUBLE_EQ(q.y, 20.0 / 191.0);
}

TEST(Letterbox, IdentityInverse) {
  const auto p = LetterboxParams::fit(64, 48, 64, 48);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      const auto back = letterbox_unmap(letterbox_map(x, y, p), p);
      ASSERT_EQ(std::lround(back.x), x);
      ASSERT_EQ(std::lround(back.y), y);
    }
}

TEST(Letterbox, PaddedFit) {
  const auto p = LetterboxParams::fit(100, 50, 64, 64);
  EXPECT_DOUBLE_EQ(p.scale, 0.64);
  EXPECT_DOUBLE_EQ(p.pad_x, 0.0);
  EXPECT_DOUBLE_EQ(p.pad_y, 16.0);
}

TEST(Cursor, CentredPlacement) {
  const auto& t = default_arrow_template();
  const auto layer = render_cursor_layer(NormPoint{0.5, 0.5}, 64, 64);
  const int hx = static_cast<int>(std::round(0.5 * 63)), hy = hx;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      const int tx = x - hx + t.hot_x, ty = y - hy + t.hot_y;
      const bool inside = tx >= 0 && ty >= 0 && tx < t.width && ty < t.height;
      const float want = inside ? t.alpha[ty * t.width + tx] : 0.0f;
      ASSERT_EQ(layer.mask.at(y, x), want);
      if (want == 0.0f)
        for (int c = 0; c < 3; ++c) ASSERT_EQ(layer.foreground.at(y, x, c), 0.0f);
    }
  EXPECT_GE(layer.foreground.data.minCoeff(), -1.0f);
  EXPECT_LE(layer.foreground.data.maxCoeff(), 1.0f);
}

TEST(Cursor, InvalidPointZeroMask) {
  EXPECT_EQ(render_cursor_layer(std::nullopt, 32, 32).mask.data.abs().maxCoeff(), 0.0f);
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(render_cursor_layer(NormPoint{nan, 0.5}, 32, 32).mask.data.abs().maxCoeff(), 0.0f);
}

TEST(Cursor, CornerClipped) {
  const auto& t = default_arrow_template();
  const auto layer = render_cursor_layer(NormPoint{0.0, 0.0}, 32, 32);
  float total = 0.0f;
  for (int y = 0; y < t.height; ++y)
    for (int x = 0; x < t.width; ++x) total += t.alpha[y * t.width + x];
  EXPECT_FLOAT_EQ(layer.mask.data.sum(), total);
  const auto far = render_cursor_layer(NormPoint{1.0, 1.0}, 32, 32);
  EXPECT_LT(far.mask.data.sum(), total);
  EXPECT_GT(far.mask.at(31, 31), 0.0f);
}

TEST(Reference, Stream) {
  const Image first(16, 16, 3, 0.3f);
  std::vector<CursorLayer> layers{render_cursor_layer(NormPoint{0.2, 0.2}, 16, 16),
                                  render_cursor_layer(NormPoint{0.5, 0.5}, 16, 16),
                                  render_cursor_layer(std::nullopt, 16, 16)};
  const auto ref = build_reference_stream(first, layers);
  ASSERT_EQ(ref.ref_imgs.size(), 3u);
  EXPECT_EQ(ref.ref_imgs[0], first);
  EXPECT_EQ(ref.ref_masks[0].data.minCoeff(), 1.0f);
  EXPECT_EQ(ref.ref_masks[1], layers[1].mask);
  EXPECT_EQ(ref.ref_imgs[1], layers[1].foreground);
  EXPECT_EQ(ref.ref_masks[2].data.abs().maxCoeff(), 0.0f);

  const auto single = build_reference_stream(first, std::span<const CursorLayer>(layers.data(), 1));
  ASSERT_EQ(single.ref_imgs.size(), 1u);
  EXPECT_THROW(build_reference_stream(Image(8, 8, 3), layers), Error);
}

TEST(Resize, ConstantPreservedAndIdentity) {
  Image img(7, 5, 3, 0.25f);
  const auto r = resize_bilinear(img, 13, 11);
  EXPECT_NEAR(r.data.minCoeff(), 0.25f, 1e-7);
  EXPECT_NEAR(r.data.maxCoeff(), 0.25f, 1e-7);
  Image ramp(4, 4, 1);
  for (int i = 0; i < 16; ++i) ramp.data[i] = static_cast<float>(i);
  EXPECT_EQ(resize_bilinear(ramp, 4, 4), ramp);
}
