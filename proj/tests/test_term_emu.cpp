#include <gtest/gtest.h>

#include "ncforge/error.hpp"
#include "ncforge/io.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/term_emu.hpp"

using namespace ncf;

namespace {

std::string random_payload(SeededRng& rng, std::size_t n) {
  static const std::vector<std::string> pieces = {
      "a", "Z", " ", "\r\n", "\n", "\t", "\b", "\x1b[31m", "\x1b[0m", "\x1b[1;4;7m", "\x1b[38;2;1;2;3m",
      "\x1b[48;5;200m", "\x1b[5;7H", "\x1b[K", "\x1b[2J", "\x1b[A", "\x1b[3C", "\x1b[?1049h", "\x1b[?1049l",
      "\x1b[2;4r", "\x1bM", "\x1b" "7", "\x1b" "8", "é", "█", "\x1b]0;title\x07", "\x1b[?25l", "\x1b[L", "\x1b[P"};
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.below(10) == 0) {
      out.push_back(static_cast<char>(rng.below(256)));
    } else {
      out += pieces[rng.below(pieces.size())];
    }
  }
  return out;
}

}  // namespace

TEST(Grid, NewGrid) {
  const auto g = new_grid(80, 24);
  EXPECT_EQ(g.width, 80);
  EXPECT_EQ(g.height, 24);
  EXPECT_TRUE(is_blank(g));
  EXPECT_EQ(g.cursor, (Cursor{0, 0, true}));
  EXPECT_TRUE(is_blank(new_grid(1, 1)));
  EXPECT_THROW(new_grid(0, 24), Error);
  EXPECT_THROW(new_grid(5, 0), Error);
}

TEST(Feed, PlainText) {
  const auto g = apply_output(new_grid(10, 3), "ab");
  EXPECT_EQ(g.at(0, 0).glyph, U'a');
  EXPECT_EQ(g.at(0, 1).glyph, U'b');
  EXPECT_EQ(g.cursor.row, 0);
  EXPECT_EQ(g.cursor.col, 2);
}

TEST(Feed, TruecolorForeground) {
  const auto g = apply_output(new_grid(10, 3), "\x1b[38;2;16;131;236mX");
  EXPECT_EQ(g.at(0, 0).glyph, U'X');
  EXPECT_EQ(g.at(0, 0).fg, Color::rgb(16, 131, 236));
}

TEST(Feed, ClearOnBlankGrid) {
  const auto g = apply_output(new_grid(80, 24), "\x1b[H\x1b[2J\x1b[3J");
  EXPECT_TRUE(is_blank(g));
  EXPECT_EQ(g.cursor.row, 0);
  EXPECT_EQ(g.cursor.col, 0);
}

TEST(Feed, ClearOnFuzzedGrids) {
  SeededRng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = apply_output(new_grid(1 + rng.below(40), 1 + rng.below(12)), random_payload(rng, 60));
    g = apply_output(g, "\x1b[H\x1b[2J\x1b[3J");
    ASSERT_TRUE(is_blank(g)) << trial;
    ASSERT_EQ(g.cursor.row, 0);
    ASSERT_EQ(g.cursor.col, 0);
  }
}

TEST(Feed, SplitPayloadsMatchWhole) {
  SeededRng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::string payload = random_payload(rng, 40);
    const auto whole = apply_output(new_grid(20, 6), payload);
    auto pieces = new_grid(20, 6);
    std::size_t i = 0;
    while (i < payload.size()) {
      const std::size_t n = 1 + rng.below(5);
      feed(pieces, std::string_view(payload).substr(i, n));
      i += n;
    }
    ASSERT_EQ(pieces, whole) << trial;
  }
}

TEST(Feed, CursorStaysInBounds) {
  SeededRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = apply_output(new_grid(1 + rng.below(30), 1 + rng.below(10)), random_payload(rng, 80));
    ASSERT_GE(g.cursor.row, 0);
    ASSERT_LT(g.cursor.row, g.height);
    ASSERT_GE(g.cursor.col, 0);
    ASSERT_LT(g.cursor.col, g.width);
    ASSERT_EQ(g.cells.size(), static_cast<std::size_t>(g.width * g.height));
  }
}

TEST(Feed, WrapAndScroll) {
  auto g = apply_output(new_grid(3, 2), "abcdefg");
  EXPECT_EQ(row_text(g, 0), "def");
  EXPECT_EQ(row_text(g, 1), "g  ");
}

TEST(Lines, Normalization) {
  auto g = apply_output(new_grid(12, 4), "  ls   -l  ");
  EXPECT_EQ(grid_to_lines(g), std::vector<std::string>{"ls -l"});
  EXPECT_TRUE(grid_to_lines(new_grid(5, 5)).empty());
  g = apply_output(new_grid(5, 3), "a\r\n\r\nb");
  EXPECT_EQ(grid_to_lines(g), (std::vector<std::string>{"a", "b"}));
}

TEST(Replay, SingleEventTimeline) {
  CastRecording rec;
  rec.header.width = 5;
  rec.header.height = 2;
  rec.events.push_back(make_event(0.5, "o", "x"));
  const auto frames = replay(rec, 15.0);
  ASSERT_EQ(frames.size(), 9u);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const bool expect_x = static_cast<double>(i) / 15.0 >= 0.5;
    EXPECT_EQ(frames[i].grid.at(0, 0).glyph == U'x', expect_x) << i;
  }
  EXPECT_EQ(replay_frame_count(0.5, 15.0), 9u);
}

TEST(Replay, EmptyRecording) {
  CastRecording rec;
  const auto frames = replay(rec, 15.0);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].time, 0.0);
  EXPECT_TRUE(is_blank(frames[0].grid));
  EXPECT_THROW(replay(rec, 0.0), Error);
}

TEST(Replay, ExcerptClearedAtSecondFrame) {
  const auto rec = parse_cast(read_text_file(std::string(FIXTURE_DIR) + "/c1_excerpt.cast"));
  const auto frames = replay(rec, 15.0);
  ASSERT_GE(frames.size(), 3u);
  EXPECT_NEAR(frames[2].time, 0.133, 1e-3);
  EXPECT_TRUE(is_blank(frames[2].grid));
  EXPECT_FALSE(is_blank(frames.back().grid));
}

TEST(Replay, ResizeEvent) {
  CastRecording rec;
  rec.header.width = 5;
  rec.header.height = 2;
  rec.events.push_back(make_event(0.0, "o", "x"));
  rec.events.push_back(make_event(0.1, "r", "8x3"));
  const auto frames = replay(rec, 10.0);
  EXPECT_EQ(frames.front().grid.width, 5);
  EXPECT_EQ(frames.back().grid.width, 8);
  EXPECT_EQ(frames.back().grid.height, 3);
}
