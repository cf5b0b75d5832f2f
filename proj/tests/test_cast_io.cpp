#include <gtest/gtest.h>

#include "ncforge/cast_io.hpp"
#include "ncforge/error.hpp"
#include "ncforge/io.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/text.hpp"

using namespace ncf;

namespace {

std::string fixture(const char* name) { return read_text_file(std::string(FIXTURE_DIR) + "/" + name); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ncf::Error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(CastParse, ExcerptHeaderAndEvents) {
  const auto rec = parse_cast(fixture("c1_excerpt.cast"));
  EXPECT_EQ(rec.header.version, 2);
  EXPECT_EQ(rec.header.width, 80);
  EXPECT_EQ(rec.header.height, 24);
  ASSERT_TRUE(rec.header.timestamp);
  EXPECT_EQ(*rec.header.timestamp, 1747177906.0);
  ASSERT_TRUE(rec.header.env);
  EXPECT_EQ(rec.header.env->at("TERM"), "xterm-256color");
  ASSERT_EQ(rec.events.size(), 3u);
  EXPECT_EQ(rec.events[0].time, 0.082492);
  EXPECT_EQ(rec.events[1].time, 0.950038);
  EXPECT_EQ(rec.events[2].time, 0.950733);
  EXPECT_EQ(rec.events[0].payload, "\x1b[H\x1b[2J\x1b[3J");
  for (const auto& e : rec.events) EXPECT_EQ(e.kind, EventKind::Output);
}

TEST(CastParse, HeaderOnly) {
  const auto rec = parse_cast("{\"version\": 2, \"width\": 10, \"height\": 3}\n");
  EXPECT_TRUE(rec.events.empty());
  EXPECT_EQ(rec.header.width, 10);
}

TEST(CastParse, Errors) {
  const std::string hdr = "{\"version\": 2, \"width\": 10, \"height\": 3}\n";
  EXPECT_EQ(code_of([&] { parse_cast(hdr + "[1.0, \"o\"]\n"); }), ErrorCode::MalformedEvent);
  EXPECT_EQ(code_of([&] { parse_cast(hdr + "[1.0, \"o\", \"a\"]\n[0.5, \"o\", \"b\"]\n"); }),
            ErrorCode::NonMonotonicTime);
  EXPECT_EQ(code_of([] { parse_cast("not json\n"); }), ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { parse_cast("{\"version\": 1, \"width\": 10, \"height\": 3}\n"); }),
            ErrorCode::MalformedHeader);
  try {
    parse_cast(hdr + "[0.1, \"o\", \"a\"]\n[0.2, \"o\"]\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(CastParse, NonOutputKindsKept) {
  const auto rec = parse_cast("{\"version\": 2, \"width\": 10, \"height\": 3}\n[0.1, \"i\", \"l\"]\n[0.2, \"m\", \"x\"]\n");
  ASSERT_EQ(rec.events.size(), 2u);
  EXPECT_EQ(rec.events[0].kind, EventKind::Input);
  EXPECT_EQ(rec.events[1].kind, EventKind::Other);
  EXPECT_EQ(rec.events[1].tag, "m");
}

TEST(CastRoundTrip, Excerpt) {
  const auto rec = parse_cast(fixture("c1_excerpt.cast"));
  EXPECT_EQ(parse_cast(serialize_cast(rec)), rec);
}

TEST(CastRoundTrip, EmptyEnvAndExtras) {
  const auto rec = parse_cast(
      "{\"version\": 2, \"width\": 4, \"height\": 2, \"env\": {}, \"title\": \"t\", \"idle_time_limit\": 2.5}\n");
  const auto back = parse_cast(serialize_cast(rec));
  EXPECT_EQ(back, rec);
  EXPECT_EQ(back.header.extras["title"], "t");
}

TEST(CastRoundTrip, FuzzedRecordings) {
  SeededRng rng(17);
  const std::u32string alphabet = U"ab \x1b[;m0123\r\n\té█\"\\";
  for (int trial = 0; trial < 200; ++trial) {
    CastRecording rec;
    rec.header.width = 1 + static_cast<int>(rng.below(200));
    rec.header.height = 1 + static_cast<int>(rng.below(60));
    double t = 0.0;
    const auto n = rng.below(20);
    for (std::uint64_t i = 0; i < n; ++i) {
      t += rng.uniform() * 0.5;
      std::u32string payload;
      for (auto m = rng.below(12); m > 0; --m) payload.push_back(alphabet[rng.below(alphabet.size())]);
      rec.events.push_back(make_event(t, rng.below(4) == 0 ? "i" : "o", utf8_encode(payload)));
    }
    ASSERT_EQ(parse_cast(serialize_cast(rec)), rec) << "trial " << trial;
  }
}

TEST(ClipMetadata, ParseAndRoundTrip) {
  const std::string doc = R"({
    "caption": "r", "caption_detailed": "d", "caption_semantic": "s",
    "data_info": {"version": 2, "size": {"width": 80, "height": 24, "padding": [0, 0]},
                  "env": {"TERM": "xterm-256color"}},
    "videogen_stats": {"typing_rhythm": {"avg_interval": 0.25}, "events": 7},
    "metadata": {"id": 12, "title": "demo", "urls": ["u"]}
  })";
  const auto meta = parse_clip_metadata(doc);
  EXPECT_EQ(meta.data_info.size.width, 80);
  EXPECT_EQ(meta.data_info.size.height, 24);
  EXPECT_EQ(meta.data_info.size.padding, (std::array<int, 2>{0, 0}));
  EXPECT_EQ(meta.videogen_stats.at("typing_rhythm.avg_interval"), 0.25);
  EXPECT_EQ(meta.source_metadata.id, "12");
  EXPECT_EQ(parse_clip_metadata(serialize_clip_metadata(meta)), meta);
}

TEST(ClipMetadata, EmptyStatsAndMissingTier) {
  const std::string base =
      R"("caption": "r", "caption_semantic": "s", "data_info": {"size": {"width": 1, "height": 1}}, "videogen_stats": {})";
  const auto meta = parse_clip_metadata("{" + base + R"(, "caption_detailed": "d"})");
  EXPECT_TRUE(meta.videogen_stats.empty());
  try {
    parse_clip_metadata("{" + base + "}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingField);
    EXPECT_EQ(e.detail(), "caption_detailed");
  }
}
