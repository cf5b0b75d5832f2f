#include <gtest/gtest.h>

#include "ncforge/error.hpp"
#include "ncforge/io.hpp"
#include "ncforge/term_emu.hpp"
#include "ncforge/vhs.hpp"
#include "oracles.hpp"

using namespace ncf;

namespace {

VhsScript tape_fixture() { return parse_script(read_text_file(std::string(FIXTURE_DIR) + "/c2_vhs_example.tape")); }

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

TEST(VhsParse, ExampleScript) {
  const auto s = tape_fixture();
  EXPECT_EQ(s.output_path, "vhs_example.mp4");
  EXPECT_EQ(s.settings.typing_speed_ms, 300);
  EXPECT_EQ(s.settings.font_size, 40);
  EXPECT_EQ(s.settings.width, 1600);
  EXPECT_EQ(s.settings.height, 900);
  // two leading sleeps, five [Type, Sleep, Enter, Sleep] groups, two trailing sleeps, Hide
  ASSERT_EQ(s.commands.size(), 25u);
  int types = 0;
  for (const auto& c : s.commands) {
    if (c.kind == CommandKind::Type) {
      ++types;
      EXPECT_EQ(c.text, "uname -s");
    }
  }
  EXPECT_EQ(types, 5);
  EXPECT_EQ(s.commands.back().kind, CommandKind::Hide);
}

TEST(VhsParse, MinimalAndErrors) {
  const auto s = parse_script("Output a.mp4\n");
  EXPECT_TRUE(s.commands.empty());
  EXPECT_EQ(s.settings, VhsSettings{});
  EXPECT_EQ(code_of([] { parse_script("Output a.mp4\nJump 3\n"); }), ErrorCode::UnknownCommand);
  EXPECT_EQ(code_of([] { parse_script("Sleep 3parsecs\n"); }), ErrorCode::MalformedDuration);
  EXPECT_EQ(code_of([] { parse_script("Set Theme { \"background\": \n"); }), ErrorCode::MalformedTheme);
  try {
    parse_script("Output a.mp4\n\nJump 3\n");
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(VhsParse, Durations) {
  EXPECT_EQ(parse_duration_ms("800ms"), 800);
  EXPECT_EQ(parse_duration_ms("1s"), 1000);
  EXPECT_EQ(parse_duration_ms("1.5s"), 1500);
  EXPECT_EQ(parse_duration_ms("2"), 2000);
  EXPECT_THROW(parse_duration_ms("abc"), Error);
}

TEST(VhsParse, TextRoundTrip) {
  const auto s = tape_fixture();
  EXPECT_EQ(parse_script(script_to_text(s)), s);
}

TEST(VhsExecute, TypingClock) {
  auto s = parse_script("Set TypingSpeed 300ms\nType \"ab\"\n");
  auto trace = execute(s);
  ASSERT_EQ(trace.events.size(), 2u);
  EXPECT_EQ(trace.events[0].ch, U'a');
  EXPECT_EQ(trace.events[0].time_ms, 0);
  EXPECT_EQ(trace.events[1].ch, U'b');
  EXPECT_EQ(trace.events[1].time_ms, 300);
  EXPECT_EQ(trace.duration_ms, 600);

  trace = execute(parse_script("Sleep 800ms\nEnter\n"));
  ASSERT_EQ(trace.events.size(), 1u);
  EXPECT_EQ(trace.events[0].kind, InputKind::Named);
  EXPECT_EQ(trace.events[0].name, "Enter");
  EXPECT_EQ(trace.events[0].time_ms, 800);

  trace = execute(parse_script("Hide\nType \"x\"\n"));
  ASSERT_EQ(trace.events.size(), 1u);
  EXPECT_FALSE(trace.events[0].visible);

  trace = execute(parse_script("Type@10ms \"xy\"\n"));
  EXPECT_EQ(trace.events[1].time_ms, 10);
}

TEST(VhsExecute, ExampleDuration) {
  // 5 x (8 keys + Enter) at 300 ms, 5 x (120 + 400) ms, then 800 + 180 + 400 + 600 ms of sleeps
  const std::int64_t expected = 5 * 9 * 300 + 5 * (120 + 400) + 800 + 180 + 400 + 600;
  EXPECT_EQ(expected, 18080);
  EXPECT_EQ(execute(tape_fixture()).duration_ms, expected);
}

TEST(VhsCaption, ScriptedCaption) {
  const auto s = parse_script(
      "Type \"python\"\nEnter\nType \"values = [n*n for n in range(1, 10)]\"\nEnter\n"
      "Type \"print(values)\"\nEnter\nType \"exit()\"\nEnter\n");
  EXPECT_EQ(derive_caption(s),
            "Type python; Enter; Type values = [n*n for n in range(1, 10)]; Enter; Type print(values); Enter; "
            "Type exit(); Enter.");
  EXPECT_EQ(derive_caption(parse_script("")), "");
  EXPECT_EQ(derive_caption(parse_script("Sleep 1s\nEnter\n")), "Enter.");
}

TEST(VhsFilter, KeepsMatching) {
  std::vector<VhsScript> scripts{parse_script("Type \"a\"\n"), parse_script("Sleep 1s\n")};
  const auto kept = filter_scripts(scripts, [](const VhsScript& s) { return s.commands[0].kind == CommandKind::Type; });
  ASSERT_EQ(kept.size(), 1u);
}

TEST(VhsSession, EchoesTypedText) {
  const auto s = parse_script("Set TypingSpeed 10ms\nType \"echo hi\"\nEnter\n");
  const auto rec = simulate_session(s, {.cols = 20, .rows = 4});
  auto frames = replay(rec, 15.0);
  const auto lines = grid_to_lines(frames.back().grid);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0], "$ echo hi");
}

TEST(VhsSession, ReplEvaluatesArithmetic) {
  const auto probes = gen_arith_probe(3, 1);
  const auto rec = simulate_session(probes[0].script, {.cols = 60, .rows = 8});
  std::vector<std::string> lines;
  for (const auto& f : replay(rec, 15.0)) {
    for (auto& l : grid_to_lines(f.grid)) lines.push_back(l);
  }
  EXPECT_TRUE(score_probe(probes[0].expected_answer, lines));
}

TEST(Probes, Evaluator) {
  EXPECT_EQ(evaluate_arith("2+3"), "5");
  EXPECT_EQ(evaluate_arith("17*1000000"), "17000000");
  EXPECT_EQ(evaluate_arith("1-7//2"), "-2");
  EXPECT_EQ(evaluate_arith("3-10%4"), "1");
  EXPECT_EQ(evaluate_arith("5//0"), std::nullopt);
  EXPECT_EQ(evaluate_arith("2+"), std::nullopt);
}

TEST(Probes, Deterministic) {
  const auto a = gen_arith_probe(42, 100);
  const auto b = gen_arith_probe(42, 100);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].expression, b[i].expression);
    EXPECT_EQ(a[i].expected_answer, b[i].expected_answer);
  }
}

TEST(Probes, AgreeWithBigIntegerOracle) {
  for (const auto& p : gen_arith_probe(7, 2000)) {
    ASSERT_EQ(oracle::BigArith::eval(p.expression), p.expected_answer) << p.expression;
  }
}

TEST(Probes, Scoring) {
  EXPECT_TRUE(score_probe("5", {">>> 2+3", "5"}));
  EXPECT_FALSE(score_probe("5", {"4"}));
  EXPECT_TRUE(score_probe("5", {"  5  "}));
  EXPECT_FALSE(score_probe("5", {"55"}));
}
