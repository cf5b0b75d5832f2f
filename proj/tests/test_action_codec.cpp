#include <gtest/gtest.h>

#include <set>

#include "ncforge/action_codec.hpp"
#include "ncforge/error.hpp"
#include "ncforge/numeric.hpp"
#include "oracles.hpp"

using namespace ncf;

TEST(IndexMaps, Sizes) {
  EXPECT_EQ(kRawActionDim, 182);
  EXPECT_EQ(raw_action_names().size(), 182u);
  EXPECT_EQ(95u + named_key_names().size() + modifier_names().size() + chord_names().size(), 169u);
  std::set<std::string> unique(raw_action_names().begin(), raw_action_names().end());
  EXPECT_EQ(unique.size(), 182u);
  EXPECT_EQ(shortcut_vocabulary().size(), named_key_names().size() + modifier_names().size() + chord_names().size());
  for (const auto& name : shortcut_vocabulary()) {
    ASSERT_TRUE(shortcut_id(name));
    EXPECT_EQ(raw_action_names()[raw_key_index(name)].substr(raw_action_names()[raw_key_index(name)].find(':') + 1),
              name);
  }
}

TEST(IndexMaps, Lookup) {
  EXPECT_EQ(raw_key_index("a"), 13 + ('a' - 0x20));
  EXPECT_EQ(raw_key_index(" "), 13);
  EXPECT_EQ(raw_key_index("~"), 107);
  EXPECT_EQ(canonical_key("ESC"), "Escape");
  EXPECT_EQ(canonical_key("CTRL+V"), "ctrl+v");
  EXPECT_THROW(raw_key_index("hyper+q"), Error);
  EXPECT_TRUE(shortcut_id("ctrl+v"));
}

TEST(RawView, Examples) {
  EXPECT_TRUE(active_indices(encode_raw_frame({})).empty());
  auto v = encode_raw_frame({mouse_event(0, GuiEventKind::MouseDown)});
  ASSERT_EQ(active_indices(v).size(), 1u);
  EXPECT_LT(active_indices(v)[0], kMouseFlags);
  v = encode_raw_frame({key_event(0, "l"), key_event(0, "s")});
  EXPECT_EQ(active_indices(v), (std::vector<int>{raw_key_index("l"), raw_key_index("s")}));
  EXPECT_EQ(from_active_indices(active_indices(v)), v);
}

TEST(MetaView, Examples) {
  std::vector<GuiEvent> typed;
  for (char c : std::string("ls -l")) typed.push_back(key_event(0, std::string(1, c)));
  auto m = encode_meta_frame(typed);
  EXPECT_EQ(m.slots[0].type, MetaType::Type);
  EXPECT_EQ(m.slots[0].text, "ls -l");
  EXPECT_EQ(m.slots[1].type, MetaType::None);

  m = encode_meta_frame({key_event(0, "ctrl+v")});
  EXPECT_EQ(m.slots[0].type, MetaType::Shortcut);
  EXPECT_EQ(m.slots[0].shortcut, "ctrl+v");

  m = encode_meta_frame({});
  EXPECT_EQ(m.slots[0].type, MetaType::None);
  EXPECT_EQ(m.slots[1].type, MetaType::None);

  m = encode_meta_frame({scroll_event(0, 1), scroll_event(0.01, 2), key_event(0.02, "Enter"), key_event(0.03, "x")});
  EXPECT_EQ(m.slots[0].type, MetaType::Scroll);
  EXPECT_EQ(m.slots[0].amount, 3);
  EXPECT_EQ(m.slots[1].type, MetaType::Shortcut);
  EXPECT_EQ(m.dropped, 1);
}

TEST(MetaView, ConsistentWithRawKeyboardFlags) {
  SeededRng rng(21);
  const auto& names = raw_action_names();
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<GuiEvent> ev;
    for (auto n = rng.below(3); n > 0; --n) {
      const int idx = kMouseFlags + static_cast<int>(rng.below(kKeyboardFlags));
      const std::string& name = names[idx];
      ev.push_back(key_event(ev.size() * 0.01, name.substr(name.find(':') + 1)));
    }
    const auto meta = encode_meta_frame(ev);
    if (meta.dropped > 0) continue;
    const auto raw = encode_raw_frame(ev);
    const auto from_meta = meta_keyboard_flags(meta);
    for (int i = kMouseFlags; i < kRawActionDim; ++i) ASSERT_EQ(raw[i], from_meta[i]) << names[i];
  }
}

TEST(Buckets, RoundedTimes) {
  const auto b = bucket_events({key_event(0.0, "a"), key_event(0.1, "b"), key_event(10.0, "c")}, 15.0, 4);
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b[0].size(), 1u);
  EXPECT_EQ(b[2].size(), 1u);  // round(1.5) = 2
  EXPECT_EQ(b[3].size(), 1u);  // clamped
}

TEST(TerminalInput, Decode) {
  EXPECT_EQ(decode_terminal_input("ls\r"), (std::vector<std::string>{"l", "s", "Enter"}));
  EXPECT_EQ(decode_terminal_input("\x1b[A\x03\x7f"), (std::vector<std::string>{"Up", "ctrl+c", "Backspace"}));
}

TEST(Embedding, MeanSemantics) {
  const auto emb = make_meta_embedder(8, 5);
  std::vector<MetaFrame> frames(3);
  frames[1].slots[0].type = MetaType::Type;
  frames[1].slots[0].text = "ls";
  frames[2].slots = {frames[1].slots[0], frames[1].slots[0]};
  const auto E = embed_meta(frames, emb);
  EXPECT_EQ(E.row(0).norm(), 0.0);
  EXPECT_EQ(E.row(1), embed_slot(frames[1].slots[0], emb));
  EXPECT_TRUE(E.row(2).isApprox(E.row(1), 1e-15));
  const auto again = make_meta_embedder(8, 5);
  EXPECT_EQ(embed_meta(frames, again), E);
}

TEST(Align, Examples) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Random(9, 3);
  EXPECT_EQ(align_temporal(r, {1, 1, 0}), r);
  const auto a = align_temporal(r, {2, 2, 1});
  EXPECT_EQ(a.rows(), 5);
  EXPECT_TRUE(a.row(2).isApprox(r.topRows(4).colwise().mean(), 1e-15));
  EXPECT_EQ(a.row(0).norm(), 0.0);
  EXPECT_THROW(align_temporal(r, {0, 1, 0}), Error);
  EXPECT_THROW(align_temporal(r, {1, 1, -1}), Error);
}

TEST(Align, MatchesOracle) {
  SeededRng rng(8);
  for (int c = 1; c <= 4; ++c)
    for (int w = 1; w <= 3; ++w)
      for (int lag = 0; lag <= 3; ++lag)
        for (int trial = 0; trial < 5; ++trial) {
          const int F = 1 + static_cast<int>(rng.below(50));
          Eigen::MatrixXd r(F, 4);
          for (int i = 0; i < r.size(); ++i) r.data()[i] = static_cast<double>(rng.below(1000)) / 8.0;
          ASSERT_EQ(align_temporal(r, {c, w, lag}), oracle::align(r, c, w, lag));
        }
}

TEST(Align, Linear) {
  SeededRng rng(4);
  Eigen::MatrixXd x(20, 3), y(20, 3);
  for (int i = 0; i < 60; ++i) {
    x.data()[i] = rng.normal();
    y.data()[i] = rng.normal();
  }
  const AlignParams p{3, 2, 1};
  EXPECT_TRUE(align_temporal(Eigen::MatrixXd(2.0 * x + y), p).isApprox(2.0 * align_temporal(x, p) + align_temporal(y, p),
                                                                        1e-12));
}

TEST(Fourier, CentreAndSymmetry) {
  const auto cfg = make_fourier_config(11);
  const auto centre = fourier_features({NormPoint{0.5, 0.5}}, cfg);
  const int m = cfg.num_features;
  EXPECT_EQ(centre.leftCols(m).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(centre.rightCols(m).minCoeff(), 1.0);
  const auto f = fourier_features({NormPoint{0, 0}, NormPoint{1, 1}}, cfg);
  EXPECT_TRUE(f.row(0).leftCols(m).isApprox(-f.row(1).leftCols(m), 1e-14));
  EXPECT_TRUE(f.row(0).rightCols(m).isApprox(f.row(1).rightCols(m), 1e-14));
  const std::vector<NormPoint> traj{{0.1, 0.9}, {0.3, 0.2}};
  EXPECT_EQ(fourier_mouse(traj, cfg), fourier_mouse(traj, make_fourier_config(11)));
  EXPECT_EQ(fourier_mouse(traj, cfg).cols(), cfg.embed_dim);
}
