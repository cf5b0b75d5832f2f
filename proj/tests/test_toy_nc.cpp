#include <gtest/gtest.h>

#include <cmath>

#include "ncforge/error.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/toy_nc.hpp"

using namespace ncf;

namespace {

Eigen::MatrixXd gaussian(SeededRng& rng, int r, int c) {
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

bool rows_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int row) {
  return (a.row(row).array() == b.row(row).array()).all();
}

}  // namespace

TEST(Mask, WindowExample) {
  const auto m = build_contextual_mask(10, 10, 1, 2);
  std::vector<int> seen;
  for (int j = 0; j < 10; ++j)
    if (m.at(5, 10 + j)) seen.push_back(j);
  EXPECT_EQ(seen, (std::vector<int>{3, 4, 5}));
}

TEST(Mask, Degenerate) {
  const auto m = build_contextual_mask(4, 0, 0, 0);
  for (int q = 0; q < 4; ++q)
    for (int k = 0; k < 4; ++k) EXPECT_EQ(m.at(q, k), q == k);
}

TEST(Mask, BlockRules) {
  const int Lv = 7, La = 5, w = 2, lag = 1;
  const auto m = build_contextual_mask(Lv, La, w, lag);
  for (int i = 0; i < Lv; ++i) {
    for (int j = 0; j < Lv; ++j) ASSERT_EQ(m.at(i, j), std::abs(i - j) <= w);
    for (int t = 0; t < La; ++t) ASSERT_EQ(m.at(i, Lv + t), t >= std::max(0, i - lag) && t <= std::min(i, La - 1));
  }
  for (int t = 0; t < La; ++t) {
    for (int i = 0; i < Lv; ++i) ASSERT_EQ(m.at(Lv + t, i), i >= t + lag);
    for (int u = 0; u < La; ++u) ASSERT_EQ(m.at(Lv + t, Lv + u), t == u);
  }
}

TEST(Mask, ExportParseRoundTrip) {
  for (int lag = 0; lag < 3; ++lag) {
    const auto m = build_contextual_mask(9, 6, 2, lag);
    const auto text = export_mask(m);
    EXPECT_EQ(text.rfind("ncmask v1 L_v=9 L_a=6 w=2 lag=" + std::to_string(lag) + "\n", 0), 0u);
    EXPECT_EQ(parse_mask(text), m);
  }
  EXPECT_THROW(parse_mask("garbage"), Error);
}

TEST(Modes, Names) {
  for (auto m : {InjectionMode::External, InjectionMode::Contextual, InjectionMode::Residual, InjectionMode::Internal})
    EXPECT_EQ(injection_mode_from_string(to_string(m)), m);
  EXPECT_THROW(injection_mode_from_string("sideways"), Error);
}

TEST(Forward, ShapesAndErrors) {
  ToyConfig cfg;
  cfg.d_mouse = 3;
  const auto params = make_toy_params(cfg);
  SeededRng rng(1);
  const auto v = gaussian(rng, 16, 32), a = gaussian(rng, 16, 32), mouse = gaussian(rng, 16, 3);
  for (auto m : {InjectionMode::External, InjectionMode::Contextual, InjectionMode::Residual, InjectionMode::Internal}) {
    const auto out = forward(m, v, a, mouse, params);
    EXPECT_EQ(out.rows(), 16);
    EXPECT_EQ(out.cols(), 32);
    EXPECT_TRUE(out.allFinite());
    EXPECT_EQ(out, forward(m, v, a, mouse, params));
  }
  EXPECT_THROW(forward(InjectionMode::External, v, gaussian(rng, 15, 32), std::nullopt, params), Error);
  EXPECT_THROW(forward(InjectionMode::Residual, v, gaussian(rng, 16, 31), std::nullopt, params), Error);
}

TEST(Forward, ZeroInitCollapses) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ToyConfig cfg;
    cfg.seed = seed;
    cfg.d_mouse = 2;
    cfg.zero_init_action_out = true;
    const auto params = make_toy_params(cfg);
    SeededRng rng(seed + 100);
    const auto v = gaussian(rng, 16, 32), a = gaussian(rng, 16, 32), mouse = gaussian(rng, 16, 2);
    const auto base = backbone_forward(v, params);
    for (auto m : {InjectionMode::External, InjectionMode::Contextual, InjectionMode::Residual, InjectionMode::Internal})
      ASSERT_EQ(forward(m, v, a, mouse, params), base) << to_string(m);
  }
}

TEST(Forward, ActionsMatterWithoutZeroInit) {
  const auto params = make_toy_params(ToyConfig{});
  SeededRng rng(2);
  const auto v = gaussian(rng, 16, 32), a = gaussian(rng, 16, 32);
  const auto base = backbone_forward(v, params);
  for (auto m : {InjectionMode::External, InjectionMode::Contextual, InjectionMode::Residual, InjectionMode::Internal})
    EXPECT_GT((forward(m, v, a, std::nullopt, params) - base).norm(), 1e-6) << to_string(m);
}

// Two blocks: row i may see action j only through a V2V neighbour within
// distance w whose own V2A window holds j.
TEST(Forward, ContextualReceptiveField) {
  ToyConfig cfg;
  cfg.n_blocks = 2;
  cfg.seed = 9;
  const auto params = make_toy_params(cfg);
  const auto mask = build_contextual_mask(cfg.L_v, cfg.L_a, cfg.window, cfg.lag);
  SeededRng rng(3);
  const auto v = gaussian(rng, 16, 32), a = gaussian(rng, 16, 32);
  const auto base = forward(InjectionMode::Contextual, v, a, std::nullopt, params);
  for (int j = 0; j < cfg.L_a; ++j) {
    auto a2 = a;
    a2.row(j).array() += 1.0;
    const auto out = forward(InjectionMode::Contextual, v, a2, std::nullopt, params);
    for (int i = 0; i < cfg.L_v; ++i) {
      bool reachable = false;
      for (int n = 0; n < cfg.L_v; ++n) reachable |= mask.at(i, n) && mask.at(n, cfg.L_v + j);
      if (!reachable) ASSERT_TRUE(rows_equal(out, base, i)) << i << "," << j;
    }
  }
}

TEST(Forward, ContextualVideoLocalitySingleBlock) {
  ToyConfig cfg;
  cfg.n_blocks = 1;
  const auto params = make_toy_params(cfg);
  SeededRng rng(4);
  const auto v = gaussian(rng, 16, 32), a = gaussian(rng, 16, 32);
  const auto base = forward(InjectionMode::Contextual, v, a, std::nullopt, params);
  for (int j = 0; j < cfg.L_v; ++j) {
    auto v2 = v;
    v2.row(j).array() -= 0.5;
    const auto out = forward(InjectionMode::Contextual, v2, a, std::nullopt, params);
    for (int i = 0; i < cfg.L_v; ++i)
      if (std::abs(i - j) > cfg.window) ASSERT_TRUE(rows_equal(out, base, i));
  }
}

TEST(Losses, ContrastiveTwoStep) {
  Eigen::MatrixXd F(2, 2), A(2, 2);
  F << 1, 0, -1, 0;
  A << 1, 0, -1, 0;
  LossConfig cfg;
  cfg.temperature = 1.0;
  EXPECT_NEAR(contrastive_loss(F, A, std::nullopt, cfg), std::log1p(std::exp(-2.0)), 1e-9);
  cfg.symmetric = true;
  EXPECT_NEAR(contrastive_loss(F, A, std::nullopt, cfg), std::log1p(std::exp(-2.0)), 1e-9);
}

TEST(Losses, ContrastiveUniform) {
  Eigen::MatrixXd F = Eigen::MatrixXd::Ones(6, 4), A = Eigen::MatrixXd::Ones(6, 4);
  LossConfig cfg;
  cfg.lag = 1;
  EXPECT_NEAR(contrastive_loss(F, A, std::nullopt, cfg), std::log(5.0), 1e-9);
  cfg.frame_valid = {true, true, false, true, true, true};
  EXPECT_NEAR(contrastive_loss(F, A, std::nullopt, cfg), std::log(4.0), 1e-9);
}

TEST(Losses, ContrastiveDegenerate) {
  Eigen::MatrixXd F = Eigen::MatrixXd::Ones(2, 3);
  LossConfig cfg;
  cfg.lag = 1;
  EXPECT_THROW(contrastive_loss(F, F, std::nullopt, cfg), Error);
}

TEST(Losses, ContrastivePrefersTruePairing) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SeededRng rng(seed);
    const auto F = gaussian(rng, 12, 8);
    const auto A = F + 0.3 * gaussian(rng, 12, 8);
    Eigen::MatrixXd shuffled = A;
    for (int i = 0; i < 12; ++i) shuffled.row(i) = A.row((i + 5) % 12);
    LossConfig cfg;
    wins += contrastive_loss(F, A, std::nullopt, cfg) < contrastive_loss(F, shuffled, std::nullopt, cfg);
  }
  EXPECT_GE(wins, 95);
}

TEST(Losses, FuturePrediction) {
  SeededRng rng(6);
  const auto Fr = gaussian(rng, 8, 4);
  const Eigen::MatrixXd head = Eigen::MatrixXd::Identity(4, 4);
  Eigen::RowVectorXd delta(4);
  delta << 0.5, -1.0, 0.25, 2.0;
  const int lag = 2;
  Eigen::MatrixXd A(8, 4);
  for (int t = 0; t < 8; ++t) A.row(t) = t + lag < 8 ? Eigen::RowVectorXd(Fr.row(t + lag) + delta) : delta;
  EXPECT_NEAR(future_pred_loss(A, Fr, lag, head), delta.squaredNorm(), 1e-9);
  Eigen::MatrixXd exact = A;
  for (int t = 0; t + lag < 8; ++t) exact.row(t) = Fr.row(t + lag);
  EXPECT_EQ(future_pred_loss(exact, Fr, lag, head), 0.0);
  EXPECT_THROW(future_pred_loss(A.topRows(2), Fr.topRows(2), 2, head), Error);
}

TEST(Losses, Cursor) {
  SeededRng rng(7);
  std::vector<FrameTensor> pred;
  std::vector<Image> refs, masks;
  for (int t = 0; t < 3; ++t) {
    Image p(6, 6, 3);
    for (auto& x : p.data) x = static_cast<float>(rng.uniform());
    pred.push_back(p);
    refs.push_back(t == 0 ? p : Image(6, 6, 3, 0.5f));
    masks.push_back(Image(6, 6, 1, t == 0 ? 1.0f : 0.0f));
  }
  std::vector<NormPoint> traj{{0.1, 0.1}, {0.2, 0.3}, {0.9, 0.5}};
  auto l = cursor_losses(pred, refs, masks, traj, traj);
  EXPECT_EQ(l.masked_patch_l2, 0.0);
  EXPECT_EQ(l.position_l2, 0.0);

  std::vector<NormPoint> shifted = traj;
  for (auto& p : shifted) p.x += 0.1;
  l = cursor_losses(pred, refs, masks, shifted, traj);
  EXPECT_NEAR(l.position_l2, 0.01, 1e-12);
  EXPECT_DOUBLE_EQ(cursor_hit_rate(shifted, traj, 0.2), 1.0);
  EXPECT_DOUBLE_EQ(cursor_hit_rate(shifted, traj, 0.05), 0.0);

  masks[1] = Image(6, 6, 1, 1.0f);
  l = cursor_losses(pred, refs, masks, traj, traj);
  EXPECT_GT(l.masked_patch_l2, 0.0);
  masks[1] = Image(5, 6, 1, 1.0f);
  EXPECT_THROW(cursor_losses(pred, refs, masks, traj, traj), Error);
}
