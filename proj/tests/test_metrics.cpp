#include <gtest/gtest.h>

#include "ncforge/error.hpp"
#include "ncforge/metrics.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/text.hpp"
#include "oracles.hpp"

using namespace ncf;

namespace {

std::u32string random_text(SeededRng& rng, std::size_t max_len) {
  static const std::u32string alphabet = U"ab c-é█";
  std::u32string s;
  for (auto n = rng.below(max_len + 1); n > 0; --n) s.push_back(alphabet[rng.below(alphabet.size())]);
  return s;
}

Image noise(SeededRng& rng, int h, int w) {
  Image img(h, w, 3);
  for (auto& x : img.data) x = static_cast<float>(rng.uniform());
  return img;
}

}  // namespace

TEST(CharAccuracy, EdgeCases) {
  EXPECT_EQ(char_accuracy("", ""), 1.0);
  EXPECT_EQ(char_accuracy("", "x"), 0.0);
  EXPECT_EQ(char_accuracy("ls -l", "ls-l"), 1.0 - 1.0 / 5.0);
  EXPECT_EQ(char_accuracy("ab", "xxxxxx"), 0.0);
}

TEST(CharAccuracy, MatchesDpOracle) {
  SeededRng rng(31);
  for (int i = 0; i < 3000; ++i) {
    const auto a = random_text(rng, 12), b = random_text(rng, 12);
    ASSERT_EQ(levenshtein(a, b), oracle::levenshtein(a, b));
    ASSERT_EQ(char_accuracy(utf8_encode(a), utf8_encode(b)), oracle::char_accuracy(a, b));
  }
}

TEST(Levenshtein, MetricProperties) {
  SeededRng rng(32);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_text(rng, 8), b = random_text(rng, 8), c = random_text(rng, 8);
    ASSERT_EQ(levenshtein(a, a), 0u);
    ASSERT_EQ(levenshtein(a, b), levenshtein(b, a));
    ASSERT_LE(levenshtein(a, c), levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST(ExactLine, Examples) {
  EXPECT_EQ(exact_line_accuracy({"a", "b"}, {"a", "b"}), 1.0);
  EXPECT_EQ(exact_line_accuracy({"a", "b"}, {"b", "a"}), 0.0);
  EXPECT_EQ(exact_line_accuracy({"a", "b", "c"}, {"a"}), 1.0 / 3.0);
  EXPECT_EQ(exact_line_accuracy({}, {}), 1.0);
  EXPECT_EQ(exact_line_accuracy({}, {"a"}), 0.0);
}

TEST(ExactLine, MatchesIndicatorSum) {
  SeededRng rng(33);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> gt, pred;
    for (auto n = 1 + rng.below(8); n > 0; --n) gt.push_back(std::string(1, static_cast<char>('a' + rng.below(3))));
    for (auto n = rng.below(10); n > 0; --n) pred.push_back(std::string(1, static_cast<char>('a' + rng.below(3))));
    ASSERT_EQ(exact_line_accuracy(gt, pred), oracle::exact_line(gt, pred));
  }
}

TEST(Sampling, Examples) {
  EXPECT_EQ(sample_eval_frames(3, 10), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(sample_eval_frames(100, 100), (std::vector<std::size_t>{0, 25, 50, 74, 99}));
  EXPECT_EQ(sample_eval_frames(10, 10, 1), (std::vector<std::size_t>{0}));
}

TEST(Ssim, SelfAndConstant) {
  SeededRng rng(34);
  const auto a = noise(rng, 20, 24);
  EXPECT_NEAR(ssim(a, a), 1.0, 1e-9);
  const double C1 = 0.01 * 0.01, C2 = 0.03 * 0.03;
  for (auto [v1, v2] : {std::pair{0.2, 0.7}, std::pair{0.0, 1.0}, std::pair{0.5, 0.51}}) {
    const Image x(16, 16, 3, static_cast<float>(v1)), y(16, 16, 3, static_cast<float>(v2));
    const double l1 = static_cast<float>(v1), l2 = static_cast<float>(v2);
    const double want = (2 * l1 * l2 + C1) * C2 / ((l1 * l1 + l2 * l2 + C1) * C2);
    EXPECT_NEAR(ssim(x, y), want, 1e-7);
  }
  const auto small = noise(rng, 5, 7);
  EXPECT_NEAR(ssim(small, small), 1.0, 1e-9);
  EXPECT_THROW(ssim(a, noise(rng, 20, 23)), Error);
}

TEST(Ssim, SymmetricAndBounded) {
  SeededRng rng(35);
  for (int i = 0; i < 20; ++i) {
    const auto a = noise(rng, 16, 16), b = noise(rng, 16, 16);
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
    EXPECT_LE(ssim(a, b), 1.0);
  }
}

TEST(Windows, Examples) {
  auto idx = select_post_action_frames({{1.0}, 3.0, 100});
  std::vector<std::size_t> want;
  for (std::size_t i = 4; i <= 18; ++i) want.push_back(i);
  EXPECT_EQ(idx, want);
  EXPECT_TRUE(select_post_action_frames({{}, 3.0, 100}).empty());
  EXPECT_TRUE(select_post_action_frames({{1000.0}, 3.0, 10}).empty());
  idx = select_post_action_frames({{1.0, 2.0}, 3.0, 100});
  EXPECT_EQ(idx.front(), 4u);
  EXPECT_EQ(idx.back(), 21u);
  EXPECT_EQ(idx.size(), 18u);
}

TEST(Windows, MatchesBruteForce) {
  SeededRng rng(36);
  for (int i = 0; i < 300; ++i) {
    ActionLog log;
    log.T = rng.below(60);
    log.fps = 1.0 + static_cast<double>(rng.below(30));
    for (auto n = rng.below(6); n > 0; --n) log.timestamps.push_back(rng.uniform() * 25.0);
    std::sort(log.timestamps.begin(), log.timestamps.end());
    ASSERT_EQ(select_post_action_frames(log), oracle::post_action(log.timestamps, log.fps, log.T, 15, 1));
  }
}

TEST(Features, PaddingAndZeroVariance) {
  std::vector<Image> seven;
  for (int i = 0; i < 7; ++i) seven.push_back(Image(8, 8, 3, static_cast<float>(i) / 10.0f));
  std::vector<Image> padded = seven;
  while (padded.size() < 16) padded.push_back(seven.back());
  const auto stats = feature_stats({seven, padded});
  EXPECT_EQ(stats.cov.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(stats.n, 2u);
  EXPECT_THROW(feature_stats({seven}), Error);
}

TEST(Features, MeanPixelExtractor) {
  auto mean_pixel = [](const std::vector<Image>& clip) {
    double s = 0;
    for (const auto& f : clip) s += f.data.cast<double>().mean();
    return Eigen::VectorXd::Constant(1, s / clip.size());
  };
  std::vector<std::vector<Image>> clips;
  for (float v : {0.25f, 0.5f, 1.0f}) clips.push_back(std::vector<Image>(16, Image(4, 4, 3, v)));
  const auto st = feature_stats(clips, mean_pixel);
  EXPECT_NEAR(st.mean[0], 1.75 / 3.0, 1e-7);
  const double m = 1.75 / 3.0;
  const double var = ((0.25 - m) * (0.25 - m) + (0.5 - m) * (0.5 - m) + (1 - m) * (1 - m)) / 2.0;
  EXPECT_NEAR(st.cov(0, 0), var, 1e-7);
}

TEST(Frechet, ClosedForms) {
  FeatureStats a{Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3), 2};
  FeatureStats b = a;
  b.mean[1] = 1.0;
  EXPECT_NEAR(frechet_distance(a, b), 1.0, 1e-6);
  FeatureStats s1{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 1.0), 2};
  FeatureStats s4{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 4.0), 2};
  EXPECT_NEAR(frechet_distance(s1, s4), 1.0, 1e-6);
  EXPECT_THROW(frechet_distance(a, s1), Error);
}

TEST(Frechet, SelfAndSymmetry) {
  SeededRng rng(37);
  for (int i = 0; i < 30; ++i) {
    Eigen::MatrixXd xa(12, 5), xb(12, 5);
    for (int k = 0; k < xa.size(); ++k) {
      xa.data()[k] = rng.normal();
      xb.data()[k] = rng.normal() * 2 + 1;
    }
    const auto a = stats_from_features(xa), b = stats_from_features(xb);
    EXPECT_LE(std::abs(frechet_distance(a, a)), 1e-6);
    EXPECT_NEAR(frechet_distance(a, b), frechet_distance(b, a), 1e-6);
    EXPECT_GE(frechet_distance(a, b), 0.0);
  }
}

TEST(Protocol, ResampleIndices) {
  EvalOptions o;
  const auto idx = resample_indices(75, 15.0, o);
  ASSERT_EQ(idx.size(), 15u);
  EXPECT_EQ(idx[1], 5u);
  EXPECT_EQ(idx.back(), 70u);
  EXPECT_EQ(resample_indices(4, 15.0, o).size(), 1u);
}

TEST(Protocol, EvaluatePairsById) {
  SeededRng rng(38);
  auto make = [&](const std::string& id) {
    EvalClip c;
    c.clip_id = id;
    c.fps = 3.0;
    for (int i = 0; i < 6; ++i) {
      c.frames.push_back(noise(rng, 12, 12));
      c.text.push_back({"$ ls", "file" + std::to_string(i)});
    }
    c.action_times = {0.4};
    return c;
  };
  EvalOptions o;
  o.size = 32;
  std::vector<EvalClip> gt{make("a"), make("b"), make("c"), make("z")};
  std::vector<EvalClip> gen(gt.begin(), gt.begin() + 3);
  gen.push_back(make("extra"));
  const auto rep = evaluate(gen, gt, o);
  EXPECT_EQ(rep.clips.size(), 3u);
  EXPECT_EQ(rep.skipped, 2u);
  EXPECT_EQ(rep.char_acc, 1.0);
  EXPECT_EQ(rep.exact_line_acc, 1.0);
  EXPECT_NEAR(*rep.ssim_all, 1.0, 1e-9);
  ASSERT_TRUE(rep.ssim_post);
  EXPECT_TRUE(rep.frechet);
  const auto j = report_to_json(rep);
  EXPECT_EQ(j["aggregate"]["lpips"], "unavailable");
}

TEST(Protocol, AggregateIsMeanOfClipMeans) {
  auto clip = [](const std::string& id, int n, std::vector<std::string> line) {
    EvalClip c;
    c.clip_id = id;
    c.fps = 3.0;
    for (int i = 0; i < n; ++i) {
      c.frames.push_back(Image(8, 8, 3, 0.5f));
      c.text.push_back(line);
    }
    return c;
  };
  EvalOptions o;
  o.size = 16;
  const auto rep = evaluate({clip("a", 2, {"x"}), clip("b", 10, {"abcd"})},
                            {clip("a", 2, {"x"}), clip("b", 10, {"abcx"})}, o);
  EXPECT_DOUBLE_EQ(*rep.char_acc, (1.0 + 0.75) / 2.0);
}
