#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncforge/cast_io.hpp"
#include "ncforge/raster.hpp"

namespace ncf {

// ---- text fidelity ------------------------------------------------------------------

// Unit-cost edit distance over Unicode code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 when both are empty, 0 when only gt is empty, else max(0, 1 - d/|gt|).
double char_accuracy(std::string_view gt_text, std::string_view pred_text);

// (1/N_g) * #{i : i < N_p and pred[i] == gt[i]}, with the same empty cases.
double exact_line_accuracy(const std::vector<std::string>& gt_lines, const std::vector<std::string>& pred_lines);

// Frame indices scored for text metrics: uniform_subsample(min(T_gen, T_gt), K).
std::vector<std::size_t> sample_eval_frames(std::size_t T_gen, std::size_t T_gt, std::size_t K = 5);

// ---- image fidelity -------------------------------------------------------------------

// Mean SSIM over valid 11x11 Gaussian (sigma 1.5) windows of the BT.601 luma,
// L = 1. Images narrower than 11 pixels use the window truncated to their size.
double ssim(const Image& a, const Image& b);

// Mean of per-frame SSIM over paired frames.
double clip_ssim(const std::vector<Image>& a, const std::vector<Image>& b);

// ---- action-driven windows -----------------------------------------------------------

struct ActionLog {
  std::vector<double> timestamps;  // seconds
  double fps = 3.0;
  std::size_t T = 0;
};

// Union over actions of {f+offset, ..., f+k} clipped to [0, T-1], where
// f = round(tau * fps) clamped to [0, T-1]. Sorted, unique.
std::vector<std::size_t> select_post_action_frames(const ActionLog& log, std::size_t k = 15, std::size_t offset = 1);

// ---- distribution distance -------------------------------------------------------------

struct FeatureStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t n = 0;
};

// Maps a 16-frame 112x112 clip to one feature vector.
using ClipFeatureExtractor = std::function<Eigen::VectorXd(const std::vector<Image>& clip)>;

// Per-frame channel mean and standard deviation, concatenated over frames.
Eigen::VectorXd color_moment_features(const std::vector<Image>& clip);

inline constexpr std::size_t kFeatureFrames = 16;
inline constexpr int kFeatureSize = 112;

// Clips are subsampled or padded to 16 frames and resized to 112x112 before
// extraction; covariance is unbiased. Throws TooFewClips.
FeatureStats feature_stats(const std::vector<std::vector<Image>>& clips,
                           const ClipFeatureExtractor& extractor = color_moment_features);

// Stats straight from feature vectors (rows); the same estimator as above.
FeatureStats stats_from_features(const Eigen::MatrixXd& features);

// ||mu_A - mu_B||^2 + tr(S_A + S_B - 2 (S_A S_B)^(1/2)); the square-root
// trace is taken from the symmetric product S_A^(1/2) S_B S_A^(1/2) with
// negative eigenvalues clamped to zero. Throws DimensionMismatch.
double frechet_distance(const FeatureStats& a, const FeatureStats& b);

// ---- evaluation protocol -------------------------------------------------------------

struct EvalOptions {
  std::size_t K = 5;
  std::size_t k = 15;
  std::size_t offset = 1;
  double fps = 3.0;
  double max_seconds = 5.0;
  int size = 256;
};

struct EvalClip {
  std::string clip_id;
  double fps = 15.0;
  std::vector<Image> frames;
  std::vector<std::vector<std::string>> text;  // per-frame normalized lines, may be empty
  std::vector<double> action_times;            // seconds
};

struct ClipReport {
  std::string clip_id;
  std::optional<double> char_acc;
  std::optional<double> exact_line_acc;
  double ssim_all = 0.0;
  std::optional<double> ssim_post;
  std::size_t frames_evaluated = 0;
  std::vector<std::size_t> post_action_indices;
};

struct MetricReport {
  std::vector<ClipReport> clips;  // sorted by clip_id
  std::size_t skipped = 0;        // ids present on one side only
  // Means of per-clip values; absent when no clip has the value.
  std::optional<double> char_acc;
  std::optional<double> exact_line_acc;
  std::optional<double> ssim_all;
  std::optional<double> ssim_post;
  std::optional<double> frechet;  // generated vs ground truth
  EvalOptions options;
};

// Resample to options.fps, truncate to max_seconds, resize to size x size.
std::vector<std::size_t> resample_indices(std::size_t frames, double src_fps, const EvalOptions& options);

ClipReport evaluate_clip(const EvalClip& generated, const EvalClip& ground_truth, const EvalOptions& options);

// Pairs clips by id and aggregates per-clip values (mean over clips).
MetricReport evaluate(const std::vector<EvalClip>& generated, const std::vector<EvalClip>& ground_truth,
                      const EvalOptions& options = {});

ordered_json report_to_json(const MetricReport& report);

}  // namespace ncf
