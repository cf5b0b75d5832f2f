#include "ncforge/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ncforge/dataset.hpp"
#include "ncforge/error.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/text.hpp"

namespace ncf {

// ---- text fidelity ------------------------------------------------------------------

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) { return levenshtein(utf8_decode(a), utf8_decode(b)); }

double char_accuracy(std::string_view gt_text, std::string_view pred_text) {
  const auto s = utf8_decode(gt_text);
  const auto t = utf8_decode(pred_text);
  if (s.empty()) return t.empty() ? 1.0 : 0.0;
  const double d = static_cast<double>(levenshtein(s, t));
  return std::max(0.0, 1.0 - d / static_cast<double>(s.size()));
}

double exact_line_accuracy(const std::vector<std::string>& gt_lines, const std::vector<std::string>& pred_lines) {
  if (gt_lines.empty()) return pred_lines.empty() ? 1.0 : 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gt_lines.size() && i < pred_lines.size(); ++i)
    if (gt_lines[i] == pred_lines[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(gt_lines.size());
}

std::vector<std::size_t> sample_eval_frames(std::size_t T_gen, std::size_t T_gt, std::size_t K) {
  return uniform_subsample(std::min(T_gen, T_gt), K);
}

// ---- SSIM -------------------------------------------------------------------------------

namespace {

std::vector<double> gaussian_window(int size) {
  constexpr double kSigma = 1.5;
  std::vector<double> w(static_cast<std::size_t>(size));
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double x = i - center;
    w[static_cast<std::size_t>(i)] = std::exp(-x * x / (2 * kSigma * kSigma));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (auto& v : w) v /= sum;
  return w;
}

// Valid-mode separable filter of a row-major H x W plane.
std::vector<double> filter_valid(const std::vector<double>& img, int H, int W, const std::vector<double>& wy,
                                 const std::vector<double>& wx) {
  const int kh = static_cast<int>(wy.size()), kw = static_cast<int>(wx.size());
  const int oh = H - kh + 1, ow = W - kw + 1;
  std::vector<double> tmp(static_cast<std::size_t>(H) * ow);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kw; ++k) acc += wx[static_cast<std::size_t>(k)] * img[static_cast<std::size_t>(y) * W + x + k];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kh; ++k) acc += wy[static_cast<std::size_t>(k)] * tmp[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

std::vector<double> luma_plane(const Image& img) {
  const Image g = img.channels == 1 ? img : to_grayscale(img);
  std::vector<double> out(static_cast<std::size_t>(g.data.size()));
  for (Eigen::Index i = 0; i < g.data.size(); ++i) out[static_cast<std::size_t>(i)] = g.data[i];
  return out;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::DimensionMismatch, "ssim needs equal image shapes");
  if (a.channels != 1 && a.channels != 3) throw Error(ErrorCode::DimensionMismatch, "ssim needs 1 or 3 channels");
  if (a.height < 1 || a.width < 1) throw Error(ErrorCode::DimensionMismatch, "empty image");
  constexpr double C1 = 0.01 * 0.01;
  constexpr double C2 = 0.03 * 0.03;
  const int H = a.height, W = a.width;
  const auto wy = gaussian_window(std::min(11, H));
  const auto wx = gaussian_window(std::min(11, W));
  const auto pa = luma_plane(a), pb = luma_plane(b);
  std::vector<double> aa(pa.size()), bb(pa.size()), ab(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    aa[i] = pa[i] * pa[i];
    bb[i] = pb[i] * pb[i];
    ab[i] = pa[i] * pb[i];
  }
  const auto mu_a = filter_valid(pa, H, W, wy, wx);
  const auto mu_b = filter_valid(pb, H, W, wy, wx);
  const auto e_aa = filter_valid(aa, H, W, wy, wx);
  const auto e_bb = filter_valid(bb, H, W, wy, wx);
  const auto e_ab = filter_valid(ab, H, W, wy, wx);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = e_aa[i] - ma * ma, vb = e_bb[i] - mb * mb, cov = e_ab[i] - ma * mb;
    total += ((2 * ma * mb + C1) * (2 * cov + C2)) / ((ma * ma + mb * mb + C1) * (va + vb + C2));
  }
  return total / static_cast<double>(mu_a.size());
}

double clip_ssim(const std::vector<Image>& a, const std::vector<Image>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "clips differ in length");
  if (a.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += ssim(a[i], b[i]);
  return total / static_cast<double>(a.size());
}

// ---- action-driven windows -----------------------------------------------------------

std::vector<std::size_t> select_post_action_frames(const ActionLog& log, std::size_t k, std::size_t offset) {
  if (!(log.fps > 0.0)) throw Error(ErrorCode::InvalidConfig, "fps must be positive");
  std::set<std::size_t> picked;
  if (log.T == 0) return {};
  const auto last = static_cast<std::int64_t>(log.T) - 1;
  for (double tau : log.timestamps) {
    const std::int64_t f = std::clamp<std::int64_t>(round_to_index(tau * log.fps), 0, last);
    for (std::size_t j = offset; j <= k; ++j) {
      const std::int64_t idx = f + static_cast<std::int64_t>(j);
      if (idx >= 0 && idx <= last) picked.insert(static_cast<std::size_t>(idx));
    }
  }
  return {picked.begin(), picked.end()};
}

// ---- Fréchet ---------------------------------------------------------------------------

Eigen::VectorXd color_moment_features(const std::vector<Image>& clip) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(clip.size()) * 6);
  Eigen::Index o = 0;
  for (const auto& img : clip) {
    if (img.channels != 3) throw Error(ErrorCode::DimensionMismatch, "color moments need RGB frames");
    const double n = static_cast<double>(img.height) * img.width;
    for (int c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) sum += img.at(y, x, c);
      const double mean = sum / n;
      double var = 0.0;
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) var += (img.at(y, x, c) - mean) * (img.at(y, x, c) - mean);
      f[o + c] = mean;
      f[o + 3 + c] = std::sqrt(var / n);
    }
    o += 6;
  }
  return f;
}

FeatureStats stats_from_features(const Eigen::MatrixXd& features) {
  if (features.rows() < 2) throw Error(ErrorCode::TooFewClips, std::to_string(features.rows()) + " clips");
  FeatureStats s;
  s.n = static_cast<std::size_t>(features.rows());
  s.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - s.mean.transpose();
  s.cov = centered.transpose() * centered / static_cast<double>(features.rows() - 1);
  s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
  return s;
}

FeatureStats feature_stats(const std::vector<std::vector<Image>>& clips, const ClipFeatureExtractor& extractor) {
  if (clips.size() < 2) throw Error(ErrorCode::TooFewClips, std::to_string(clips.size()) + " clips");
  Eigen::MatrixXd feats;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (clips[i].empty()) throw Error(ErrorCode::DimensionMismatch, "clip " + std::to_string(i) + " is empty");
    std::vector<Image> prepared;
    prepared.reserve(kFeatureFrames);
    for (std::size_t idx : normalize_indices(clips[i].size(), kFeatureFrames))
      prepared.push_back(resize_bilinear(clips[i][idx], kFeatureSize, kFeatureSize));
    const Eigen::VectorXd f = extractor(prepared);
    if (i == 0) feats.resize(static_cast<Eigen::Index>(clips.size()), f.size());
    if (f.size() != feats.cols()) throw Error(ErrorCode::DimensionMismatch, "extractor output width changed");
    feats.row(static_cast<Eigen::Index>(i)) = f.transpose();
  }
  return stats_from_features(feats);
}

double frechet_distance(const FeatureStats& a, const FeatureStats& b) {
  const Eigen::Index d = a.mean.size();
  if (b.mean.size() != d || a.cov.rows() != d || a.cov.cols() != d || b.cov.rows() != d || b.cov.cols() != d)
    throw Error(ErrorCode::DimensionMismatch, "feature dimensions differ");
  const Eigen::MatrixXd sa = 0.5 * (a.cov + a.cov.transpose());
  const Eigen::MatrixXd sb = 0.5 * (b.cov + b.cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(sa);
  const Eigen::VectorXd la = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd sqrt_a = ea.eigenvectors() * la.asDiagonal() * ea.eigenvectors().transpose();
  Eigen::MatrixXd m = sqrt_a * sb * sqrt_a;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(m, Eigen::EigenvaluesOnly);
  const double tr_sqrt = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double dist = (a.mean - b.mean).squaredNorm() + sa.trace() + sb.trace() - 2.0 * tr_sqrt;
  return std::max(0.0, dist);
}

// ---- evaluation protocol -------------------------------------------------------------

std::vector<std::size_t> resample_indices(std::size_t frames, double src_fps, const EvalOptions& o) {
  if (!(src_fps > 0.0) || !(o.fps > 0.0)) throw Error(ErrorCode::InvalidConfig, "fps must be positive");
  const auto limit = static_cast<std::size_t>(std::floor(o.max_seconds * o.fps + 1e-9));
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; idx.size() < limit; ++i) {
    const auto f = round_to_index(static_cast<double>(i) * src_fps / o.fps);
    if (f < 0 || static_cast<std::size_t>(f) >= frames) break;
    if (idx.empty() || idx.back() != static_cast<std::size_t>(f)) idx.push_back(static_cast<std::size_t>(f));
  }
  return idx;
}

namespace {

std::vector<Image> eval_frames(const EvalClip& c, const std::vector<std::size_t>& idx, int size) {
  std::vector<Image> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(resize_bilinear(c.frames[i], size, size));
  return out;
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

ClipReport evaluate_clip(const EvalClip& gen, const EvalClip& gt, const EvalOptions& o) {
  ClipReport r;
  r.clip_id = gt.clip_id;
  if (!gen.text.empty() && !gt.text.empty()) {
    std::vector<double> chars, lines;
    for (std::size_t i : sample_eval_frames(gen.text.size(), gt.text.size(), o.K)) {
      chars.push_back(char_accuracy(join_lines(gt.text[i]), join_lines(gen.text[i])));
      lines.push_back(exact_line_accuracy(gt.text[i], gen.text[i]));
    }
    r.char_acc = mean_of(chars);
    r.exact_line_acc = mean_of(lines);
  }
  const auto gi = resample_indices(gen.frames.size(), gen.fps, o);
  const auto ti = resample_indices(gt.frames.size(), gt.fps, o);
  const std::size_t T = std::min(gi.size(), ti.size());
  const auto a = eval_frames(gen, std::vector<std::size_t>(gi.begin(), gi.begin() + static_cast<std::ptrdiff_t>(T)), o.size);
  const auto b = eval_frames(gt, std::vector<std::size_t>(ti.begin(), ti.begin() + static_cast<std::ptrdiff_t>(T)), o.size);
  std::vector<double> per_frame(T);
  for (std::size_t i = 0; i < T; ++i) per_frame[i] = ssim(a[i], b[i]);
  r.frames_evaluated = T;
  r.ssim_all = mean_of(per_frame).value_or(0.0);
  r.post_action_indices = select_post_action_frames(ActionLog{gt.action_times, o.fps, T}, o.k, o.offset);
  std::vector<double> post;
  for (std::size_t i : r.post_action_indices) post.push_back(per_frame[i]);
  r.ssim_post = mean_of(post);
  return r;
}

MetricReport evaluate(const std::vector<EvalClip>& generated, const std::vector<EvalClip>& ground_truth,
                      const EvalOptions& o) {
  std::map<std::string, const EvalClip*> gen, gt;
  for (const auto& c : generated) gen[c.clip_id] = &c;
  for (const auto& c : ground_truth) gt[c.clip_id] = &c;
  MetricReport report;
  report.options = o;
  std::vector<double> chars, lines, all, post;
  std::vector<std::vector<Image>> gen_clips, gt_clips;
  for (const auto& [id, g] : gt) {
    const auto it = gen.find(id);
    if (it == gen.end()) {
      ++report.skipped;
      continue;
    }
    ClipReport r = evaluate_clip(*it->second, *g, o);
    if (r.char_acc) chars.push_back(*r.char_acc);
    if (r.exact_line_acc) lines.push_back(*r.exact_line_acc);
    all.push_back(r.ssim_all);
    if (r.ssim_post) post.push_back(*r.ssim_post);
    gen_clips.push_back(eval_frames(*it->second, resample_indices(it->second->frames.size(), it->second->fps, o), kFeatureSize));
    gt_clips.push_back(eval_frames(*g, resample_indices(g->frames.size(), g->fps, o), kFeatureSize));
    report.clips.push_back(std::move(r));
  }
  for (const auto& [id, g] : gen)
    if (!gt.count(id)) ++report.skipped;
  report.char_acc = mean_of(chars);
  report.exact_line_acc = mean_of(lines);
  report.ssim_all = mean_of(all);
  report.ssim_post = mean_of(post);
  auto nonempty = [](const std::vector<std::vector<Image>>& clips) {
    return std::all_of(clips.begin(), clips.end(), [](const auto& c) { return !c.empty(); });
  };
  if (report.clips.size() >= 2 && nonempty(gen_clips) && nonempty(gt_clips))
    report.frechet = frechet_distance(feature_stats(gen_clips), feature_stats(gt_clips));
  return report;
}

ordered_json report_to_json(const MetricReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json clips = ordered_json::array();
  for (const auto& c : r.clips) {
    clips.push_back({{"clip_id", c.clip_id},
                     {"char_acc", opt(c.char_acc)},
                     {"exact_line_acc", opt(c.exact_line_acc)},
                     {"ssim_all", c.ssim_all},
                     {"ssim_post", opt(c.ssim_post)},
                     {"frames_evaluated", c.frames_evaluated},
                     {"post_action_indices", c.post_action_indices}});
  }
  ordered_json j;
  j["clips"] = std::move(clips);
  j["aggregate"] = {{"clips", r.clips.size()},
                    {"skipped", r.skipped},
                    {"char_acc", opt(r.char_acc)},
                    {"exact_line_acc", opt(r.exact_line_acc)},
                    {"ssim_all", opt(r.ssim_all)},
                    {"ssim_post", opt(r.ssim_post)},
                    {"lpips", "unavailable"}};
  j["frechet"] = {{"groups", {"generated", "ground_truth"}},
                  {"extractor", "color_moments_16x112"},
                  {"value", opt(r.frechet)}};
  j["protocol"] = {{"K", r.options.K},
                   {"k", r.options.k},
                   {"action_start_offset", r.options.offset},
                   {"fps", r.options.fps},
                   {"max_seconds", r.options.max_seconds},
                   {"truncate", "after_resample"},
                   {"size", r.options.size}};
  return j;
}

}  // namespace ncf
