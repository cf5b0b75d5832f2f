#include "ncforge/toy_nc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ncforge/error.hpp"
#include "ncforge/numeric.hpp"

namespace ncf {

// ---- contextual mask -----------------------------------------------------------

ContextualMask build_contextual_mask(int L_v, int L_a, int w, int lag) {
  if (L_v < 1 || L_a < 0 || w < 0 || lag < 0)
    throw Error(ErrorCode::InvalidConfig, "mask needs L_v >= 1 and non-negative L_a, w, lag");
  ContextualMask m{L_v, L_a, w, lag, {}};
  const int n = L_v + L_a;
  m.allowed.assign(static_cast<std::size_t>(n) * n, 0);
  auto set = [&](int q, int k) { m.allowed[static_cast<std::size_t>(q) * n + k] = 1; };
  for (int i = 0; i < L_v; ++i) {
    for (int j = std::max(0, i - w); j <= std::min(L_v - 1, i + w); ++j) set(i, j);
    for (int j = std::max(0, i - lag); j <= std::min(i, L_a - 1); ++j) set(i, L_v + j);
  }
  for (int i = 0; i < L_a; ++i) {
    for (int t = i + lag; t < L_v; ++t) set(L_v + i, t);
    set(L_v + i, L_v + i);
  }
  return m;
}

std::string export_mask(const ContextualMask& mask) {
  char header[128];
  std::snprintf(header, sizeof header, "ncmask v1 L_v=%d L_a=%d w=%d lag=%d\n", mask.L_v, mask.L_a, mask.w, mask.lag);
  std::string out = header;
  const std::size_t bits = mask.allowed.size();
  std::string packed((bits + 7) / 8, '\0');
  for (std::size_t i = 0; i < bits; ++i)
    if (mask.allowed[i]) packed[i / 8] = static_cast<char>(packed[i / 8] | (0x80 >> (i % 8)));
  return out + packed;
}

ContextualMask parse_mask(std::string_view bytes) {
  const auto nl = bytes.find('\n');
  if (nl == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, "mask header missing");
  const std::string header(bytes.substr(0, nl));
  ContextualMask m;
  int consumed = 0;
  if (std::sscanf(header.c_str(), "ncmask v1 L_v=%d L_a=%d w=%d lag=%d%n", &m.L_v, &m.L_a, &m.w, &m.lag, &consumed) != 4 ||
      static_cast<std::size_t>(consumed) != header.size() || m.L_v < 1 || m.L_a < 0 || m.w < 0 || m.lag < 0)
    throw Error(ErrorCode::InvalidConfig, "bad mask header: " + header);
  const std::size_t n = static_cast<std::size_t>(m.size());
  const std::string_view packed = bytes.substr(nl + 1);
  if (packed.size() != (n * n + 7) / 8) throw Error(ErrorCode::InvalidConfig, "mask body has the wrong length");
  m.allowed.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    m.allowed[i] = (static_cast<unsigned char>(packed[i / 8]) >> (7 - i % 8)) & 1u;
  return m;
}

// ---- toy backbone ---------------------------------------------------------------

std::string to_string(InjectionMode m) {
  switch (m) {
    case InjectionMode::External: return "external";
    case InjectionMode::Contextual: return "contextual";
    case InjectionMode::Residual: return "residual";
    case InjectionMode::Internal: return "internal";
  }
  return "external";
}

InjectionMode injection_mode_from_string(std::string_view s) {
  for (auto m : {InjectionMode::External, InjectionMode::Contextual, InjectionMode::Residual, InjectionMode::Internal})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::UnknownMode, std::string(s));
}

namespace {

using Row = Eigen::RowVectorXd;
using Mat = Eigen::MatrixXd;

Mat gaussian(SeededRng& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal() * scale;
  return m;
}

AttentionWeights attention_weights(SeededRng& rng, int d, bool zero_out) {
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  AttentionWeights a{gaussian(rng, d, d, s), gaussian(rng, d, d, s), gaussian(rng, d, d, s), gaussian(rng, d, d, s)};
  if (zero_out) a.wo.setZero();
  return a;
}

// All products below go through these loops so a row's result depends only
// on that row, never on how many rows were batched with it.
Row row_linear(const Row& x, const Mat& w) {
  Row y(w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) acc += x[i] * w(i, j);
    y[j] = acc;
  }
  return y;
}

Mat linear(const Mat& x, const Mat& w) {
  Mat y(x.rows(), w.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) y.row(r) = row_linear(x.row(r), w);
  return y;
}

Row layer_norm(const Row& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) mean += x[i];
  mean /= n;
  double var = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) var += (x[i] - mean) * (x[i] - mean);
  var /= n;
  const double inv = 1.0 / std::sqrt(var + 1e-5);
  Row y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = (x[i] - mean) * inv;
  return y;
}

Mat layer_norm_rows(const Mat& x) {
  Mat y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) y.row(r) = layer_norm(x.row(r));
  return y;
}

// Multi-head attention of one query row over the listed key rows. Scores and
// the softmax run in long double; only the allowed keys enter the sum.
Row attend(const Row& q, const Mat& k, const Mat& v, const std::vector<int>& keys, int n_heads) {
  const Eigen::Index d = q.size();
  const Eigen::Index dh = d / n_heads;
  Row out = Row::Zero(d);
  if (keys.empty()) return out;
  const long double scale = 1.0L / std::sqrt(static_cast<long double>(dh));
  std::vector<long double> scores(keys.size());
  for (int h = 0; h < n_heads; ++h) {
    const Eigen::Index off = h * dh;
    long double mx = -INFINITY;
    for (std::size_t n = 0; n < keys.size(); ++n) {
      long double s = 0.0L;
      for (Eigen::Index c = 0; c < dh; ++c) s += static_cast<long double>(q[off + c]) * k(keys[n], off + c);
      scores[n] = s * scale;
      mx = std::max(mx, scores[n]);
    }
    long double z = 0.0L;
    for (auto& s : scores) {
      s = std::exp(s - mx);
      z += s;
    }
    for (Eigen::Index c = 0; c < dh; ++c) {
      long double acc = 0.0L;
      for (std::size_t n = 0; n < keys.size(); ++n) acc += scores[n] / z * v(keys[n], off + c);
      out[off + c] = static_cast<double>(acc);
    }
  }
  return out;
}

std::vector<int> range_keys(int lo, int hi, int offset = 0) {
  std::vector<int> keys;
  for (int j = lo; j <= hi; ++j) keys.push_back(offset + j);
  return keys;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::tanh(0.7978845608028654 * (x + 0.044715 * x * x * x))); }

Row ffn(const Row& x, const FfnWeights& f) {
  Row h = row_linear(x, f.w1);
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = gelu(h[i] + f.b1[i]);
  Row y = row_linear(h, f.w2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += f.b2[i];
  return y;
}

struct Projected {
  Mat q, k, v;
};

Projected project(const Mat& normed, const AttentionWeights& a) {
  return {linear(normed, a.wq), linear(normed, a.wk), linear(normed, a.wv)};
}

Mat video_self_attention(const Mat& h, const AttentionWeights& a, int window, int n_heads, const Projected* pre = nullptr) {
  const int L = static_cast<int>(h.rows());
  const Projected p = pre ? *pre : project(layer_norm_rows(h), a);
  Mat out(L, h.cols());
  for (int i = 0; i < L; ++i)
    out.row(i) = row_linear(attend(p.q.row(i), p.k, p.v, range_keys(std::max(0, i - window), std::min(L - 1, i + window)), n_heads), a.wo);
  return out;
}

Row text_cross_attention(const Row& s, const Mat& context, const AttentionWeights& a, int n_heads, const Projected& ctx) {
  const Row q = row_linear(layer_norm(s), a.wq);
  return row_linear(attend(q, ctx.k, ctx.v, range_keys(0, static_cast<int>(context.rows()) - 1), n_heads), a.wo);
}

Projected context_projection(const Mat& context, const AttentionWeights& a) {
  return {Mat(), linear(context, a.wk), linear(context, a.wv)};
}

// Text cross-attention and FFN on top of s; the optional extra term is added
// after the text term.
Row finish_block(const Row& s, const BlockWeights& b, const ToyModelParams& P, const Projected& ctx, const Row* extra) {
  Row x = s + text_cross_attention(s, P.text_context, b.text_attn, P.config.n_heads, ctx);
  if (extra) x += *extra;
  return x + ffn(layer_norm(x), b.ffn);
}

Mat block_forward(const Mat& h, const BlockWeights& b, const ToyModelParams& P) {
  const Mat s = h + video_self_attention(h, b.self_attn, P.config.window, P.config.n_heads);
  const Projected ctx = context_projection(P.text_context, b.text_attn);
  Mat out(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i) out.row(i) = finish_block(s.row(i), b, P, ctx, nullptr);
  return out;
}

void check_shapes(InjectionMode mode, const Mat& video, const Mat& actions, const std::optional<Mat>& mouse,
                  const ToyModelParams& P) {
  const auto& c = P.config;
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ShapeMismatch, what); };
  if (video.rows() != c.L_v || video.cols() != c.d_model) fail("video latents must be L_v x d_model");
  if (actions.cols() != c.d_model) fail("action latents must have d_model columns");
  if (mode == InjectionMode::Contextual) {
    if (actions.rows() != c.L_a) fail("action latents must have L_a rows");
  } else if (actions.rows() != video.rows()) {
    fail("action latents must have one row per video step");
  }
  if (mouse) {
    if (c.d_mouse < 1) fail("model has no mouse pathway");
    if (mouse->rows() != actions.rows() || mouse->cols() != c.d_mouse) fail("mouse latents must be rows(actions) x d_mouse");
  }
}

Mat external_delta(const Mat& actions, const std::optional<Mat>& mouse, const ToyModelParams& P) {
  const auto& E = P.external;
  Mat u = linear(actions, E.in_action);
  if (mouse) u += linear(*mouse, E.in_mouse);
  const int L = static_cast<int>(u.rows());
  for (const auto& layer : E.layers) {
    const Projected p = project(layer_norm_rows(u), layer);
    Mat next = u;
    for (int t = 0; t < L; ++t) next.row(t) += row_linear(attend(p.q.row(t), p.k, p.v, range_keys(0, t), P.config.n_heads), layer.wo);
    u = next;
  }
  return linear(u, E.out);
}

Mat contextual_forward(const Mat& video, const Mat& actions, const ToyModelParams& P) {
  const auto& c = P.config;
  const int L_v = static_cast<int>(video.rows());
  const int L_a = static_cast<int>(actions.rows());
  const ContextualMask mask = build_contextual_mask(L_v, L_a, c.window, c.lag);
  Mat hv = video, ha = actions;
  for (const auto& b : P.blocks) {
    Mat tokens(L_v + L_a, c.d_model);
    tokens << hv, ha;
    const Mat normed = layer_norm_rows(tokens);
    const Projected p = project(normed, b.self_attn);
    Projected pv{p.q.topRows(L_v), p.k.topRows(L_v), p.v.topRows(L_v)};
    // Video rows: windowed self-attention, then a separately normalized
    // branch over the V2A keys with its own output projection.
    Mat sv = hv + video_self_attention(hv, b.self_attn, c.window, c.n_heads, &pv);
    const Mat act_normed = normed.bottomRows(L_a);
    const Mat ak = linear(act_normed, b.action_attn.wk), av = linear(act_normed, b.action_attn.wv);
    const Projected ctx = context_projection(P.text_context, b.text_attn);
    Mat next_v(L_v, c.d_model);
    for (int i = 0; i < L_v; ++i) {
      std::vector<int> keys;
      for (int j = 0; j < L_a; ++j)
        if (mask.at(i, L_v + j)) keys.push_back(j);
      if (!keys.empty()) {
        const Row q = row_linear(normed.row(i), b.action_attn.wq);
        sv.row(i) += row_linear(attend(q, ak, av, keys, c.n_heads), b.action_attn.wo);
      }
      next_v.row(i) = finish_block(sv.row(i), b, P, ctx, nullptr);
    }
    // Action rows: one softmax over the A2V frames and themselves.
    Mat next_a(L_a, c.d_model);
    for (int i = 0; i < L_a; ++i) {
      std::vector<int> keys;
      for (int k = 0; k < L_v + L_a; ++k)
        if (mask.at(L_v + i, k)) keys.push_back(k);
      const Row s = ha.row(i) + row_linear(attend(p.q.row(L_v + i), p.k, p.v, keys, c.n_heads), b.self_attn.wo);
      next_a.row(i) = s + ffn(layer_norm(s), b.ffn);
    }
    hv = next_v;
    ha = next_a;
  }
  return hv;
}

Mat residual_forward(const Mat& video, const Mat& actions, const std::optional<Mat>& mouse, const ToyModelParams& P) {
  Mat h = video;
  for (int bi = 0; bi < static_cast<int>(P.blocks.size()); ++bi) {
    const auto& b = P.blocks[static_cast<std::size_t>(bi)];
    h = block_forward(h, b, P);
    if (!P.injects_at(bi)) continue;
    for (Eigen::Index t = 0; t < h.rows(); ++t) {
      Row pre = row_linear(actions.row(t), b.res_action);
      if (mouse) pre += row_linear(mouse->row(t), b.res_mouse);
      for (Eigen::Index k = 0; k < pre.size(); ++k) pre[k] = std::tanh(pre[k] + b.res_bias[k]);
      h.row(t) += row_linear(pre, b.res_out);
    }
  }
  return h;
}

Mat internal_forward(const Mat& video, const Mat& actions, const std::optional<Mat>& mouse, const ToyModelParams& P) {
  const auto& c = P.config;
  const bool mouse_keys = mouse && c.internal_mouse_keys;
  Mat h = video;
  for (int bi = 0; bi < static_cast<int>(P.blocks.size()); ++bi) {
    const auto& b = P.blocks[static_cast<std::size_t>(bi)];
    if (!P.injects_at(bi)) {
      h = block_forward(h, b, P);
      continue;
    }
    const Mat s = h + video_self_attention(h, b.self_attn, c.window, c.n_heads);
    const Projected ctx = context_projection(P.text_context, b.text_attn);
    const int T = static_cast<int>(actions.rows());
    Mat keys_src = layer_norm_rows(actions);
    if (mouse_keys) {
      Mat both(2 * T, c.d_model);
      both << keys_src, linear(*mouse, b.mouse_key);
      keys_src = both;
    }
    const Mat ak = linear(keys_src, b.action_attn.wk), av = linear(keys_src, b.action_attn.wv);
    Mat out(h.rows(), h.cols());
    for (int t = 0; t < static_cast<int>(h.rows()); ++t) {
      std::vector<int> keys = range_keys(0, t);
      if (mouse_keys)
        for (int j = 0; j <= t; ++j) keys.push_back(T + j);
      const Row q = row_linear(layer_norm(s.row(t)), b.action_attn.wq);
      const Row ca = row_linear(attend(q, ak, av, keys, c.n_heads), b.action_attn.wo);
      out.row(t) = finish_block(s.row(t), b, P, ctx, &ca);
    }
    h = out;
  }
  return h;
}

}  // namespace

ToyModelParams make_toy_params(const ToyConfig& config) {
  const auto& c = config;
  if (c.d_model < 1 || c.n_heads < 1 || c.d_model % c.n_heads != 0)
    throw Error(ErrorCode::InvalidConfig, "d_model must be a positive multiple of n_heads");
  if (c.n_blocks < 1 || c.L_v < 1 || c.L_a < 0 || c.d_mouse < 0 || c.n_text < 1 || c.window < 0 || c.lag < 0 ||
      c.external_layers < 0 || c.inject_every < 1)
    throw Error(ErrorCode::InvalidConfig, "toy model sizes out of range");
  SeededRng rng(c.seed);
  const int d = c.d_model;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  const bool z = c.zero_init_action_out;
  ToyModelParams P;
  P.config = c;
  P.text_context = gaussian(rng, c.n_text, d, 1.0);
  for (int bi = 0; bi < c.n_blocks; ++bi) {
    BlockWeights b;
    b.self_attn = attention_weights(rng, d, false);
    b.text_attn = attention_weights(rng, d, false);
    b.ffn.w1 = gaussian(rng, d, 4 * d, s);
    b.ffn.b1 = gaussian(rng, 1, 4 * d, 0.02);
    b.ffn.w2 = gaussian(rng, 4 * d, d, 1.0 / std::sqrt(4.0 * d));
    b.ffn.b2 = gaussian(rng, 1, d, 0.02);
    b.action_attn = attention_weights(rng, d, z);
    b.mouse_key = gaussian(rng, std::max(c.d_mouse, 0), d, c.d_mouse > 0 ? 1.0 / std::sqrt(static_cast<double>(c.d_mouse)) : 0.0);
    b.res_action = gaussian(rng, d, d, s);
    b.res_mouse = gaussian(rng, c.d_mouse, d, c.d_mouse > 0 ? 1.0 / std::sqrt(static_cast<double>(c.d_mouse)) : 0.0);
    b.res_bias = gaussian(rng, 1, d, 0.02);
    b.res_out = gaussian(rng, d, d, s);
    if (z) b.res_out.setZero();
    P.blocks.push_back(std::move(b));
  }
  P.external.in_action = gaussian(rng, d, d, s);
  P.external.in_mouse = gaussian(rng, c.d_mouse, d, c.d_mouse > 0 ? 1.0 / std::sqrt(static_cast<double>(c.d_mouse)) : 0.0);
  for (int l = 0; l < c.external_layers; ++l) P.external.layers.push_back(attention_weights(rng, d, false));
  P.external.out = gaussian(rng, d, d, s);
  if (z) P.external.out.setZero();
  return P;
}

Eigen::MatrixXd backbone_forward(const Eigen::MatrixXd& video, const ToyModelParams& params) {
  if (video.cols() != params.config.d_model) throw Error(ErrorCode::ShapeMismatch, "video latents must have d_model columns");
  Mat h = video;
  for (const auto& b : params.blocks) h = block_forward(h, b, params);
  return h;
}

Eigen::MatrixXd forward(InjectionMode mode, const Eigen::MatrixXd& video, const Eigen::MatrixXd& actions,
                        const std::optional<Eigen::MatrixXd>& mouse, const ToyModelParams& params) {
  check_shapes(mode, video, actions, mouse, params);
  switch (mode) {
    case InjectionMode::External:
      return backbone_forward(video + external_delta(actions, mouse, params), params);
    case InjectionMode::Contextual:
      return contextual_forward(video, actions, params);
    case InjectionMode::Residual:
      return residual_forward(video, actions, mouse, params);
    case InjectionMode::Internal:
      return internal_forward(video, actions, mouse, params);
  }
  throw Error(ErrorCode::UnknownMode, std::to_string(static_cast<int>(mode)));
}

// ---- losses --------------------------------------------------------------------------

namespace {

Mat project_normalize(const Mat& x, const std::optional<Mat>& proj) {
  Mat y = proj ? Mat(x * *proj) : x;
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    const double n = y.row(r).norm();
    if (n > 0.0) y.row(r) /= n;
  }
  return y;
}

// Mean cross-entropy where anchor a's positive is candidate a.
double info_nce(const Mat& anchors, const Mat& candidates, double tau) {
  const Eigen::Index n = anchors.rows();
  long double total = 0.0L;
  for (Eigen::Index a = 0; a < n; ++a) {
    std::vector<long double> logits(static_cast<std::size_t>(n));
    long double mx = -INFINITY;
    for (Eigen::Index b = 0; b < n; ++b) {
      long double dot = 0.0L;
      for (Eigen::Index k = 0; k < anchors.cols(); ++k) dot += static_cast<long double>(anchors(a, k)) * candidates(b, k);
      logits[static_cast<std::size_t>(b)] = dot / tau;
      mx = std::max(mx, logits[static_cast<std::size_t>(b)]);
    }
    long double z = 0.0L;
    for (auto l : logits) z += std::exp(l - mx);
    total += mx + std::log(z) - logits[static_cast<std::size_t>(a)];
  }
  return static_cast<double>(total / n);
}

double pair_loss(const Mat& f, const Mat& a, bool symmetric, double tau) {
  if (f.cols() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "projected feature widths differ");
  const double forward = info_nce(f, a, tau);
  return symmetric ? 0.5 * (forward + info_nce(a, f, tau)) : forward;
}

}  // namespace

double contrastive_loss(const Eigen::MatrixXd& frame_feats, const Eigen::MatrixXd& action_feats,
                        const std::optional<Eigen::MatrixXd>& mouse_feats, const LossConfig& cfg) {
  if (!(cfg.temperature > 0.0)) throw Error(ErrorCode::InvalidConfig, "temperature must be positive");
  if (cfg.lag < 0) throw Error(ErrorCode::InvalidConfig, "lag must be non-negative");
  const Eigen::Index T = frame_feats.rows();
  if (action_feats.rows() != T || (mouse_feats && mouse_feats->rows() != T))
    throw Error(ErrorCode::DimensionMismatch, "feature sequences differ in length");
  if ((!cfg.frame_valid.empty() && static_cast<Eigen::Index>(cfg.frame_valid.size()) != T) ||
      (!cfg.action_valid.empty() && static_cast<Eigen::Index>(cfg.action_valid.size()) != T))
    throw Error(ErrorCode::DimensionMismatch, "validity masks must have one entry per step");
  std::vector<Eigen::Index> anchors;
  for (Eigen::Index t = cfg.lag; t < T; ++t) {
    const bool fv = cfg.frame_valid.empty() || cfg.frame_valid[static_cast<std::size_t>(t)];
    const bool av = cfg.action_valid.empty() || cfg.action_valid[static_cast<std::size_t>(t - cfg.lag)];
    if (fv && av) anchors.push_back(t);
  }
  if (anchors.size() < 2) throw Error(ErrorCode::DegenerateBatch, std::to_string(anchors.size()) + " valid steps");
  const Mat f = project_normalize(frame_feats, cfg.frame_proj);
  const Mat a = project_normalize(action_feats, cfg.action_proj);
  const auto n = static_cast<Eigen::Index>(anchors.size());
  Mat fa(n, f.cols()), aa(n, a.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    fa.row(i) = f.row(anchors[static_cast<std::size_t>(i)]);
    aa.row(i) = a.row(anchors[static_cast<std::size_t>(i)] - cfg.lag);
  }
  const double loss_fa = pair_loss(fa, aa, cfg.symmetric, cfg.temperature);
  if (!mouse_feats) return loss_fa;
  const Mat m = project_normalize(*mouse_feats, cfg.mouse_proj);
  Mat ma(n, m.cols());
  for (Eigen::Index i = 0; i < n; ++i) ma.row(i) = m.row(anchors[static_cast<std::size_t>(i)] - cfg.lag);
  return 0.5 * (loss_fa + pair_loss(fa, ma, cfg.symmetric, cfg.temperature));
}

double future_pred_loss(const Eigen::MatrixXd& action_feats, const Eigen::MatrixXd& frame_feats, int lag,
                        const Eigen::MatrixXd& head, const std::optional<Eigen::MatrixXd>& proj) {
  if (lag < 0) throw Error(ErrorCode::InvalidConfig, "lag must be non-negative");
  const Eigen::Index T = action_feats.rows();
  if (frame_feats.rows() != T) throw Error(ErrorCode::DimensionMismatch, "feature sequences differ in length");
  if (T <= lag) throw Error(ErrorCode::DegenerateBatch, "no (t, t+lag) pairs");
  if (head.rows() != action_feats.cols() || (proj && proj->rows() != frame_feats.cols()))
    throw Error(ErrorCode::DimensionMismatch, "head/projection input widths");
  const Mat pred = action_feats * head;
  const Mat target = proj ? Mat(frame_feats * *proj) : frame_feats;
  if (pred.cols() != target.cols()) throw Error(ErrorCode::DimensionMismatch, "head and projection output widths differ");
  double total = 0.0;
  for (Eigen::Index t = 0; t + lag < T; ++t) total += (pred.row(t) - target.row(t + lag)).squaredNorm();
  return total / static_cast<double>(T - lag);
}

CursorLosses cursor_losses(const std::vector<FrameTensor>& pred_frames, const std::vector<Image>& ref_imgs,
                           const std::vector<Image>& ref_masks, const std::vector<NormPoint>& pred_traj,
                           const std::vector<NormPoint>& gt_traj) {
  if (pred_traj.size() != gt_traj.size()) throw Error(ErrorCode::DimensionMismatch, "trajectory lengths differ");
  if (pred_frames.size() != ref_imgs.size() || ref_imgs.size() != ref_masks.size())
    throw Error(ErrorCode::DimensionMismatch, "frame, reference and mask counts differ");
  CursorLosses out;
  if (!pred_traj.empty()) {
    double acc = 0.0;
    for (std::size_t t = 0; t < pred_traj.size(); ++t) {
      const double dx = pred_traj[t].x - gt_traj[t].x, dy = pred_traj[t].y - gt_traj[t].y;
      acc += dx * dx + dy * dy;
    }
    out.position_l2 = acc / static_cast<double>(pred_traj.size());
  }
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < pred_frames.size(); ++t) {
    const auto &p = pred_frames[t], &r = ref_imgs[t], &m = ref_masks[t];
    if (!p.same_shape(r) || m.height != p.height || m.width != p.width || m.channels != 1)
      throw Error(ErrorCode::DimensionMismatch, "frame " + std::to_string(t));
    for (int y = 0; y < p.height; ++y) {
      for (int x = 0; x < p.width; ++x) {
        const double w = m.at(y, x);
        if (w == 0.0) continue;
        den += w;
        for (int c = 0; c < p.channels; ++c) {
          const double d = static_cast<double>(p.at(y, x, c)) - r.at(y, x, c);
          num += w * d * d;
        }
      }
    }
  }
  out.masked_patch_l2 = den > 0.0 ? num / den : 0.0;
  return out;
}

double cursor_hit_rate(const std::vector<NormPoint>& pred_traj, const std::vector<NormPoint>& gt_traj, double radius) {
  if (pred_traj.size() != gt_traj.size()) throw Error(ErrorCode::DimensionMismatch, "trajectory lengths differ");
  if (pred_traj.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < pred_traj.size(); ++t)
    if (std::hypot(pred_traj[t].x - gt_traj[t].x, pred_traj[t].y - gt_traj[t].y) <= radius) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pred_traj.size());
}

}  // namespace ncf
