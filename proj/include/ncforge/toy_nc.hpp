#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncforge/raster.hpp"

namespace ncf {

// ---- contextual mask -----------------------------------------------------------

struct ContextualMask {
  int L_v = 0;
  int L_a = 0;
  int w = 0;
  int lag = 0;
  // (L_v + L_a)^2, row-major; rows are queries, columns keys.
  std::vector<std::uint8_t> allowed;

  int size() const { return L_v + L_a; }
  bool at(int q, int k) const { return allowed[static_cast<std::size_t>(q) * size() + k] != 0; }
  bool operator==(const ContextualMask&) const = default;
};

// V2V |i-j| <= w; V2A max(0, i-lag) <= j <= min(i, L_a-1); A2V t >= i+lag;
// A2A diagonal.
ContextualMask build_contextual_mask(int L_v, int L_a, int w, int lag);

// "ncmask v1 L_v=<n> L_a=<n> w=<n> lag=<n>\n" followed by the matrix as bits,
// row-major, most significant bit first, zero-padded to a whole byte.
std::string export_mask(const ContextualMask& mask);
ContextualMask parse_mask(std::string_view bytes);

// ---- toy backbone ---------------------------------------------------------------

enum class InjectionMode { External, Contextual, Residual, Internal };

std::string to_string(InjectionMode m);
InjectionMode injection_mode_from_string(std::string_view s);  // throws UnknownMode

struct ToyConfig {
  int d_model = 32;
  int n_heads = 4;
  int n_blocks = 2;
  int L_v = 16;
  int L_a = 16;
  int d_mouse = 0;        // 0 disables the mouse pathway
  int n_text = 4;         // rows of the fixed text context
  int window = 2;         // V2V half-width
  int lag = 1;            // V2A / A2V lag, in token steps
  int external_layers = 1;
  int inject_every = 2;   // Residual/Internal act on blocks b with b % inject_every == 0
  bool internal_mouse_keys = false;
  bool zero_init_action_out = false;
  std::uint64_t seed = 0;
};

struct AttentionWeights {
  Eigen::MatrixXd wq, wk, wv, wo;  // d x d, applied as x * W
};

struct FfnWeights {
  Eigen::MatrixXd w1;  // d x 4d
  Eigen::RowVectorXd b1;
  Eigen::MatrixXd w2;  // 4d x d
  Eigen::RowVectorXd b2;
};

struct BlockWeights {
  AttentionWeights self_attn;
  AttentionWeights text_attn;
  FfnWeights ffn;
  AttentionWeights action_attn;  // Contextual video->action branch and Internal CA_action
  Eigen::MatrixXd mouse_key;     // d_mouse x d, Internal mouse keys
  Eigen::MatrixXd res_action;    // d x d, Residual branch
  Eigen::MatrixXd res_mouse;     // d_mouse x d
  Eigen::RowVectorXd res_bias;
  Eigen::MatrixXd res_out;       // d x d
};

struct ExternalWeights {
  Eigen::MatrixXd in_action;  // d x d
  Eigen::MatrixXd in_mouse;   // d_mouse x d
  std::vector<AttentionWeights> layers;
  Eigen::MatrixXd out;        // d x d
};

struct ToyModelParams {
  ToyConfig config;
  Eigen::MatrixXd text_context;  // n_text x d
  std::vector<BlockWeights> blocks;
  ExternalWeights external;

  bool injects_at(int block) const { return block % config.inject_every == 0; }
};

// Seeded weights; identical configs give identical parameters. With
// zero_init_action_out every action-pathway output projection is zero.
ToyModelParams make_toy_params(const ToyConfig& config);

// Plain backbone over video latents (L_v x d): per block
//   s = h + SA(LN h) under the V2V band, x = s + CA_text(LN s, c), h' = x + FFN(LN x).
Eigen::MatrixXd backbone_forward(const Eigen::MatrixXd& video, const ToyModelParams& params);

// Output video latents (L_v x d). External, Residual and Internal need
// L_a == L_v. mouse (L_a x d_mouse) is optional. Throws ShapeMismatch.
Eigen::MatrixXd forward(InjectionMode mode, const Eigen::MatrixXd& video, const Eigen::MatrixXd& actions,
                        const std::optional<Eigen::MatrixXd>& mouse, const ToyModelParams& params);

// ---- losses --------------------------------------------------------------------------

struct LossConfig {
  double temperature = 0.1;
  int lag = 0;  // frame t pairs with action t - lag
  bool symmetric = false;
  std::vector<bool> frame_valid;   // empty = all valid
  std::vector<bool> action_valid;  // empty = all valid
  // Optional projections into the shared space; identity when absent.
  std::optional<Eigen::MatrixXd> frame_proj;
  std::optional<Eigen::MatrixXd> action_proj;
  std::optional<Eigen::MatrixXd> mouse_proj;
};

// InfoNCE over same-sequence negatives: anchors are frames t with t - lag >= 0
// valid on both sides; logits are cosine similarities / temperature against
// the actions paired with every anchor. With mouse features the action and
// mouse terms are averaged. Throws DegenerateBatch below two anchors.
double contrastive_loss(const Eigen::MatrixXd& frame_feats, const Eigen::MatrixXd& action_feats,
                        const std::optional<Eigen::MatrixXd>& mouse_feats, const LossConfig& cfg);

// Mean over t < T - lag of ||A_t * head - F_{t+lag} * proj||^2 (proj identity when absent).
double future_pred_loss(const Eigen::MatrixXd& action_feats, const Eigen::MatrixXd& frame_feats, int lag,
                        const Eigen::MatrixXd& head, const std::optional<Eigen::MatrixXd>& proj = std::nullopt);

struct CursorLosses {
  double position_l2 = 0.0;
  double masked_patch_l2 = 0.0;
};

// position_l2 = mean_t ||pred_t - gt_t||^2; masked_patch_l2 = sum of
// mask * (pred - ref)^2 over frames, pixels and channels divided by the mask
// sum (0 when the mask is empty). Throws DimensionMismatch.
CursorLosses cursor_losses(const std::vector<FrameTensor>& pred_frames, const std::vector<Image>& ref_imgs,
                           const std::vector<Image>& ref_masks, const std::vector<NormPoint>& pred_traj,
                           const std::vector<NormPoint>& gt_traj);

// Fraction of steps whose predicted point lies within `radius` (normalized
// units) of the target.
double cursor_hit_rate(const std::vector<NormPoint>& pred_traj, const std::vector<NormPoint>& gt_traj, double radius);

}  // namespace ncf
