#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncforge/error.hpp"
#include "ncforge/raster.hpp"

namespace ncf {

// ---- frozen index maps -------------------------------------------------------

inline constexpr int kMouseFlags = 13;
inline constexpr int kKeyboardFlags = 169;
inline constexpr int kRawActionDim = kMouseFlags + kKeyboardFlags;

enum class MouseButton : std::uint8_t { Left = 0, Right = 1 };

// Raw layout: 0..12 mouse (left down/up/double/drag_start/drag_end, right
// likewise, scroll_up, scroll_down, move); 13..107 printable ASCII 0x20..0x7E;
// 108..133 named keys; 134..137 modifiers; 138..181 chords.
const std::vector<std::string>& raw_action_names();
const std::vector<std::string>& named_key_names();
const std::vector<std::string>& modifier_names();
const std::vector<std::string>& chord_names();

// Type-4 vocabulary: named keys, then modifiers, then chords.
const std::vector<std::string>& shortcut_vocabulary();
std::optional<int> shortcut_id(std::string_view name);

// Canonical spelling of a non-character key ("ctrl+c", "Enter", "shift"), or
// nullopt when it is not in the map. Matching is case-insensitive.
std::optional<std::string> canonical_key(std::string_view name);

// Raw index for a key: one printable ASCII character or a canonical name.
// Throws UnknownKey.
int raw_key_index(std::string_view key);

// ---- events ----------------------------------------------------------------

enum class GuiEventKind : std::uint8_t { MouseDown, MouseUp, DoubleClick, DragStart, DragEnd, Scroll, Move, Key };

struct GuiEvent {
  double time = 0.0;
  GuiEventKind kind = GuiEventKind::Key;
  MouseButton button = MouseButton::Left;
  int scroll = 0;   // >0 up, <0 down
  std::string key;  // single printable character, named key, modifier or chord
  std::optional<NormPoint> pos;

  bool operator==(const GuiEvent&) const = default;
};

GuiEvent key_event(double time, std::string key);
GuiEvent mouse_event(double time, GuiEventKind kind, MouseButton button = MouseButton::Left);
GuiEvent scroll_event(double time, int amount);

// Buckets a time-ordered event list into `frames` bins by round(time * fps),
// clamped to the last frame.
std::vector<std::vector<GuiEvent>> bucket_events(const std::vector<GuiEvent>& events, double fps, std::size_t frames);

// Key events recovered from terminal input bytes (the payload of "i" cast
// events): printable characters, CR as Enter, DEL/BS as Backspace, C0 control
// bytes as ctrl chords, and the common CSI/SS3 cursor and editing sequences.
std::vector<std::string> decode_terminal_input(std::string_view bytes);

// ---- raw view ----------------------------------------------------------------

using RawActionVector = std::array<std::uint8_t, kRawActionDim>;

RawActionVector encode_raw_frame(const std::vector<GuiEvent>& frame_events);
std::vector<RawActionVector> encode_raw(const std::vector<std::vector<GuiEvent>>& frames);

std::vector<int> active_indices(const RawActionVector& v);
RawActionVector from_active_indices(const std::vector<int>& indices);

// ---- meta view ---------------------------------------------------------------

inline constexpr int kMetaSlots = 2;

enum class MetaType : std::uint8_t { None = 0, ClickDrag = 1, Scroll = 2, Type = 3, Shortcut = 4 };

struct MetaSlot {
  MetaType type = MetaType::None;
  MouseButton button = MouseButton::Left;  // type 1
  int click_count = 0;                     // type 1
  bool drag = false;                       // type 1
  int direction = 0;                       // type 2: +1 up, -1 down
  int amount = 0;                          // type 2
  std::string text;                        // type 3
  std::string shortcut;                    // type 4

  bool operator==(const MetaSlot&) const = default;
};

struct MetaFrame {
  std::array<MetaSlot, kMetaSlots> slots;
  int dropped = 0;

  bool operator==(const MetaFrame&) const = default;
};

MetaFrame encode_meta_frame(const std::vector<GuiEvent>& frame_events);
std::vector<MetaFrame> encode_meta(const std::vector<std::vector<GuiEvent>>& frames);

// Keyboard flags implied by the type-3 and type-4 slots of a frame.
RawActionVector meta_keyboard_flags(const MetaFrame& frame);

using TextEmbedder = std::function<Eigen::VectorXd(std::string_view text, int dims)>;

// Hashed bag of characters: each code point adds +-1 at a hashed coordinate;
// the sum is divided by the character count.
Eigen::VectorXd hashed_text_embedding(std::string_view text, int dims);

struct MetaEmbedder {
  int dims = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd type_table;      // 5 x D
  Eigen::MatrixXd button_table;    // 2 x D
  Eigen::MatrixXd click_table;     // 3 x D (click_count 0, 1, 2+)
  Eigen::MatrixXd drag_table;      // 2 x D
  Eigen::MatrixXd direction_table; // 2 x D (down, up)
  Eigen::RowVectorXd amount_axis;  // scaled by log1p(amount)
  Eigen::MatrixXd shortcut_table;  // |vocab| x D
  TextEmbedder text_embedder = hashed_text_embedding;
};

MetaEmbedder make_meta_embedder(int dims, std::uint64_t seed, TextEmbedder text_embedder = hashed_text_embedding);

Eigen::RowVectorXd embed_slot(const MetaSlot& slot, const MetaEmbedder& emb);

// F x D; rows are the mean over non-empty slots, zero for idle frames.
Eigen::MatrixXd embed_meta(const std::vector<MetaFrame>& frames, const MetaEmbedder& emb);

// ---- temporal alignment ---------------------------------------------------------

struct AlignParams {
  int c = 4;
  int w = 1;
  int lag = 0;
  bool operator==(const AlignParams&) const = default;
};

// T = floor((F - 1) / c) + 1.
inline std::int64_t latent_steps(std::int64_t frames, int c) { return frames < 1 ? 0 : (frames - 1) / c + 1; }

// Row t is (1/p) * sum_{k=0}^{p-1} r~[t*c - (p - 1 + lag) + k], p = c*w, with
// r~ zero outside [0, F). Summation runs in k order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> align_temporal(
    const Eigen::MatrixBase<Derived>& per_frame, const AlignParams& params) {
  using Scalar = typename Derived::Scalar;
  if (params.c < 1 || params.w < 1) throw Error(ErrorCode::InvalidConfig, "alignment needs c >= 1 and w >= 1");
  if (params.lag < 0) throw Error(ErrorCode::InvalidConfig, "alignment lag must be non-negative");
  const Eigen::Index F = per_frame.rows();
  const Eigen::Index D = per_frame.cols();
  if (F < 1) throw Error(ErrorCode::InvalidConfig, "alignment needs at least one frame");
  const Eigen::Index T = latent_steps(F, params.c);
  const Eigen::Index p = static_cast<Eigen::Index>(params.c) * params.w;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(T, D);
  for (Eigen::Index t = 0; t < T; ++t) {
    const Eigen::Index start = t * params.c - (p - 1 + params.lag);
    for (Eigen::Index d = 0; d < D; ++d) {
      Scalar acc(0);
      for (Eigen::Index k = 0; k < p; ++k) {
        const Eigen::Index f = start + k;
        if (f >= 0 && f < F) acc += per_frame(f, d);
      }
      out(t, d) = acc / static_cast<Scalar>(p);
    }
  }
  return out;
}

// ---- Fourier mouse features ---------------------------------------------------------

struct FourierMouseConfig {
  std::uint64_t seed = 0;
  int num_features = 16;
  int hidden_dim = 32;
  int embed_dim = 32;
  double sigma = 1.0;
  Eigen::MatrixXd projection;  // num_features x 2, N(0, sigma^2)
  Eigen::MatrixXd w1;          // 2*num_features x hidden_dim
  Eigen::RowVectorXd b1;
  Eigen::MatrixXd w2;          // hidden_dim x embed_dim
  Eigen::RowVectorXd b2;
};

FourierMouseConfig make_fourier_config(std::uint64_t seed, int num_features = 16, int hidden_dim = 32,
                                       int embed_dim = 32, double sigma = 1.0);

// F x 2m: [sin(Bv), cos(Bv)] with v = 2*clamp(p) - 1.
Eigen::MatrixXd fourier_features(const std::vector<NormPoint>& traj, const FourierMouseConfig& cfg);

// F x embed_dim: two-layer tanh MLP over fourier_features.
Eigen::MatrixXd fourier_mouse(const std::vector<NormPoint>& traj, const FourierMouseConfig& cfg);

}  // namespace ncf
