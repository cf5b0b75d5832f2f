#include "ncforge/action_codec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "ncforge/numeric.hpp"
#include "ncforge/text.hpp"

namespace ncf {

namespace {

constexpr int kAsciiBase = kMouseFlags;  // 13
constexpr int kNamedBase = kAsciiBase + 95;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

const std::map<std::string, std::string>& canonical_lookup() {
  static const std::map<std::string, std::string> table = [] {
    std::map<std::string, std::string> t;
    for (const auto& n : named_key_names()) t.emplace(lower(n), n);
    for (const auto& n : modifier_names()) t.emplace(lower(n), n);
    for (const auto& n : chord_names()) t.emplace(lower(n), n);
    t.emplace("esc", "Escape");
    t.emplace("return", "Enter");
    t.emplace("control", "ctrl");
    t.emplace("super", "meta");
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<std::string>& named_key_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"Enter", "Tab",    "Backspace", "Escape", "Delete", "Insert", "Home",
                                  "End",   "PageUp", "PageDown",  "Up",     "Down",   "Left",   "Right"};
    for (int i = 1; i <= 12; ++i) n.push_back("F" + std::to_string(i));
    return n;
  }();
  return names;
}

const std::vector<std::string>& modifier_names() {
  static const std::vector<std::string> names = {"ctrl", "shift", "alt", "meta"};
  return names;
}

const std::vector<std::string>& chord_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (char c = 'a'; c <= 'z'; ++c) n.push_back(std::string("ctrl+") + c);
    for (const char* s : {"ctrl+shift+c", "ctrl+shift+v", "ctrl+shift+t", "ctrl+shift+n", "ctrl+shift+z",
                          "ctrl+shift+tab", "alt+tab", "alt+f4", "alt+left", "alt+right", "ctrl+tab", "ctrl+alt+t",
                          "ctrl+alt+delete", "meta+d", "meta+e", "meta+l", "ctrl+space", "ctrl+enter"})
      n.emplace_back(s);
    return n;
  }();
  return names;
}

const std::vector<std::string>& raw_action_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const char* b : {"left", "right"})
      for (const char* a : {"down", "up", "double", "drag_start", "drag_end"}) n.push_back(std::string(b) + "_" + a);
    n.insert(n.end(), {"scroll_up", "scroll_down", "move"});
    for (int c = 0x20; c < 0x7F; ++c) n.push_back("char:" + std::string(1, static_cast<char>(c)));
    for (const auto& k : named_key_names()) n.push_back("key:" + k);
    for (const auto& k : modifier_names()) n.push_back("mod:" + k);
    for (const auto& k : chord_names()) n.push_back("chord:" + k);
    return n;
  }();
  return names;
}

const std::vector<std::string>& shortcut_vocabulary() {
  static const std::vector<std::string> vocab = [] {
    std::vector<std::string> v = named_key_names();
    v.insert(v.end(), modifier_names().begin(), modifier_names().end());
    v.insert(v.end(), chord_names().begin(), chord_names().end());
    return v;
  }();
  return vocab;
}

std::optional<int> shortcut_id(std::string_view name) {
  const auto canon = canonical_key(name);
  if (!canon) return std::nullopt;
  const auto& v = shortcut_vocabulary();
  return static_cast<int>(std::find(v.begin(), v.end(), *canon) - v.begin());
}

std::optional<std::string> canonical_key(std::string_view name) {
  const auto& t = canonical_lookup();
  const auto it = t.find(lower(name));
  if (it == t.end()) return std::nullopt;
  return it->second;
}

int raw_key_index(std::string_view key) {
  if (key.size() == 1 && key[0] >= 0x20 && key[0] < 0x7F) return kAsciiBase + (key[0] - 0x20);
  const auto canon = canonical_key(key);
  if (!canon) throw Error(ErrorCode::UnknownKey, std::string(key));
  const auto id = *shortcut_id(*canon);
  return kNamedBase + id;  // named keys, modifiers and chords are contiguous in both maps
}

// ---- events ----------------------------------------------------------------

GuiEvent key_event(double time, std::string key) {
  GuiEvent e;
  e.time = time;
  e.kind = GuiEventKind::Key;
  e.key = std::move(key);
  return e;
}

GuiEvent mouse_event(double time, GuiEventKind kind, MouseButton button) {
  GuiEvent e;
  e.time = time;
  e.kind = kind;
  e.button = button;
  return e;
}

GuiEvent scroll_event(double time, int amount) {
  GuiEvent e;
  e.time = time;
  e.kind = GuiEventKind::Scroll;
  e.scroll = amount;
  return e;
}

std::vector<std::vector<GuiEvent>> bucket_events(const std::vector<GuiEvent>& events, double fps, std::size_t frames) {
  if (!(fps > 0.0)) throw Error(ErrorCode::InvalidConfig, "fps must be positive");
  std::vector<std::vector<GuiEvent>> out(frames);
  if (frames == 0) return out;
  for (const auto& e : events) {
    const auto f = std::clamp<std::int64_t>(round_to_index(e.time * fps), 0, static_cast<std::int64_t>(frames) - 1);
    out[static_cast<std::size_t>(f)].push_back(e);
  }
  return out;
}

std::vector<std::string> decode_terminal_input(std::string_view bytes) {
  static const std::map<std::string, std::string, std::less<>> kSequences = {
      {"[A", "Up"},        {"[B", "Down"},      {"[C", "Right"},     {"[D", "Left"},      {"OA", "Up"},
      {"OB", "Down"},      {"OC", "Right"},     {"OD", "Left"},      {"[H", "Home"},      {"[F", "End"},
      {"OH", "Home"},      {"OF", "End"},       {"[1~", "Home"},     {"[4~", "End"},      {"[2~", "Insert"},
      {"[3~", "Delete"},   {"[5~", "PageUp"},   {"[6~", "PageDown"}, {"OP", "F1"},        {"OQ", "F2"},
      {"OR", "F3"},        {"OS", "F4"},        {"[15~", "F5"},      {"[17~", "F6"},      {"[18~", "F7"},
      {"[19~", "F8"},      {"[20~", "F9"},      {"[21~", "F10"},     {"[23~", "F11"},     {"[24~", "F12"},
      {"[Z", "ctrl+shift+tab"}};
  std::vector<std::string> keys;
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto b = static_cast<unsigned char>(bytes[i]);
    if (b == 0x1b) {
      bool matched = false;
      for (std::size_t len = 4; len >= 2 && !matched; --len) {
        if (i + 1 + len > bytes.size()) continue;
        const auto it = kSequences.find(bytes.substr(i + 1, len));
        if (it != kSequences.end()) {
          keys.push_back(it->second);
          i += 1 + len;
          matched = true;
        }
      }
      if (!matched) {
        keys.emplace_back("Escape");
        ++i;
      }
      continue;
    }
    if (b == '\r' || b == '\n') {
      keys.emplace_back("Enter");
    } else if (b == '\t') {
      keys.emplace_back("Tab");
    } else if (b == 0x7f || b == 0x08) {
      keys.emplace_back("Backspace");
    } else if (b >= 0x01 && b <= 0x1a) {
      keys.push_back(std::string("ctrl+") + static_cast<char>('a' + b - 1));
    } else if (b == 0x00) {
      keys.emplace_back("ctrl+space");
    } else if (b >= 0x20 && b < 0x7f) {
      keys.emplace_back(1, static_cast<char>(b));
    }
    // Other control bytes and non-ASCII text have no entry in the raw map.
    ++i;
  }
  return keys;
}

// ---- raw view ----------------------------------------------------------------

RawActionVector encode_raw_frame(const std::vector<GuiEvent>& frame_events) {
  RawActionVector v{};
  for (const auto& e : frame_events) {
    const int btn = static_cast<int>(e.button) * 5;
    switch (e.kind) {
      case GuiEventKind::MouseDown: v[btn + 0] = 1; break;
      case GuiEventKind::MouseUp: v[btn + 1] = 1; break;
      case GuiEventKind::DoubleClick: v[btn + 2] = 1; break;
      case GuiEventKind::DragStart: v[btn + 3] = 1; break;
      case GuiEventKind::DragEnd: v[btn + 4] = 1; break;
      case GuiEventKind::Scroll:
        if (e.scroll > 0) v[10] = 1;
        if (e.scroll < 0) v[11] = 1;
        break;
      case GuiEventKind::Move: v[12] = 1; break;
      case GuiEventKind::Key: v[static_cast<std::size_t>(raw_key_index(e.key))] = 1; break;
    }
  }
  return v;
}

std::vector<RawActionVector> encode_raw(const std::vector<std::vector<GuiEvent>>& frames) {
  std::vector<RawActionVector> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(encode_raw_frame(f));
  return out;
}

std::vector<int> active_indices(const RawActionVector& v) {
  std::vector<int> idx;
  for (int i = 0; i < kRawActionDim; ++i)
    if (v[static_cast<std::size_t>(i)]) idx.push_back(i);
  return idx;
}

RawActionVector from_active_indices(const std::vector<int>& indices) {
  RawActionVector v{};
  for (int i : indices) {
    if (i < 0 || i >= kRawActionDim) throw Error(ErrorCode::MalformedShard, "raw action index " + std::to_string(i));
    v[static_cast<std::size_t>(i)] = 1;
  }
  return v;
}

// ---- meta view ---------------------------------------------------------------

MetaFrame encode_meta_frame(const std::vector<GuiEvent>& frame_events) {
  std::vector<const GuiEvent*> ordered;
  for (const auto& e : frame_events) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(), [](const GuiEvent* a, const GuiEvent* b) { return a->time < b->time; });

  std::vector<MetaSlot> slots;
  for (const GuiEvent* e : ordered) {
    MetaSlot* last = slots.empty() ? nullptr : &slots.back();
    switch (e->kind) {
      case GuiEventKind::Key: {
        if (e->key.size() == 1 && e->key[0] >= 0x20 && e->key[0] < 0x7F) {
          if (last && last->type == MetaType::Type) {
            last->text += e->key;
          } else {
            MetaSlot s;
            s.type = MetaType::Type;
            s.text = e->key;
            slots.push_back(s);
          }
        } else {
          const auto canon = canonical_key(e->key);
          if (!canon) throw Error(ErrorCode::UnknownKey, e->key);
          MetaSlot s;
          s.type = MetaType::Shortcut;
          s.shortcut = *canon;
          slots.push_back(s);
        }
        break;
      }
      case GuiEventKind::MouseDown:
      case GuiEventKind::DoubleClick:
      case GuiEventKind::DragStart: {
        MetaSlot s;
        s.type = MetaType::ClickDrag;
        s.button = e->button;
        s.click_count = e->kind == GuiEventKind::DoubleClick ? 2 : 1;
        s.drag = e->kind == GuiEventKind::DragStart;
        slots.push_back(s);
        break;
      }
      case GuiEventKind::Scroll: {
        if (e->scroll == 0) break;
        const int dir = e->scroll > 0 ? 1 : -1;
        if (last && last->type == MetaType::Scroll && last->direction == dir) {
          last->amount += std::abs(e->scroll);
        } else {
          MetaSlot s;
          s.type = MetaType::Scroll;
          s.direction = dir;
          s.amount = std::abs(e->scroll);
          slots.push_back(s);
        }
        break;
      }
      case GuiEventKind::MouseUp:
      case GuiEventKind::DragEnd:
      case GuiEventKind::Move:
        break;  // carried by the raw view and the trajectory
    }
  }

  MetaFrame frame;
  for (std::size_t i = 0; i < slots.size() && i < kMetaSlots; ++i) frame.slots[i] = slots[i];
  frame.dropped = static_cast<int>(slots.size() > kMetaSlots ? slots.size() - kMetaSlots : 0);
  return frame;
}

std::vector<MetaFrame> encode_meta(const std::vector<std::vector<GuiEvent>>& frames) {
  std::vector<MetaFrame> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(encode_meta_frame(f));
  return out;
}

RawActionVector meta_keyboard_flags(const MetaFrame& frame) {
  RawActionVector v{};
  for (const auto& s : frame.slots) {
    if (s.type == MetaType::Type) {
      for (char ch : s.text) v[static_cast<std::size_t>(raw_key_index(std::string_view(&ch, 1)))] = 1;
    } else if (s.type == MetaType::Shortcut) {
      v[static_cast<std::size_t>(raw_key_index(s.shortcut))] = 1;
    }
  }
  return v;
}

Eigen::VectorXd hashed_text_embedding(std::string_view text, int dims) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dims);
  const auto cps = utf8_decode(text);
  if (cps.empty() || dims < 1) return v;
  for (char32_t cp : cps) {
    // FNV-1a over the code point's four bytes.
    std::uint64_t h = 1469598103934665603ULL;
    for (int b = 0; b < 4; ++b) {
      h ^= (static_cast<std::uint32_t>(cp) >> (8 * b)) & 0xffu;
      h *= 1099511628211ULL;
    }
    const auto slot = static_cast<Eigen::Index>((h >> 1) % static_cast<std::uint64_t>(dims));
    v[slot] += (h & 1) ? 1.0 : -1.0;
  }
  return v / static_cast<double>(cps.size());
}

namespace {

Eigen::MatrixXd gaussian(SeededRng& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal() * scale;
  return m;
}

}  // namespace

MetaEmbedder make_meta_embedder(int dims, std::uint64_t seed, TextEmbedder text_embedder) {
  if (dims < 1) throw Error(ErrorCode::InvalidConfig, "embedding dims must be >= 1");
  SeededRng rng(seed);
  const double s = 1.0 / std::sqrt(static_cast<double>(dims));
  MetaEmbedder e;
  e.dims = dims;
  e.seed = seed;
  e.type_table = gaussian(rng, 5, dims, s);
  e.button_table = gaussian(rng, 2, dims, s);
  e.click_table = gaussian(rng, 3, dims, s);
  e.drag_table = gaussian(rng, 2, dims, s);
  e.direction_table = gaussian(rng, 2, dims, s);
  e.amount_axis = gaussian(rng, 1, dims, s);
  e.shortcut_table = gaussian(rng, static_cast<Eigen::Index>(shortcut_vocabulary().size()), dims, s);
  e.text_embedder = std::move(text_embedder);
  return e;
}

Eigen::RowVectorXd embed_slot(const MetaSlot& slot, const MetaEmbedder& emb) {
  Eigen::RowVectorXd v = emb.type_table.row(static_cast<Eigen::Index>(slot.type));
  switch (slot.type) {
    case MetaType::None:
      break;
    case MetaType::ClickDrag:
      v += emb.button_table.row(static_cast<Eigen::Index>(slot.button));
      v += emb.click_table.row(std::clamp(slot.click_count, 0, 2));
      v += emb.drag_table.row(slot.drag ? 1 : 0);
      break;
    case MetaType::Scroll:
      v += emb.direction_table.row(slot.direction > 0 ? 1 : 0);
      v += emb.amount_axis * std::log1p(static_cast<double>(slot.amount));
      break;
    case MetaType::Type:
      v += emb.text_embedder(slot.text, emb.dims).transpose();
      break;
    case MetaType::Shortcut: {
      const auto id = shortcut_id(slot.shortcut);
      if (!id) throw Error(ErrorCode::UnknownKey, slot.shortcut);
      v += emb.shortcut_table.row(*id);
      break;
    }
  }
  return v;
}

Eigen::MatrixXd embed_meta(const std::vector<MetaFrame>& frames, const MetaEmbedder& emb) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(frames.size()), emb.dims);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    int n = 0;
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(emb.dims);
    for (const auto& s : frames[f].slots) {
      if (s.type == MetaType::None) continue;
      acc += embed_slot(s, emb);
      ++n;
    }
    if (n > 0) out.row(static_cast<Eigen::Index>(f)) = acc / static_cast<double>(n);
  }
  return out;
}

// ---- Fourier mouse features ---------------------------------------------------------

FourierMouseConfig make_fourier_config(std::uint64_t seed, int num_features, int hidden_dim, int embed_dim,
                                       double sigma) {
  if (num_features < 1 || hidden_dim < 1 || embed_dim < 1 || !(sigma > 0.0))
    throw Error(ErrorCode::InvalidConfig, "Fourier config needs positive sizes and sigma");
  SeededRng rng(seed);
  FourierMouseConfig cfg;
  cfg.seed = seed;
  cfg.num_features = num_features;
  cfg.hidden_dim = hidden_dim;
  cfg.embed_dim = embed_dim;
  cfg.sigma = sigma;
  cfg.projection = gaussian(rng, num_features, 2, sigma);
  cfg.w1 = gaussian(rng, 2 * num_features, hidden_dim, 1.0 / std::sqrt(2.0 * num_features));
  cfg.b1 = Eigen::RowVectorXd::Zero(hidden_dim);
  cfg.w2 = gaussian(rng, hidden_dim, embed_dim, 1.0 / std::sqrt(static_cast<double>(hidden_dim)));
  cfg.b2 = Eigen::RowVectorXd::Zero(embed_dim);
  return cfg;
}

Eigen::MatrixXd fourier_features(const std::vector<NormPoint>& traj, const FourierMouseConfig& cfg) {
  const int m = cfg.num_features;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(traj.size()), 2 * m);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const double x = std::isfinite(traj[t].x) ? std::clamp(traj[t].x, 0.0, 1.0) : 0.5;
    const double y = std::isfinite(traj[t].y) ? std::clamp(traj[t].y, 0.0, 1.0) : 0.5;
    const double vx = 2.0 * x - 1.0;
    const double vy = 2.0 * y - 1.0;
    for (int j = 0; j < m; ++j) {
      const double arg = cfg.projection(j, 0) * vx + cfg.projection(j, 1) * vy;
      out(static_cast<Eigen::Index>(t), j) = std::sin(arg);
      out(static_cast<Eigen::Index>(t), m + j) = std::cos(arg);
    }
  }
  return out;
}

Eigen::MatrixXd fourier_mouse(const std::vector<NormPoint>& traj, const FourierMouseConfig& cfg) {
  const Eigen::MatrixXd feats = fourier_features(traj, cfg);
  Eigen::MatrixXd hidden = ((feats * cfg.w1).rowwise() + cfg.b1).array().tanh().matrix();
  return (hidden * cfg.w2).rowwise() + cfg.b2;
}

}  // namespace ncf
