#include "ncforge/dataset.hpp"

#include <cstdio>

#include "ncforge/io.hpp"

namespace ncf {

namespace fs = std::filesystem;

std::string to_string(SplitReason r) {
  switch (r) {
    case SplitReason::ScreenClear: return "ScreenClear";
    case SplitReason::ActivityGap: return "ActivityGap";
    case SplitReason::MaxLength: return "MaxLength";
    case SplitReason::EndOfStream: return "EndOfStream";
  }
  return "EndOfStream";
}

SplitReason split_reason_from_string(std::string_view s) {
  for (auto r : {SplitReason::ScreenClear, SplitReason::ActivityGap, SplitReason::MaxLength, SplitReason::EndOfStream})
    if (to_string(r) == s) return r;
  throw Error(ErrorCode::MalformedShard, "split_reason " + std::string(s));
}

std::vector<std::size_t> uniform_subsample(std::size_t T, std::size_t K) {
  if (T < 1 || K < 1) throw Error(ErrorCode::InvalidConfig, "uniform_subsample needs T >= 1 and K >= 1");
  std::vector<std::size_t> idx;
  if (T <= K) {
    for (std::size_t i = 0; i < T; ++i) idx.push_back(i);
    return idx;
  }
  if (K == 1) return {0};
  // round_half_away(i*(T-1)/(K-1)) for non-negative values is floor(x + 1/2).
  const std::uint64_t num = T - 1, den = K - 1;
  for (std::uint64_t i = 0; i < K; ++i) {
    const std::size_t v = static_cast<std::size_t>((2 * i * num + den) / (2 * den));
    if (idx.empty() || idx.back() != v) idx.push_back(v);
  }
  return idx;
}

std::vector<std::size_t> normalize_indices(std::size_t n, std::size_t target) {
  if (n < 1 || target < 1) throw Error(ErrorCode::InvalidConfig, "normalize_length needs n >= 1 and target >= 1");
  if (n > target) return uniform_subsample(n, target);
  std::vector<std::size_t> idx;
  idx.reserve(target);
  for (std::size_t i = 0; i < target; ++i) idx.push_back(std::min(i, n - 1));
  return idx;
}

std::vector<ClipSpan> segment(const std::vector<FrameInfo>& frames, const SegmentOptions& opts) {
  if (frames.empty()) throw Error(ErrorCode::InvalidConfig, "segment needs a nonempty frame stream");
  if (!(opts.max_len > 0.0) || !(opts.gap_threshold > 0.0))
    throw Error(ErrorCode::InvalidConfig, "max_len and gap_threshold must be positive");
  constexpr double kEps = 1e-9;
  std::vector<ClipSpan> clips;
  std::size_t start = 0;
  double last_change = frames[0].time;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const FrameInfo& f = frames[i];
    std::optional<SplitReason> reason;
    if (f.blank && !frames[i - 1].blank) {
      reason = SplitReason::ScreenClear;
    } else if (f.changed && f.time - last_change >= opts.gap_threshold - kEps) {
      reason = SplitReason::ActivityGap;
    } else if (f.time - frames[start].time >= opts.max_len - kEps) {
      reason = SplitReason::MaxLength;
    }
    if (f.changed) last_change = f.time;
    if (reason) {
      clips.push_back(ClipSpan{start, i, *reason});
      start = i;
    }
  }
  clips.push_back(ClipSpan{start, frames.size(), SplitReason::EndOfStream});
  return clips;
}

std::vector<ClipSpan> segment(const std::vector<ReplayFrame>& frames, const SegmentOptions& opts) {
  std::vector<FrameInfo> info;
  info.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& g = frames[i].grid;
    const bool changed = i > 0 && (g.width != frames[i - 1].grid.width || g.height != frames[i - 1].grid.height ||
                                   g.cells != frames[i - 1].grid.cells);
    info.push_back(FrameInfo{frames[i].time, is_blank(g), changed});
  }
  return segment(info, opts);
}

// ---- shards ----------------------------------------------------------------

std::string EpisodeShard::name() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", ordinal);
  return source_id + "_" + buf;
}

void validate_shard(const EpisodeShard& shard) {
  const std::size_t n = shard.frames.size();
  auto check = [&](const char* modality, std::size_t size) {
    if (size != n)
      throw Error(ErrorCode::LengthMismatch, modality);
  };
  for (std::size_t i = 1; i < n; ++i)
    if (!shard.frames[i].same_shape(shard.frames[0])) throw Error(ErrorCode::DimensionMismatch, "frame " + std::to_string(i));
  if (!shard.buffers.empty()) check("buffers", shard.buffers.size());
  if (shard.actions_raw) check("actions", shard.actions_raw->size());
  if (shard.actions_meta) check("actions_meta", shard.actions_meta->size());
  if (shard.mouse_traj) check("mouse_traj", shard.mouse_traj->size());
  auto check_aligned = [&](const char* modality, const std::optional<AlignedView>& v) {
    if (v && v->values.rows() != latent_steps(static_cast<std::int64_t>(n), v->params.c))
      throw Error(ErrorCode::LengthMismatch, modality);
  };
  check_aligned("actions_aligned", shard.actions_aligned);
  check_aligned("mouse_aligned", shard.mouse_aligned);
}

EpisodeShard package(PackageInput in) {
  EpisodeShard s;
  s.source_id = std::move(in.source_id);
  s.ordinal = in.ordinal;
  s.frames = std::move(in.frames);
  s.captions = std::move(in.captions);
  s.buffers = std::move(in.buffers);
  s.actions_raw = std::move(in.actions_raw);
  s.actions_meta = std::move(in.actions_meta);
  s.mouse_traj = std::move(in.mouse_traj);
  s.source_tool = std::move(in.source_tool);
  s.env = std::move(in.env);
  s.geometry = in.geometry;
  s.split_reason = in.split_reason;
  s.extras = std::move(in.extras);
  validate_shard(s);
  return s;
}

namespace {

ordered_json slot_to_json(const MetaSlot& s) {
  ordered_json j;
  j["type"] = static_cast<int>(s.type);
  switch (s.type) {
    case MetaType::None: break;
    case MetaType::ClickDrag:
      j["button"] = s.button == MouseButton::Left ? "left" : "right";
      j["click_count"] = s.click_count;
      j["drag"] = s.drag ? 1 : 0;
      break;
    case MetaType::Scroll:
      j["direction"] = s.direction;
      j["amount"] = s.amount;
      break;
    case MetaType::Type: j["text"] = s.text; break;
    case MetaType::Shortcut: j["shortcut"] = s.shortcut; break;
  }
  return j;
}

MetaSlot slot_from_json(const ordered_json& j) {
  MetaSlot s;
  const int type = j.at("type").get<int>();
  if (type < 0 || type > 4) throw Error(ErrorCode::MalformedShard, "meta slot type " + std::to_string(type));
  s.type = static_cast<MetaType>(type);
  switch (s.type) {
    case MetaType::None: break;
    case MetaType::ClickDrag:
      s.button = j.at("button").get<std::string>() == "right" ? MouseButton::Right : MouseButton::Left;
      s.click_count = j.at("click_count").get<int>();
      s.drag = j.at("drag").get<int>() != 0;
      break;
    case MetaType::Scroll:
      s.direction = j.at("direction").get<int>();
      s.amount = j.at("amount").get<int>();
      break;
    case MetaType::Type: s.text = j.at("text").get<std::string>(); break;
    case MetaType::Shortcut: s.shortcut = j.at("shortcut").get<std::string>(); break;
  }
  return s;
}

ordered_json aligned_to_json(const std::optional<AlignedView>& v) {
  if (!v) return nullptr;
  ordered_json j;
  j["c"] = v->params.c;
  j["w"] = v->params.w;
  j["lag"] = v->params.lag;
  j["rows"] = v->values.rows();
  j["cols"] = v->values.cols();
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < v->values.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < v->values.cols(); ++c) row.push_back(v->values(r, c));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j;
}

std::optional<AlignedView> aligned_from_json(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  AlignedView v;
  v.params = AlignParams{j.at("c").get<int>(), j.at("w").get<int>(), j.at("lag").get<int>()};
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& values = j.at("values");
  if (static_cast<Eigen::Index>(values.size()) != rows) throw Error(ErrorCode::MalformedShard, "aligned rows");
  v.values.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = values.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(ErrorCode::MalformedShard, "aligned cols");
    for (Eigen::Index c = 0; c < cols; ++c) v.values(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return v;
}

}  // namespace

ordered_json shard_manifest(const EpisodeShard& s) {
  ordered_json m;
  m["name"] = s.name();
  m["source_id"] = s.source_id;
  m["ordinal"] = s.ordinal;
  const Image* first = s.frames.empty() ? nullptr : &s.frames.front();
  m["frames"] = {{"file", "frames.bin"},
                 {"count", s.frames.size()},
                 {"height", first ? first->height : 0},
                 {"width", first ? first->width : 0},
                 {"channels", first ? first->channels : 3},
                 {"dtype", "uint8"}};
  m["fps"] = s.fps;
  m["captions"] = {{"semantic", s.captions.semantic},
                   {"regular", s.captions.regular},
                   {"detailed", s.captions.detailed},
                   {"scripted", s.captions.scripted}};
  m["buffers"] = s.buffers;
  if (s.actions_raw) {
    ordered_json rows = ordered_json::array();
    for (const auto& v : *s.actions_raw) rows.push_back(active_indices(v));
    m["actions_raw"] = {{"dim", kRawActionDim}, {"active", std::move(rows)}};
  } else {
    m["actions_raw"] = nullptr;
  }
  if (s.actions_meta) {
    ordered_json rows = ordered_json::array();
    for (const auto& f : *s.actions_meta) {
      ordered_json slots = ordered_json::array();
      for (const auto& slot : f.slots) slots.push_back(slot_to_json(slot));
      rows.push_back({{"slots", std::move(slots)}, {"dropped", f.dropped}});
    }
    m["actions_meta"] = std::move(rows);
  } else {
    m["actions_meta"] = nullptr;
  }
  if (s.mouse_traj) {
    ordered_json rows = ordered_json::array();
    for (const auto& p : *s.mouse_traj) {
      if (p) rows.push_back({p->x, p->y});
      else rows.push_back(nullptr);
    }
    m["mouse_traj"] = std::move(rows);
  } else {
    m["mouse_traj"] = nullptr;
  }
  m["actions_aligned"] = aligned_to_json(s.actions_aligned);
  m["mouse_aligned"] = aligned_to_json(s.mouse_aligned);
  m["source_tool"] = s.source_tool;
  m["env"] = s.env;
  m["geometry"] = {{"cols", s.geometry.cols},
                   {"rows", s.geometry.rows},
                   {"width_px", s.geometry.width_px},
                   {"height_px", s.geometry.height_px}};
  m["split_reason"] = to_string(s.split_reason);
  m["extras"] = s.extras;
  return m;
}

std::vector<std::uint8_t> shard_frame_bytes(const EpisodeShard& s) {
  std::vector<std::uint8_t> out;
  for (const auto& f : s.frames) {
    const auto b = to_bytes(f);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

EpisodeShard shard_from_parts(const ordered_json& m, const std::vector<std::uint8_t>& bytes) {
  try {
    EpisodeShard s;
    s.source_id = m.at("source_id").get<std::string>();
    s.ordinal = m.at("ordinal").get<std::size_t>();
    const auto& fr = m.at("frames");
    const auto count = fr.at("count").get<std::size_t>();
    const int h = fr.at("height").get<int>(), w = fr.at("width").get<int>(), c = fr.at("channels").get<int>();
    if (fr.at("dtype").get<std::string>() != "uint8") throw Error(ErrorCode::MalformedShard, "frames.dtype");
    const std::size_t frame_size = static_cast<std::size_t>(h) * w * c;
    if (bytes.size() != frame_size * count) throw Error(ErrorCode::MalformedShard, "frames.bin size");
    for (std::size_t i = 0; i < count; ++i)
      s.frames.push_back(from_bytes(std::span(bytes).subspan(i * frame_size, frame_size), h, w, c));
    s.fps = m.at("fps").get<double>();
    const auto& cap = m.at("captions");
    s.captions = Captions{cap.value("semantic", ""), cap.value("regular", ""), cap.value("detailed", ""),
                          cap.value("scripted", "")};
    s.buffers = m.at("buffers").get<std::vector<std::vector<std::string>>>();
    if (const auto& raw = m.at("actions_raw"); !raw.is_null()) {
      if (raw.at("dim").get<int>() != kRawActionDim) throw Error(ErrorCode::MalformedShard, "actions_raw.dim");
      std::vector<RawActionVector> rows;
      for (const auto& r : raw.at("active")) rows.push_back(from_active_indices(r.get<std::vector<int>>()));
      s.actions_raw = std::move(rows);
    }
    if (const auto& meta = m.at("actions_meta"); !meta.is_null()) {
      std::vector<MetaFrame> rows;
      for (const auto& r : meta) {
        MetaFrame f;
        const auto& slots = r.at("slots");
        if (slots.size() != kMetaSlots) throw Error(ErrorCode::MalformedShard, "actions_meta slot count");
        for (std::size_t k = 0; k < kMetaSlots; ++k) f.slots[k] = slot_from_json(slots[k]);
        f.dropped = r.at("dropped").get<int>();
        rows.push_back(std::move(f));
      }
      s.actions_meta = std::move(rows);
    }
    if (const auto& traj = m.at("mouse_traj"); !traj.is_null()) {
      std::vector<std::optional<NormPoint>> rows;
      for (const auto& p : traj) {
        if (p.is_null()) rows.emplace_back();
        else rows.push_back(NormPoint{p.at(0).get<double>(), p.at(1).get<double>()});
      }
      s.mouse_traj = std::move(rows);
    }
    s.actions_aligned = aligned_from_json(m.at("actions_aligned"));
    s.mouse_aligned = aligned_from_json(m.at("mouse_aligned"));
    s.source_tool = m.at("source_tool").get<std::string>();
    s.env = m.at("env").get<std::map<std::string, std::string>>();
    const auto& g = m.at("geometry");
    s.geometry = Geometry{g.at("cols").get<int>(), g.at("rows").get<int>(), g.at("width_px").get<int>(),
                          g.at("height_px").get<int>()};
    s.split_reason = split_reason_from_string(m.at("split_reason").get<std::string>());
    s.extras = m.value("extras", ordered_json::object());
    validate_shard(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedShard, e.what());
  }
}

fs::path write_shard(const EpisodeShard& shard, const fs::path& dir) {
  validate_shard(shard);
  const fs::path out = dir / shard.name();
  fs::create_directories(out);
  write_text_file(out / "manifest.json", shard_manifest(shard).dump(1) + "\n");
  write_binary_file(out / "frames.bin", shard_frame_bytes(shard));
  return out;
}

EpisodeShard read_shard(const fs::path& shard_dir) {
  const std::string text = read_text_file(shard_dir / "manifest.json");
  const auto m = ordered_json::parse(text, nullptr, false);
  if (m.is_discarded() || !m.is_object()) throw Error(ErrorCode::MalformedShard, "manifest.json is not an object");
  return shard_from_parts(m, read_binary_file(shard_dir / "frames.bin"));
}

}  // namespace ncf
