#include "ncforge/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ncforge/io.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/text.hpp"

namespace ncf {

namespace fs = std::filesystem;

// ---- config ----------------------------------------------------------------------------

void validate_config(const PipelineConfig& c) {
  auto need = [](bool ok, const char* field) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, field);
  };
  need(c.emulator.cols >= 0 && c.emulator.rows >= 0 && (c.emulator.cols > 0) == (c.emulator.rows > 0),
       "emulator.cols/rows must both be 0 or both positive");
  need(c.emulator.fps > 0.0, "emulator.fps must be positive");
  need(c.emulator.cell_width >= kGlyphWidth && c.emulator.cell_height >= kGlyphHeight,
       "emulator.cell_width/cell_height below the glyph size");
  need(c.segmentation.max_len > 0.0, "segmentation.max_len must be positive");
  need(c.segmentation.gap_threshold > 0.0, "segmentation.gap_threshold must be positive");
  need(c.segmentation.target_frames >= 1, "segmentation.target_frames must be positive");
  need(c.alignment.c >= 1 && c.alignment.w >= 1 && c.alignment.lag >= 0, "alignment.c/w must be positive, lag >= 0");
  need(c.alignment.embed_dim >= 1 && c.alignment.fourier_features >= 1, "alignment dims must be positive");
  need(c.eval.K >= 1 && c.eval.k >= 1 && c.eval.offset >= 1 && c.eval.offset <= c.eval.k, "eval.K/k/offset");
  need(c.eval.fps > 0.0 && c.eval.max_seconds > 0.0 && c.eval.size >= 1, "eval.fps/max_seconds/size must be positive");
  need(c.model.d_model >= 1 && c.model.n_heads >= 1 && c.model.d_model % c.model.n_heads == 0,
       "model.d_model must be a positive multiple of model.n_heads");
  need(c.model.n_blocks >= 1 && c.model.L_v >= 1 && c.model.L_a >= 0 && c.model.n_text >= 1 && c.model.window >= 0 &&
           c.model.lag >= 0 && c.model.inject_every >= 1 && c.model.d_mouse >= 0 && c.model.external_layers >= 0,
       "model sizes out of range");
  need(c.probe_count >= 1, "probes.count must be positive");
}

ordered_json config_to_json(const PipelineConfig& c) {
  ordered_json j;
  j["paths"] = {{"input_dir", c.paths.input_dir}, {"output_dir", c.paths.output_dir}};
  j["emulator"] = {{"cols", c.emulator.cols},
                   {"rows", c.emulator.rows},
                   {"fps", c.emulator.fps},
                   {"cell_width", c.emulator.cell_width},
                   {"cell_height", c.emulator.cell_height}};
  j["segmentation"] = {{"max_len", c.segmentation.max_len},
                       {"gap_threshold", std::isinf(c.segmentation.gap_threshold)
                                             ? ordered_json(nullptr)
                                             : ordered_json(c.segmentation.gap_threshold)},
                       {"target_frames", c.segmentation.target_frames}};
  j["alignment"] = {{"c", c.alignment.c},
                    {"w", c.alignment.w},
                    {"lag", c.alignment.lag},
                    {"embed_dim", c.alignment.embed_dim},
                    {"fourier_features", c.alignment.fourier_features}};
  j["eval"] = {{"K", c.eval.K},     {"k", c.eval.k},
               {"offset", c.eval.offset}, {"fps", c.eval.fps},
               {"max_seconds", c.eval.max_seconds}, {"size", c.eval.size}};
  j["seeds"] = {{"fourier", c.seeds.fourier}, {"toy_model", c.seeds.toy_model}, {"probes", c.seeds.probes}};
  j["model"] = {{"d_model", c.model.d_model},
                {"n_heads", c.model.n_heads},
                {"n_blocks", c.model.n_blocks},
                {"L_v", c.model.L_v},
                {"L_a", c.model.L_a},
                {"d_mouse", c.model.d_mouse},
                {"n_text", c.model.n_text},
                {"window", c.model.window},
                {"lag", c.model.lag},
                {"external_layers", c.model.external_layers},
                {"inject_every", c.model.inject_every},
                {"internal_mouse_keys", c.model.internal_mouse_keys},
                {"zero_init_action_out", c.model.zero_init_action_out}};
  j["probes"] = {{"count", c.probe_count}};
  return j;
}

namespace {

template <typename T>
void read_into(const ordered_json& section, const char* key, T& dst, const std::string& where) {
  try {
    dst = section.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidConfig, where + "." + key + " has the wrong type");
  }
}

PipelineConfig config_from_full_json(const ordered_json& j) {
  PipelineConfig c;
  const auto& p = j.at("paths");
  read_into(p, "input_dir", c.paths.input_dir, "paths");
  read_into(p, "output_dir", c.paths.output_dir, "paths");
  const auto& e = j.at("emulator");
  read_into(e, "cols", c.emulator.cols, "emulator");
  read_into(e, "rows", c.emulator.rows, "emulator");
  read_into(e, "fps", c.emulator.fps, "emulator");
  read_into(e, "cell_width", c.emulator.cell_width, "emulator");
  read_into(e, "cell_height", c.emulator.cell_height, "emulator");
  const auto& s = j.at("segmentation");
  read_into(s, "max_len", c.segmentation.max_len, "segmentation");
  if (s.at("gap_threshold").is_null()) c.segmentation.gap_threshold = std::numeric_limits<double>::infinity();
  else read_into(s, "gap_threshold", c.segmentation.gap_threshold, "segmentation");
  read_into(s, "target_frames", c.segmentation.target_frames, "segmentation");
  const auto& a = j.at("alignment");
  read_into(a, "c", c.alignment.c, "alignment");
  read_into(a, "w", c.alignment.w, "alignment");
  read_into(a, "lag", c.alignment.lag, "alignment");
  read_into(a, "embed_dim", c.alignment.embed_dim, "alignment");
  read_into(a, "fourier_features", c.alignment.fourier_features, "alignment");
  const auto& ev = j.at("eval");
  read_into(ev, "K", c.eval.K, "eval");
  read_into(ev, "k", c.eval.k, "eval");
  read_into(ev, "offset", c.eval.offset, "eval");
  read_into(ev, "fps", c.eval.fps, "eval");
  read_into(ev, "max_seconds", c.eval.max_seconds, "eval");
  read_into(ev, "size", c.eval.size, "eval");
  const auto& sd = j.at("seeds");
  read_into(sd, "fourier", c.seeds.fourier, "seeds");
  read_into(sd, "toy_model", c.seeds.toy_model, "seeds");
  read_into(sd, "probes", c.seeds.probes, "seeds");
  const auto& m = j.at("model");
  read_into(m, "d_model", c.model.d_model, "model");
  read_into(m, "n_heads", c.model.n_heads, "model");
  read_into(m, "n_blocks", c.model.n_blocks, "model");
  read_into(m, "L_v", c.model.L_v, "model");
  read_into(m, "L_a", c.model.L_a, "model");
  read_into(m, "d_mouse", c.model.d_mouse, "model");
  read_into(m, "n_text", c.model.n_text, "model");
  read_into(m, "window", c.model.window, "model");
  read_into(m, "lag", c.model.lag, "model");
  read_into(m, "external_layers", c.model.external_layers, "model");
  read_into(m, "inject_every", c.model.inject_every, "model");
  read_into(m, "internal_mouse_keys", c.model.internal_mouse_keys, "model");
  read_into(m, "zero_init_action_out", c.model.zero_init_action_out, "model");
  read_into(j.at("probes"), "count", c.probe_count, "probes");
  c.model.seed = c.seeds.toy_model;
  return c;
}

}  // namespace

PipelineConfig config_from_json(const ordered_json& j, PipelineConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  ordered_json merged = config_to_json(base);
  for (const auto& [section, values] : j.items()) {
    if (!merged.contains(section)) throw Error(ErrorCode::InvalidConfig, "unknown section " + section);
    if (!values.is_object()) throw Error(ErrorCode::InvalidConfig, section + " must be an object");
    for (const auto& [key, value] : values.items()) {
      if (!merged[section].contains(key)) throw Error(ErrorCode::InvalidConfig, "unknown key " + section + "." + key);
      merged[section][key] = value;
    }
  }
  PipelineConfig c = config_from_full_json(merged);
  validate_config(c);
  return c;
}

PipelineConfig load_config_file(const fs::path& path, PipelineConfig base) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.detail());
  }
  const auto j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::InvalidConfig, path.string() + " is not valid JSON");
  return config_from_json(j, std::move(base));
}

// ---- ingest ----------------------------------------------------------------------------

namespace {

std::string source_id_for(const fs::path& file) {
  std::string id = file.stem().string();
  for (auto& ch : id)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return id.empty() ? "source" : id;
}

ordered_json seeds_json(const PipelineConfig& cfg) {
  return {{"fourier", cfg.seeds.fourier}, {"toy_model", cfg.seeds.toy_model}, {"probes", cfg.seeds.probes}};
}

}  // namespace

IngestSource ingest_cast(const fs::path& file) {
  IngestSource s;
  s.source_id = source_id_for(file);
  s.source_tool = "asciinema";
  s.recording = parse_cast(read_text_file(file));
  fs::path sidecar = file;
  sidecar.replace_extension(".json");
  if (fs::exists(sidecar)) {
    const ClipMetadata meta = parse_clip_metadata(read_text_file(sidecar));
    s.captions.semantic = meta.caption_semantic;
    s.captions.regular = meta.caption;
    s.captions.detailed = meta.caption_detailed;
  }
  return s;
}

IngestSource ingest_tape(const fs::path& file, const PipelineConfig& cfg) {
  const VhsScript script = parse_script(read_text_file(file));
  IngestSource s;
  s.source_id = source_id_for(file);
  s.source_tool = "vhs";
  SessionOptions opts;
  opts.cols = cfg.emulator.cols;
  opts.rows = cfg.emulator.rows;
  s.recording = simulate_session(script, opts);
  s.captions.scripted = derive_caption(script);
  s.captions.regular = script.annotations.instruction;
  return s;
}

IngestResult ingest_dir(const fs::path& dir, const PipelineConfig& cfg) {
  IngestResult result;
  std::vector<fs::path> files = list_files(dir, ".cast");
  for (const auto& f : list_files(dir, ".tape")) files.push_back(f);
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      result.sources.push_back(f.extension() == ".tape" ? ingest_tape(f, cfg) : ingest_cast(f));
    } catch (const Error& e) {
      result.failures.push_back({f.filename().string(), e.what()});
    }
  }
  std::stable_sort(result.sources.begin(), result.sources.end(),
                   [](const IngestSource& a, const IngestSource& b) { return a.source_id < b.source_id; });
  return result;
}

// ---- render / package / encode --------------------------------------------------------------

std::vector<RenderedClip> render_source(const IngestSource& source, const PipelineConfig& cfg) {
  CastRecording rec = source.recording;
  if (cfg.emulator.cols > 0) {
    rec.header.width = cfg.emulator.cols;
    rec.header.height = cfg.emulator.rows;
  }
  const double fps = cfg.emulator.fps;
  const auto frames = replay(rec, fps);

  std::vector<std::vector<GuiEvent>> frame_events(frames.size());
  for (const auto& ev : rec.events) {
    if (ev.kind != EventKind::Input) continue;
    const auto f = std::clamp<std::int64_t>(round_to_index(ev.time * fps), 0, static_cast<std::int64_t>(frames.size()) - 1);
    for (auto& key : decode_terminal_input(ev.payload))
      frame_events[static_cast<std::size_t>(f)].push_back(key_event(ev.time, std::move(key)));
  }

  RenderOptions ropts;
  ropts.cell = CellSize{cfg.emulator.cell_width, cfg.emulator.cell_height};
  std::vector<RenderedClip> out;
  for (const auto& span : segment(frames, SegmentOptions{cfg.segmentation.max_len, cfg.segmentation.gap_threshold})) {
    RenderedClip rc;
    rc.clip.source_id = source.source_id;
    rc.clip.split_reason = span.reason;
    for (std::size_t i = span.begin; i < span.end; ++i) {
      const auto& g = frames[i].grid;
      rc.clip.frame_times.push_back(frames[i].time);
      rc.clip.frames.push_back(render_grid(g, ropts));
      rc.clip.buffers.push_back(grid_to_lines(g));
      rc.events.push_back(frame_events[i]);
    }
    const auto& g0 = frames[span.begin].grid;
    rc.geometry = Geometry{g0.width, g0.height, g0.width * ropts.cell.width, g0.height * ropts.cell.height};
    out.push_back(std::move(rc));
  }
  return out;
}

std::vector<EpisodeShard> package_source(const IngestSource& source, const std::vector<RenderedClip>& clips,
                                         const PipelineConfig& cfg) {
  const bool has_input = std::any_of(source.recording.events.begin(), source.recording.events.end(),
                                     [](const CastEvent& e) { return e.kind == EventKind::Input; });
  std::vector<EpisodeShard> shards;
  for (std::size_t ci = 0; ci < clips.size(); ++ci) {
    const auto& rc = clips[ci];
    const auto idx = normalize_indices(rc.clip.frames.size(), cfg.segmentation.target_frames);
    PackageInput in;
    in.source_id = source.source_id;
    in.ordinal = ci;
    in.captions = source.captions;
    in.source_tool = source.source_tool;
    if (source.recording.header.env) in.env = *source.recording.header.env;
    in.geometry = rc.geometry;
    in.split_reason = rc.clip.split_reason;
    std::vector<std::vector<GuiEvent>> events;
    std::size_t next = 0;  // first source frame whose events are not yet assigned
    for (std::size_t k = 0; k < idx.size(); ++k) {
      in.frames.push_back(rc.clip.frames[idx[k]]);
      in.buffers.push_back(rc.clip.buffers[idx[k]]);
      std::vector<GuiEvent> bucket;
      for (; next <= idx[k]; ++next) bucket.insert(bucket.end(), rc.events[next].begin(), rc.events[next].end());
      events.push_back(std::move(bucket));
    }
    if (has_input) {
      in.actions_raw = encode_raw(events);
      in.actions_meta = encode_meta(events);
    }
    in.extras = {{"seeds", seeds_json(cfg)},
                 {"source_fps", cfg.emulator.fps},
                 {"clip_start", rc.clip.frame_times.front()},
                 {"clip_end", rc.clip.frame_times.back()},
                 {"source_frames", rc.clip.frames.size()},
                 {"frame_indices", idx}};
    EpisodeShard shard = package(std::move(in));
    shard.fps = cfg.emulator.fps;
    shards.push_back(std::move(shard));
  }
  return shards;
}

void encode_shard(EpisodeShard& shard, const PipelineConfig& cfg) {
  const AlignParams params{cfg.alignment.c, cfg.alignment.w, cfg.alignment.lag};
  if (shard.actions_meta) {
    const MetaEmbedder emb = make_meta_embedder(cfg.alignment.embed_dim, cfg.seeds.toy_model);
    shard.actions_aligned = AlignedView{params, align_temporal(embed_meta(*shard.actions_meta, emb), params)};
  }
  if (shard.mouse_traj) {
    std::vector<NormPoint> traj;
    NormPoint last{0.5, 0.5};
    for (const auto& p : *shard.mouse_traj) {
      if (p) last = *p;
      traj.push_back(last);
    }
    const auto fcfg = make_fourier_config(cfg.seeds.fourier, cfg.alignment.fourier_features);
    shard.mouse_aligned = AlignedView{params, align_temporal(fourier_mouse(traj, fcfg), params)};
  }
  shard.extras["seeds"] = seeds_json(cfg);
  validate_shard(shard);
}

EvalClip eval_clip_from_shard(const EpisodeShard& shard) {
  EvalClip c;
  c.clip_id = shard.name();
  c.fps = shard.fps;
  c.frames = shard.frames;
  c.text = shard.buffers;
  if (shard.actions_raw) {
    for (std::size_t f = 0; f < shard.actions_raw->size(); ++f) {
      const auto& v = (*shard.actions_raw)[f];
      if (std::any_of(v.begin(), v.end(), [](std::uint8_t b) { return b != 0; }))
        c.action_times.push_back(static_cast<double>(f) / shard.fps);
    }
  }
  return c;
}

std::vector<EpisodeShard> read_shard_dir(const fs::path& dir) {
  std::vector<fs::path> dirs;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  std::vector<EpisodeShard> shards;
  for (const auto& d : dirs) shards.push_back(read_shard(d));
  return shards;
}

StageSummary run_pipeline(const fs::path& input_dir, const fs::path& output_dir, const PipelineConfig& cfg) {
  validate_config(cfg);
  StageSummary summary;
  const IngestResult ingest = ingest_dir(input_dir, cfg);
  summary.inputs = ingest.sources.size() + ingest.failures.size();
  summary.failures = ingest.failures;
  const fs::path shard_dir = output_dir / "shards";
  fs::create_directories(shard_dir);
  for (const auto& src : ingest.sources) {
    try {
      auto shards = package_source(src, render_source(src, cfg), cfg);
      for (auto& s : shards) {
        encode_shard(s, cfg);
        write_shard(s, shard_dir);
        ++summary.outputs;
      }
    } catch (const Error& e) {
      summary.failures.push_back({src.source_id, e.what()});
    }
  }
  std::vector<EvalClip> clips;
  for (const auto& s : read_shard_dir(shard_dir)) clips.push_back(eval_clip_from_shard(s));
  if (!clips.empty()) write_text_file(output_dir / "report.json", report_to_json(evaluate(clips, clips, cfg.eval)).dump(1) + "\n");
  write_text_file(output_dir / "config.json", config_to_json(cfg).dump(1) + "\n");
  return summary;
}

// ---- probes --------------------------------------------------------------------------

ordered_json probes_to_json(const std::vector<ArithProbe>& probes) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : probes)
    arr.push_back({{"id", p.id}, {"expression", p.expression}, {"expected_answer", p.expected_answer}, {"seed", p.seed}});
  return arr;
}

std::vector<ProbeScore> score_probe_dir(const std::vector<ArithProbe>& probes, const fs::path& dir) {
  std::vector<ProbeScore> out;
  for (const auto& p : probes) {
    const fs::path file = dir / (p.id + ".txt");
    if (!fs::exists(file)) {
      out.push_back({p.id, std::nullopt});
      continue;
    }
    const std::string text = read_text_file(file);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto nl = text.find('\n', start);
      lines.push_back(text.substr(start, nl == std::string::npos ? std::string::npos : nl - start));
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
    out.push_back({p.id, score_probe(p.expected_answer, lines)});
  }
  return out;
}

}  // namespace ncf
