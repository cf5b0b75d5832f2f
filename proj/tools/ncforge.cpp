// ncforge command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ncforge/io.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ncf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed_fourier, seed_toy_model, seed_probes;
  std::optional<double> fps, max_len, gap, eval_fps, eval_max_seconds;
  std::optional<int> cols, rows, align_c, align_w, align_lag, eval_size;
  std::optional<std::size_t> target_frames, eval_K, eval_k, eval_offset;
};

void add_config_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config_path, "JSON config file (default: $NCFORGE_CONFIG); its keys override flags");
  app.add_option("--seed-fourier", f.seed_fourier, "seed for the Fourier mouse encoder");
  app.add_option("--seed-toy-model", f.seed_toy_model, "seed for toy model and action embedding weights");
  app.add_option("--seed-probes", f.seed_probes, "seed for arithmetic probes");
  app.add_option("--fps", f.fps, "replay frame rate");
  app.add_option("--cols", f.cols, "terminal columns override");
  app.add_option("--rows", f.rows, "terminal rows override");
  app.add_option("--max-len", f.max_len, "clip length limit in seconds");
  app.add_option("--gap-threshold", f.gap, "idle gap that splits a clip, seconds");
  app.add_option("--target-frames", f.target_frames, "frames per episode");
  app.add_option("--align-c", f.align_c, "temporal compression stride c");
  app.add_option("--align-w", f.align_w, "window factor w");
  app.add_option("--align-lag", f.align_lag, "window lag in frames");
  app.add_option("--eval-K", f.eval_K, "text frames per clip");
  app.add_option("--eval-k", f.eval_k, "frames after each action");
  app.add_option("--eval-offset", f.eval_offset, "action start offset");
  app.add_option("--eval-fps", f.eval_fps, "evaluation frame rate");
  app.add_option("--eval-max-seconds", f.eval_max_seconds, "evaluation clip length");
  app.add_option("--eval-size", f.eval_size, "evaluation frame size");
}

PipelineConfig effective_config(const Flags& f) {
  PipelineConfig c;
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(c.seeds.fourier, f.seed_fourier);
  set(c.seeds.toy_model, f.seed_toy_model);
  set(c.seeds.probes, f.seed_probes);
  set(c.emulator.fps, f.fps);
  set(c.emulator.cols, f.cols);
  set(c.emulator.rows, f.rows);
  set(c.segmentation.max_len, f.max_len);
  set(c.segmentation.gap_threshold, f.gap);
  set(c.segmentation.target_frames, f.target_frames);
  set(c.alignment.c, f.align_c);
  set(c.alignment.w, f.align_w);
  set(c.alignment.lag, f.align_lag);
  set(c.eval.K, f.eval_K);
  set(c.eval.k, f.eval_k);
  set(c.eval.offset, f.eval_offset);
  set(c.eval.fps, f.eval_fps);
  set(c.eval.max_seconds, f.eval_max_seconds);
  set(c.eval.size, f.eval_size);
  c.model.seed = c.seeds.toy_model;
  std::string path = f.config_path;
  if (path.empty())
    if (const char* env = std::getenv("NCFORGE_CONFIG")) path = env;
  if (!path.empty()) c = load_config_file(path, c);
  validate_config(c);
  return c;
}

void write_config(const fs::path& dir, const PipelineConfig& cfg) {
  write_text_file(dir / "config.json", config_to_json(cfg).dump(1) + "\n");
}

int report_failures(const std::vector<FileFailure>& failures) {
  for (const auto& f : failures) std::cerr << "failed: " << f.file << ": " << f.message << "\n";
  if (!failures.empty()) std::cerr << failures.size() << " file(s) failed\n";
  return failures.empty() ? kExitOk : kExitPartial;
}

int cmd_ingest(const PipelineConfig& cfg, const fs::path& in, const fs::path& out) {
  const IngestResult r = ingest_dir(in, cfg);
  fs::create_directories(out);
  ordered_json sources = ordered_json::array();
  for (const auto& s : r.sources) {
    write_text_file(out / (s.source_id + ".cast"), serialize_cast(s.recording));
    std::size_t outputs = 0;
    for (const auto& e : s.recording.events) outputs += e.kind == EventKind::Output;
    std::cout << s.source_id << ": " << s.recording.events.size() << " events (" << outputs << " output), "
              << s.recording.duration() << " s\n";
    sources.push_back({{"source_id", s.source_id},
                       {"source_tool", s.source_tool},
                       {"events", s.recording.events.size()},
                       {"duration", s.recording.duration()}});
  }
  ordered_json failures = ordered_json::array();
  for (const auto& f : r.failures) failures.push_back({{"file", f.file}, {"error", f.message}});
  write_text_file(out / "ingest.json", ordered_json{{"sources", sources}, {"failures", failures}}.dump(1) + "\n");
  write_config(out, cfg);
  if (r.sources.empty() && r.failures.empty()) std::cerr << "warning: no .cast or .tape files in " << in << "\n";
  std::cout << r.sources.size() << " ingested, " << r.failures.size() << " failed\n";
  return report_failures(r.failures);
}

int cmd_run_vhs(const PipelineConfig& cfg, const fs::path& in, const fs::path& out) {
  std::vector<FileFailure> failures;
  std::size_t done = 0;
  for (const auto& f : list_files(in, ".tape")) {
    try {
      const IngestSource s = ingest_tape(f, cfg);
      write_text_file(out / (s.source_id + ".cast"), serialize_cast(s.recording));
      std::cout << s.source_id << ": " << s.recording.events.size() << " events, " << s.recording.duration() << " s\n";
      ++done;
    } catch (const Error& e) {
      failures.push_back({f.filename().string(), e.what()});
    }
  }
  fs::create_directories(out);
  write_config(out, cfg);
  std::cout << done << " scripts run\n";
  return report_failures(failures);
}

void write_ppm(const fs::path& path, const Image& img) {
  const auto bytes = to_bytes(img);
  std::string data = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  data.append(bytes.begin(), bytes.end());
  write_text_file(path, data);
}

int cmd_render(const PipelineConfig& cfg, const fs::path& cast, const fs::path& out) {
  IngestSource src = cast.extension() == ".tape" ? ingest_tape(cast, cfg) : ingest_cast(cast);
  std::size_t n = 0;
  const auto clips = render_source(src, cfg);
  for (std::size_t c = 0; c < clips.size(); ++c) {
    for (std::size_t i = 0; i < clips[c].clip.frames.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "clip%04zu_frame%05zu.ppm", c, i);
      write_ppm(out / name, clips[c].clip.frames[i]);
      ++n;
    }
  }
  write_config(out, cfg);
  std::cout << clips.size() << " clips, " << n << " frames\n";
  return kExitOk;
}

int cmd_package(const PipelineConfig& cfg, const fs::path& in, const fs::path& out) {
  const IngestResult r = ingest_dir(in, cfg);
  std::vector<FileFailure> failures = r.failures;
  std::size_t shards = 0;
  fs::create_directories(out);
  for (const auto& s : r.sources) {
    try {
      for (const auto& shard : package_source(s, render_source(s, cfg), cfg)) {
        write_shard(shard, out);
        ++shards;
      }
    } catch (const Error& e) {
      failures.push_back({s.source_id, e.what()});
    }
  }
  write_config(out, cfg);
  std::cout << r.sources.size() << " sources, " << shards << " shards\n";
  return report_failures(failures);
}

int cmd_encode(const PipelineConfig& cfg, const fs::path& dir) {
  std::size_t n = 0;
  for (auto& shard : read_shard_dir(dir)) {
    encode_shard(shard, cfg);
    write_shard(shard, dir);
    ++n;
  }
  write_config(dir, cfg);
  std::cout << n << " shards encoded\n";
  return kExitOk;
}

int cmd_build_mask(int L_v, int L_a, int w, int lag, const fs::path& out) {
  const ContextualMask m = build_contextual_mask(L_v, L_a, w, lag);
  write_text_file(out, export_mask(m));
  std::cout << "wrote " << out << " (" << m.size() << "x" << m.size() << ")\n";
  return kExitOk;
}

int cmd_forward(const PipelineConfig& cfg, const std::string& mode_name, bool with_mouse, const fs::path& out) {
  const InjectionMode mode = injection_mode_from_string(mode_name);
  ToyConfig tc = cfg.model;
  tc.seed = cfg.seeds.toy_model;
  if (with_mouse && tc.d_mouse == 0) tc.d_mouse = 2 * cfg.alignment.fourier_features;
  const ToyModelParams params = make_toy_params(tc);
  SeededRng rng(cfg.seeds.toy_model ^ 0x9e3779b97f4a7c15ULL);
  auto random = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = rng.normal();
    return m;
  };
  const int L_a = mode == InjectionMode::Contextual ? tc.L_a : tc.L_v;
  const Eigen::MatrixXd video = random(tc.L_v, tc.d_model);
  const Eigen::MatrixXd actions = random(L_a, tc.d_model);
  std::optional<Eigen::MatrixXd> mouse;
  if (with_mouse) mouse = random(L_a, tc.d_mouse);
  const Eigen::MatrixXd y = forward(mode, video, actions, mouse, params);
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < y.cols(); ++c) row.push_back(y(r, c));
    rows.push_back(std::move(row));
  }
  write_text_file(out, ordered_json{{"mode", to_string(mode)}, {"seed", tc.seed}, {"output", rows}}.dump(1) + "\n");
  std::cout << to_string(mode) << ": " << y.rows() << "x" << y.cols() << " -> " << out << "\n";
  return kExitOk;
}

int cmd_probe_gen(const PipelineConfig& cfg, const fs::path& out) {
  const auto probes = gen_arith_probe(cfg.seeds.probes, cfg.probe_count);
  for (const auto& p : probes) write_text_file(out / "tapes" / (p.id + ".tape"), script_to_text(p.script));
  write_text_file(out / "probes.json", probes_to_json(probes).dump(1) + "\n");
  write_config(out, cfg);
  std::cout << probes.size() << " probes written\n";
  return kExitOk;
}

int cmd_probe_score(const fs::path& probes_file, const fs::path& transcripts, const std::string& out) {
  const auto j = ordered_json::parse(read_text_file(probes_file), nullptr, false);
  if (j.is_discarded() || !j.is_array()) throw Error(ErrorCode::InvalidConfig, probes_file.string() + " is not a probe list");
  std::vector<ArithProbe> probes;
  for (const auto& p : j) {
    ArithProbe a;
    a.id = p.at("id").get<std::string>();
    a.expression = p.value("expression", "");
    a.expected_answer = p.at("expected_answer").get<std::string>();
    probes.push_back(std::move(a));
  }
  const auto scores = score_probe_dir(probes, transcripts);
  std::size_t passed = 0, missing = 0;
  ordered_json rows = ordered_json::array();
  for (const auto& s : scores) {
    if (!s.passed) {
      ++missing;
      std::cerr << "missing transcript: " << s.id << "\n";
      rows.push_back({{"id", s.id}, {"passed", nullptr}});
      continue;
    }
    passed += *s.passed;
    std::cout << s.id << " " << (*s.passed ? "pass" : "fail") << "\n";
    rows.push_back({{"id", s.id}, {"passed", *s.passed}});
  }
  const double acc = scores.empty() ? 0.0 : static_cast<double>(passed) / static_cast<double>(scores.size());
  std::cout << "accuracy " << acc << " (" << passed << "/" << scores.size() << ")\n";
  if (!out.empty())
    write_text_file(out, ordered_json{{"accuracy", acc}, {"missing", missing}, {"probes", rows}}.dump(1) + "\n");
  return missing ? kExitConfig : kExitOk;
}

int cmd_eval(const PipelineConfig& cfg, const fs::path& gen_dir, const fs::path& gt_dir, const fs::path& out) {
  std::vector<EvalClip> gen, gt;
  for (const auto& s : read_shard_dir(gen_dir)) gen.push_back(eval_clip_from_shard(s));
  for (const auto& s : read_shard_dir(gt_dir)) gt.push_back(eval_clip_from_shard(s));
  const MetricReport report = evaluate(gen, gt, cfg.eval);
  if (report.clips.empty()) {
    std::cerr << "no clip ids present on both sides (" << report.skipped << " skipped)\n";
    return kExitConfig;
  }
  write_text_file(out, report_to_json(report).dump(1) + "\n");
  if (out.has_parent_path()) write_config(out.parent_path(), cfg);
  std::cout << report.clips.size() << " pairs evaluated, " << report.skipped << " skipped -> " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncforge: terminal/GUI episode data engine, toy backbone and evaluation harness"};
  app.require_subcommand(1);
  Flags flags;
  add_config_flags(app, flags);

  std::string in, out, extra, mode = "contextual", score_out;
  int L_v = 16, L_a = 16, w = 2, lag = 1;
  bool with_mouse = false;

  auto* ingest = app.add_subcommand("ingest-cast", "parse and validate .cast and .tape inputs");
  ingest->add_option("input", in, "input directory")->required();
  ingest->add_option("output", out, "output directory")->required();
  auto* vhs = app.add_subcommand("run-vhs", "run .tape scripts through the simulated session");
  vhs->add_option("input", in, "directory of .tape files")->required();
  vhs->add_option("output", out, "output directory for .cast files")->required();
  auto* render = app.add_subcommand("render", "replay one recording and write PPM frames");
  render->add_option("input", in, ".cast or .tape file")->required();
  render->add_option("output", out, "output directory")->required();
  auto* pkg = app.add_subcommand("package", "replay, segment, render and package episode shards");
  pkg->add_option("input", in, "input directory")->required();
  pkg->add_option("output", out, "shard directory")->required();
  auto* enc = app.add_subcommand("encode-actions", "add latent-aligned action features to shards");
  enc->add_option("shards", in, "shard directory")->required();
  auto* mask = app.add_subcommand("build-mask", "export a contextual attention mask");
  mask->add_option("--L-v", L_v, "video tokens");
  mask->add_option("--L-a", L_a, "action tokens");
  mask->add_option("--window", w, "V2V half-width");
  mask->add_option("--lag", lag, "action lag in token steps");
  mask->add_option("output", out, "mask file")->required();
  auto* fwd = app.add_subcommand("forward", "run the toy backbone on seeded latents");
  fwd->add_option("--mode", mode, "external, contextual, residual or internal");
  fwd->add_flag("--mouse", with_mouse, "feed mouse latents too");
  fwd->add_option("output", out, "output JSON")->required();
  auto* pgen = app.add_subcommand("probe-gen", "generate arithmetic probes");
  pgen->add_option("output", out, "output directory")->required();
  auto* pscore = app.add_subcommand("probe-score", "score transcripts against probes");
  pscore->add_option("probes", in, "probes.json")->required();
  pscore->add_option("transcripts", extra, "directory of <probe id>.txt")->required();
  pscore->add_option("--out", score_out, "summary JSON");
  auto* ev = app.add_subcommand("eval", "compare generated and reference shards by clip id");
  ev->add_option("generated", in, "generated shard directory")->required();
  ev->add_option("reference", extra, "reference shard directory")->required();
  ev->add_option("output", out, "report JSON")->required();
  auto* pipe = app.add_subcommand("pipeline", "ingest, render, package, encode and evaluate in one run");
  pipe->add_option("input", in, "input directory")->required();
  pipe->add_option("output", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  PipelineConfig cfg;
  try {
    cfg = effective_config(flags);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*ingest) return cmd_ingest(cfg, in, out);
    if (*vhs) return cmd_run_vhs(cfg, in, out);
    if (*render) return cmd_render(cfg, in, out);
    if (*pkg) return cmd_package(cfg, in, out);
    if (*enc) return cmd_encode(cfg, in);
    if (*mask) return cmd_build_mask(L_v, L_a, w, lag, out);
    if (*fwd) return cmd_forward(cfg, mode, with_mouse, out);
    if (*pgen) return cmd_probe_gen(cfg, out);
    if (*pscore) return cmd_probe_score(in, extra, score_out);
    if (*ev) return cmd_eval(cfg, in, extra, out);
    if (*pipe) {
      const StageSummary s = run_pipeline(in, out, cfg);
      std::cout << s.inputs << " inputs, " << s.outputs << " shards\n";
      return report_failures(s.failures);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::Io ? kExitConfig : kExitPartial;
  }
  return kExitOk;
}
