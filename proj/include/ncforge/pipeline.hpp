#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ncforge/cast_io.hpp"
#include "ncforge/dataset.hpp"
#include "ncforge/metrics.hpp"
#include "ncforge/toy_nc.hpp"
#include "ncforge/vhs.hpp"

namespace ncf {

struct PipelineConfig {
  struct Paths {
    std::string input_dir;
    std::string output_dir;
  } paths;
  struct Emulator {
    int cols = 0;  // 0 keeps the recording's geometry
    int rows = 0;
    double fps = 15.0;
    int cell_width = kGlyphWidth;
    int cell_height = kGlyphHeight;
  } emulator;
  struct Segmentation {
    double max_len = 5.0;
    double gap_threshold = std::numeric_limits<double>::infinity();
    std::size_t target_frames = 75;
  } segmentation;
  struct Alignment {
    int c = 4;
    int w = 1;
    int lag = 0;
    int embed_dim = 16;
    int fourier_features = 16;
  } alignment;
  EvalOptions eval;
  struct Seeds {
    std::uint64_t fourier = 0;
    std::uint64_t toy_model = 0;
    std::uint64_t probes = 0;
  } seeds;
  ToyConfig model;
  std::size_t probe_count = 100;
};

// Throws InvalidConfig naming the offending field.
void validate_config(const PipelineConfig& cfg);

ordered_json config_to_json(const PipelineConfig& cfg);

// Applies the keys present in `j` on top of `base`; unknown keys are rejected.
PipelineConfig config_from_json(const ordered_json& j, PipelineConfig base = {});

// Reads a JSON config file over `base`. Throws InvalidConfig or Io.
PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base = {});

// ---- stages --------------------------------------------------------------------------

struct IngestSource {
  std::string source_id;
  std::string source_tool;  // asciinema or vhs
  CastRecording recording;
  Captions captions;
};

struct FileFailure {
  std::string file;
  std::string message;
};

struct IngestResult {
  std::vector<IngestSource> sources;  // sorted by source_id
  std::vector<FileFailure> failures;
};

// .cast files (with an optional <stem>.json caption sidecar) and .tape
// scripts, which run through the simulated session.
IngestResult ingest_dir(const std::filesystem::path& dir, const PipelineConfig& cfg);
IngestSource ingest_cast(const std::filesystem::path& file);
IngestSource ingest_tape(const std::filesystem::path& file, const PipelineConfig& cfg);

struct RenderedClip {
  Clip clip;
  std::vector<std::vector<GuiEvent>> events;  // per frame of the clip
  Geometry geometry;
};

// Replay at the emulator fps, segment, and render every frame of each clip.
std::vector<RenderedClip> render_source(const IngestSource& source, const PipelineConfig& cfg);

// Length-normalizes each clip and packages both action views. Events on
// frames dropped by subsampling move to the next kept frame.
std::vector<EpisodeShard> package_source(const IngestSource& source, const std::vector<RenderedClip>& clips,
                                         const PipelineConfig& cfg);

// Adds actions_aligned (meta embeddings) and mouse_aligned (Fourier features)
// when the corresponding views exist.
void encode_shard(EpisodeShard& shard, const PipelineConfig& cfg);

EvalClip eval_clip_from_shard(const EpisodeShard& shard);

std::vector<EpisodeShard> read_shard_dir(const std::filesystem::path& dir);

struct StageSummary {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<FileFailure> failures;
};

// Whole pipeline into <out>/shards, <out>/report.json and <out>/config.json.
StageSummary run_pipeline(const std::filesystem::path& input_dir, const std::filesystem::path& output_dir,
                          const PipelineConfig& cfg);

// ---- probes --------------------------------------------------------------------------

ordered_json probes_to_json(const std::vector<ArithProbe>& probes);

struct ProbeScore {
  std::string id;
  std::optional<bool> passed;  // nullopt when the transcript is missing
};

// Reads <dir>/<probe id>.txt for every probe.
std::vector<ProbeScore> score_probe_dir(const std::vector<ArithProbe>& probes, const std::filesystem::path& dir);

}  // namespace ncf
