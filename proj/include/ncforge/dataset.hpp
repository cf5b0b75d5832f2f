#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncforge/action_codec.hpp"
#include "ncforge/cast_io.hpp"
#include "ncforge/raster.hpp"
#include "ncforge/term_emu.hpp"

namespace ncf {

// Reason a clip ended. EndOfStream marks the final clip of a stream.
enum class SplitReason { ScreenClear, ActivityGap, MaxLength, EndOfStream };

std::string to_string(SplitReason r);
SplitReason split_reason_from_string(std::string_view s);

// Evenly spaced indices: all of [0, T) when T <= K, [0] when K == 1, else
// round(i*(T-1)/(K-1)) for i < K, computed exactly with integers.
std::vector<std::size_t> uniform_subsample(std::size_t T, std::size_t K);

// Source indices that produce `target` frames from `n`: repeat the final
// frame when short, uniform_subsample when long.
std::vector<std::size_t> normalize_indices(std::size_t n, std::size_t target);

template <typename T>
std::vector<T> normalize_length(const std::vector<T>& frames, std::size_t target) {
  if (frames.empty()) throw Error(ErrorCode::InvalidConfig, "cannot normalize an empty clip");
  std::vector<T> out;
  out.reserve(target);
  for (std::size_t i : normalize_indices(frames.size(), target)) out.push_back(frames[i]);
  return out;
}

struct SegmentOptions {
  double max_len = 5.0;
  double gap_threshold = std::numeric_limits<double>::infinity();
};

struct FrameInfo {
  double time = 0.0;
  bool blank = false;    // screen fully blank
  bool changed = false;  // differs from the previous frame
};

struct ClipSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  SplitReason reason = SplitReason::EndOfStream;
  bool operator==(const ClipSpan&) const = default;
};

// A new clip starts at frame i when the screen turns blank there
// (ScreenClear), when i changes after an idle stretch of at least
// gap_threshold seconds (ActivityGap), or when t_i - t_start >= max_len
// (MaxLength). The reason is stored on the clip that ends.
std::vector<ClipSpan> segment(const std::vector<FrameInfo>& frames, const SegmentOptions& opts = {});
std::vector<ClipSpan> segment(const std::vector<ReplayFrame>& frames, const SegmentOptions& opts = {});

struct Clip {
  std::string source_id;
  std::vector<double> frame_times;
  std::vector<FrameTensor> frames;
  std::vector<std::vector<std::string>> buffers;  // terminal text per frame, when known
  SplitReason split_reason = SplitReason::EndOfStream;
};

// ---- episode shards --------------------------------------------------------------

struct Geometry {
  int cols = 0;
  int rows = 0;
  int width_px = 0;
  int height_px = 0;
  bool operator==(const Geometry&) const = default;
};

struct Captions {
  std::string semantic;
  std::string regular;
  std::string detailed;
  std::string scripted;
  bool operator==(const Captions&) const = default;
};

struct AlignedView {
  AlignParams params;
  Eigen::MatrixXd values;
  bool operator==(const AlignedView& o) const {
    return params == o.params && values.rows() == o.values.rows() && values.cols() == o.values.cols() &&
           values == o.values;
  }
};

struct EpisodeShard {
  std::string source_id;
  std::size_t ordinal = 0;
  std::vector<FrameTensor> frames;
  double fps = 15.0;
  Captions captions;
  std::vector<std::vector<std::string>> buffers;
  std::optional<std::vector<RawActionVector>> actions_raw;
  std::optional<std::vector<MetaFrame>> actions_meta;
  std::optional<std::vector<std::optional<NormPoint>>> mouse_traj;
  std::optional<AlignedView> actions_aligned;
  std::optional<AlignedView> mouse_aligned;
  std::string source_tool = "asciinema";  // asciinema, vhs or gui-capture
  std::map<std::string, std::string> env;
  Geometry geometry;
  SplitReason split_reason = SplitReason::EndOfStream;
  ordered_json extras = ordered_json::object();  // seeds and other provenance

  bool operator==(const EpisodeShard&) const = default;

  std::string name() const;  // <source_id>_<ordinal, 4 digits>
};

// Checks the per-frame modalities against the frame count. Throws
// LengthMismatch naming the first offending modality.
void validate_shard(const EpisodeShard& shard);

struct PackageInput {
  std::vector<FrameTensor> frames;
  std::vector<std::vector<std::string>> buffers;
  Captions captions;
  std::optional<std::vector<RawActionVector>> actions_raw;
  std::optional<std::vector<MetaFrame>> actions_meta;
  std::optional<std::vector<std::optional<NormPoint>>> mouse_traj;
  std::string source_tool = "asciinema";
  std::map<std::string, std::string> env;
  Geometry geometry;
  std::string source_id;
  std::size_t ordinal = 0;
  SplitReason split_reason = SplitReason::EndOfStream;
  ordered_json extras = ordered_json::object();
};

EpisodeShard package(PackageInput input);

// manifest.json (without frame pixels) and frames.bin (u8 RGB, row-major).
ordered_json shard_manifest(const EpisodeShard& shard);
std::vector<std::uint8_t> shard_frame_bytes(const EpisodeShard& shard);
EpisodeShard shard_from_parts(const ordered_json& manifest, const std::vector<std::uint8_t>& frame_bytes);

// Writes <dir>/<shard.name()>/{manifest.json, frames.bin}; returns the shard directory.
std::filesystem::path write_shard(const EpisodeShard& shard, const std::filesystem::path& dir);
EpisodeShard read_shard(const std::filesystem::path& shard_dir);

}  // namespace ncf
