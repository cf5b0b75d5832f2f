#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ncf {

using ordered_json = nlohmann::ordered_json;

// asciinema v2 header. Fields other than the documented five are kept in
// `extras` (insertion order preserved) so real archives survive a round trip.
struct CastHeader {
  int version = 2;
  int width = 80;
  int height = 24;
  std::optional<double> timestamp;
  std::optional<std::map<std::string, std::string>> env;
  ordered_json extras = ordered_json::object();

  bool operator==(const CastHeader&) const = default;
};

enum class EventKind { Output, Input, Other };

struct CastEvent {
  double time = 0.0;
  EventKind kind = EventKind::Output;
  std::string tag = "o";  // raw kind code; "o" and "i" for Output/Input
  std::string payload;

  bool operator==(const CastEvent&) const = default;
};

struct CastRecording {
  CastHeader header;
  std::vector<CastEvent> events;

  bool operator==(const CastRecording&) const = default;

  double duration() const { return events.empty() ? 0.0 : events.back().time; }
};

CastEvent make_event(double time, std::string_view tag, std::string payload);

// Throws ncf::Error with MalformedHeader, MalformedEvent(line) or NonMonotonicTime(line).
// The header object may span several physical lines as long as it starts on
// the first one; blank lines between events are skipped.
CastRecording parse_cast(std::string_view bytes);

std::string serialize_cast(const CastRecording& rec);

// Sidecar caption/metadata record for one clip.
struct Dims {
  int width = 0;
  int height = 0;
  bool operator==(const Dims&) const = default;
};

struct SizeInfo {
  int width = 0;
  int height = 0;
  Dims original;
  Dims target;
  Dims scaled;
  std::array<int, 2> padding{0, 0};
  bool operator==(const SizeInfo&) const = default;
};

struct DataInfo {
  int version = 2;
  SizeInfo size;
  std::map<std::string, std::string> env;
  bool operator==(const DataInfo&) const = default;
};

struct SourceMetadata {
  std::string id;
  std::string title;
  std::string author;
  std::string created_at;
  std::vector<std::string> urls;
  bool operator==(const SourceMetadata&) const = default;
};

struct ClipMetadata {
  std::string caption;
  std::string caption_detailed;
  std::string caption_semantic;
  DataInfo data_info;
  // Numeric leaves of the derived-statistics object; nested objects are
  // flattened with '.' separators ("typing_rhythm.avg_interval").
  std::map<std::string, double> videogen_stats;
  SourceMetadata source_metadata;
  bool operator==(const ClipMetadata&) const = default;
};

// Throws MissingField(name) when a caption tier is absent.
ClipMetadata parse_clip_metadata(std::string_view bytes);
std::string serialize_clip_metadata(const ClipMetadata& meta);

}  // namespace ncf
