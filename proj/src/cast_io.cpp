#include "ncforge/cast_io.hpp"

#include <cmath>

#include "ncforge/error.hpp"

namespace ncf {

namespace {

EventKind kind_from_tag(std::string_view tag) {
  if (tag == "o") return EventKind::Output;
  if (tag == "i") return EventKind::Input;
  return EventKind::Other;
}

struct LineCursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  bool next(std::string_view& line) {
    if (pos >= text.size()) return false;
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return true;
  }
};

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

CastHeader header_from_json(const ordered_json& obj) {
  if (!obj.is_object()) throw Error(ErrorCode::MalformedHeader, "first line is not an object", 1);
  CastHeader h;
  const auto version = obj.find("version");
  if (version == obj.end() || !version->is_number_integer() || version->get<int>() != 2)
    throw Error(ErrorCode::MalformedHeader, "version must be 2", 1);
  auto read_dim = [&](const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer() || it->get<long long>() < 1 || it->get<long long>() > 100000)
      throw Error(ErrorCode::MalformedHeader, std::string(key) + " must be a positive integer", 1);
    return it->get<int>();
  };
  h.width = read_dim("width");
  h.height = read_dim("height");
  for (const auto& [key, value] : obj.items()) {
    if (key == "version" || key == "width" || key == "height") continue;
    if (key == "timestamp" && value.is_number()) {
      h.timestamp = value.get<double>();
    } else if (key == "env" && value.is_object()) {
      std::map<std::string, std::string> env;
      bool all_strings = true;
      for (const auto& [k, v] : value.items()) {
        if (!v.is_string()) {
          all_strings = false;
          break;
        }
        env[k] = v.get<std::string>();
      }
      if (all_strings) {
        h.env = std::move(env);
      } else {
        h.extras[key] = value;
      }
    } else {
      h.extras[key] = value;
    }
  }
  return h;
}

}  // namespace

CastEvent make_event(double time, std::string_view tag, std::string payload) {
  return CastEvent{time, kind_from_tag(tag), std::string(tag), std::move(payload)};
}

CastRecording parse_cast(std::string_view bytes) {
  LineCursor lines{bytes};
  std::string_view line;
  std::size_t first_line = 0;
  while (lines.next(line)) {
    if (!blank(line)) {
      first_line = lines.line_no;
      break;
    }
  }
  if (first_line == 0) throw Error(ErrorCode::MalformedHeader, "empty input", 1);
  if (first_line != 1 || line.find_first_not_of(" \t") == std::string_view::npos ||
      line[line.find_first_not_of(" \t")] != '{')
    throw Error(ErrorCode::MalformedHeader, "first line is not an object", 1);

  // Accumulate physical lines until the header object parses.
  std::string header_text(line);
  ordered_json header_json = ordered_json::parse(header_text, nullptr, false);
  while (header_json.is_discarded()) {
    if (!lines.next(line)) throw Error(ErrorCode::MalformedHeader, "unterminated header object", 1);
    header_text.push_back('\n');
    header_text.append(line);
    header_json = ordered_json::parse(header_text, nullptr, false);
  }

  CastRecording rec;
  rec.header = header_from_json(header_json);

  double last_time = 0.0;
  while (lines.next(line)) {
    if (blank(line)) continue;
    const std::size_t no = lines.line_no;
    const auto ev = nlohmann::json::parse(line, nullptr, false);
    if (ev.is_discarded() || !ev.is_array())
      throw Error(ErrorCode::MalformedEvent, "event is not a JSON array", no);
    if (ev.size() != 3)
      throw Error(ErrorCode::MalformedEvent, "expected 3 elements, got " + std::to_string(ev.size()), no);
    if (!ev[0].is_number()) throw Error(ErrorCode::MalformedEvent, "time is not numeric", no);
    if (!ev[1].is_string()) throw Error(ErrorCode::MalformedEvent, "kind is not a string", no);
    if (!ev[2].is_string()) throw Error(ErrorCode::MalformedEvent, "payload is not a string", no);
    const double t = ev[0].get<double>();
    if (!std::isfinite(t) || t < 0.0) throw Error(ErrorCode::MalformedEvent, "time must be non-negative", no);
    if (!rec.events.empty() && t < last_time)
      throw Error(ErrorCode::NonMonotonicTime, "time decreases", no);
    last_time = t;
    rec.events.push_back(make_event(t, ev[1].get<std::string>(), ev[2].get<std::string>()));
  }
  return rec;
}

std::string serialize_cast(const CastRecording& rec) {
  ordered_json header = ordered_json::object();
  header["version"] = rec.header.version;
  header["width"] = rec.header.width;
  header["height"] = rec.header.height;
  if (rec.header.timestamp) {
    const double ts = *rec.header.timestamp;
    if (ts == std::floor(ts) && std::fabs(ts) < 9e15) {
      header["timestamp"] = static_cast<long long>(ts);
    } else {
      header["timestamp"] = ts;
    }
  }
  if (rec.header.env) {
    ordered_json env = ordered_json::object();
    for (const auto& [k, v] : *rec.header.env) env[k] = v;
    header["env"] = std::move(env);
  }
  for (const auto& [k, v] : rec.header.extras.items()) header[k] = v;

  constexpr auto replace = nlohmann::json::error_handler_t::replace;
  std::string out = header.dump(-1, ' ', false, replace);
  out.push_back('\n');
  for (const auto& ev : rec.events) {
    nlohmann::json row = nlohmann::json::array({ev.time, ev.tag, ev.payload});
    out += row.dump(-1, ' ', false, replace);
    out.push_back('\n');
  }
  return out;
}

namespace {

std::string require_string(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw Error(ErrorCode::MissingField, key);
  return it->get<std::string>();
}

std::string optional_string(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

Dims read_dims(const nlohmann::json& v, Dims fallback) {
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer())
    return Dims{v[0].get<int>(), v[1].get<int>()};
  if (v.is_object() && v.contains("width") && v.contains("height"))
    return Dims{v["width"].get<int>(), v["height"].get<int>()};
  return fallback;
}

void flatten_stats(const nlohmann::json& node, const std::string& prefix, std::map<std::string, double>& out) {
  for (const auto& [k, v] : node.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_number()) {
      out[key] = v.get<double>();
    } else if (v.is_object()) {
      flatten_stats(v, key, out);
    }
  }
}

}  // namespace

ClipMetadata parse_clip_metadata(std::string_view bytes) {
  const auto doc = nlohmann::json::parse(bytes, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorCode::MissingField, "record is not a JSON object");
  ClipMetadata meta;
  meta.caption = require_string(doc, "caption");
  meta.caption_detailed = require_string(doc, "caption_detailed");
  meta.caption_semantic = require_string(doc, "caption_semantic");

  const auto info = doc.find("data_info");
  if (info == doc.end() || !info->is_object()) throw Error(ErrorCode::MissingField, "data_info");
  if (info->contains("version") && (*info)["version"].is_number_integer())
    meta.data_info.version = (*info)["version"].get<int>();
  const auto size = info->find("size");
  if (size == info->end() || !size->is_object()) throw Error(ErrorCode::MissingField, "data_info.size");
  auto& s = meta.data_info.size;
  if (!size->contains("width") || !size->contains("height") || !(*size)["width"].is_number_integer() ||
      !(*size)["height"].is_number_integer())
    throw Error(ErrorCode::MissingField, "data_info.size.width/height");
  s.width = (*size)["width"].get<int>();
  s.height = (*size)["height"].get<int>();
  const Dims base{s.width, s.height};
  s.original = size->contains("original") ? read_dims((*size)["original"], base) : base;
  s.target = size->contains("target") ? read_dims((*size)["target"], base) : base;
  s.scaled = size->contains("scaled") ? read_dims((*size)["scaled"], base) : base;
  if (size->contains("padding")) {
    const auto& p = (*size)["padding"];
    if (p.is_array() && p.size() == 2 && p[0].is_number_integer() && p[1].is_number_integer())
      s.padding = {p[0].get<int>(), p[1].get<int>()};
  }
  if (info->contains("env") && (*info)["env"].is_object()) {
    for (const auto& [k, v] : (*info)["env"].items())
      if (v.is_string()) meta.data_info.env[k] = v.get<std::string>();
  }

  for (const char* key : {"videogen_stats", "meta"}) {
    const auto it = doc.find(key);
    if (it == doc.end() || !it->is_object()) continue;
    const auto& node = (std::string(key) == "meta" && it->contains("videogen")) ? (*it)["videogen"] : *it;
    if (node.is_object()) flatten_stats(node, "", meta.videogen_stats);
  }

  const auto src = doc.find("metadata");
  if (src != doc.end() && src->is_object()) {
    auto& m = meta.source_metadata;
    if (src->contains("id")) {
      const auto& id = (*src)["id"];
      m.id = id.is_string() ? id.get<std::string>() : id.dump();
    }
    m.title = optional_string(*src, "title");
    m.author = optional_string(*src, "author");
    m.created_at = optional_string(*src, "created_at");
    if (src->contains("urls")) {
      const auto& urls = (*src)["urls"];
      if (urls.is_array()) {
        for (const auto& u : urls)
          if (u.is_string()) m.urls.push_back(u.get<std::string>());
      } else if (urls.is_object()) {
        for (const auto& [k, u] : urls.items())
          if (u.is_string()) m.urls.push_back(u.get<std::string>());
      }
    }
  }
  return meta;
}

std::string serialize_clip_metadata(const ClipMetadata& meta) {
  ordered_json doc;
  doc["caption"] = meta.caption;
  doc["caption_detailed"] = meta.caption_detailed;
  doc["caption_semantic"] = meta.caption_semantic;
  const auto& s = meta.data_info.size;
  auto dims = [](const Dims& d) { return ordered_json::array({d.width, d.height}); };
  doc["data_info"]["version"] = meta.data_info.version;
  doc["data_info"]["size"] = {{"width", s.width},          {"height", s.height},       {"original", dims(s.original)},
                              {"target", dims(s.target)},  {"scaled", dims(s.scaled)}, {"padding", s.padding}};
  doc["data_info"]["env"] = ordered_json::object();
  for (const auto& [k, v] : meta.data_info.env) doc["data_info"]["env"][k] = v;
  doc["videogen_stats"] = ordered_json::object();
  for (const auto& [k, v] : meta.videogen_stats) doc["videogen_stats"][k] = v;
  const auto& m = meta.source_metadata;
  doc["metadata"] = {{"id", m.id}, {"title", m.title}, {"author", m.author}, {"created_at", m.created_at}, {"urls", m.urls}};
  return doc.dump(2);
}

}  // namespace ncf
