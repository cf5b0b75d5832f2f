#include "ncforge/vhs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ncforge/error.hpp"
#include "ncforge/numeric.hpp"
#include "ncforge/text.hpp"

namespace ncf {

const std::vector<std::string> kVhsKeyNames = {"Escape", "Backspace", "Delete", "Insert", "Down",   "Enter",   "Space",
                                               "Tab",    "Left",      "Right",  "Up",     "PageUp", "PageDown"};

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

// Splits off the first whitespace-delimited word.
std::pair<std::string_view, std::string_view> head_word(std::string_view line) {
  const auto sp = line.find_first_of(" \t");
  if (sp == std::string_view::npos) return {line, {}};
  return {line.substr(0, sp), trim(line.substr(sp))};
}

std::string unquote(std::string_view s, std::size_t line) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'' || s.front() == '`') && s.back() == s.front())
    return std::string(s.substr(1, s.size() - 2));
  if (s.empty()) throw Error(ErrorCode::UnknownCommand, "missing argument", line);
  return std::string(s);
}

int parse_int(std::string_view s, std::size_t line, const char* what) {
  int v = 0;
  s = trim(s);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be an integer", line);
  return v;
}

double parse_real(std::string_view s, std::size_t line, const char* what) {
  s = trim(s);
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v))
    throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be a number", line);
  return v;
}

std::string format_duration(std::int64_t ms) {
  if (ms % 1000 == 0 && ms != 0) return std::to_string(ms / 1000) + "s";
  return std::to_string(ms) + "ms";
}

Theme parse_theme_json(const std::string& text, std::size_t line) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorCode::MalformedTheme, "theme is not a JSON object", line);
  Theme theme;
  auto color = [&](const char* key, Rgb& dst) {
    const auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_string()) throw Error(ErrorCode::MalformedTheme, std::string(key) + " is not a string", line);
    const auto c = parse_hex_color(it->get<std::string>());
    if (!c) throw Error(ErrorCode::MalformedTheme, std::string(key) + " is not a #rrggbb colour", line);
    dst = *c;
  };
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw Error(ErrorCode::MalformedTheme, "name is not a string", line);
    theme.name = doc["name"].get<std::string>();
  }
  color("background", theme.background);
  color("foreground", theme.foreground);
  for (std::size_t i = 0; i < kThemeAnsiKeys.size(); ++i) color(kThemeAnsiKeys[i], theme.ansi[i]);
  color("cursor", theme.cursor);
  color("cursorAccent", theme.cursor_accent);
  color("selectionBackground", theme.selection_background);
  return theme;
}

std::string theme_to_json(const Theme& theme) {
  nlohmann::ordered_json doc;
  doc["name"] = theme.name;
  doc["background"] = to_hex(theme.background);
  doc["foreground"] = to_hex(theme.foreground);
  for (std::size_t i = 0; i < kThemeAnsiKeys.size(); ++i) doc[kThemeAnsiKeys[i]] = to_hex(theme.ansi[i]);
  doc["cursor"] = to_hex(theme.cursor);
  doc["cursorAccent"] = to_hex(theme.cursor_accent);
  doc["selectionBackground"] = to_hex(theme.selection_background);
  return doc.dump(2);
}

const std::regex& annotation_re() {
  static const std::regex re(R"(^#\s*([A-Z][A-Z0-9_]*):\s*(.*?)\s*$)");
  return re;
}

void record_annotation(VhsAnnotations& ann, const std::string& key, const std::string& value) {
  auto as_int = [&]() -> std::optional<int> {
    int v = 0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (r.ec != std::errc{} || r.ptr != value.data() + value.size()) return std::nullopt;
    return v;
  };
  if (key == "ID") {
    ann.id = value;
  } else if (key == "INSTRUCTION") {
    ann.instruction = value;
  } else if (key == "LEVEL" && as_int()) {
    ann.level = as_int();
  } else if (key == "EVENTS" && as_int()) {
    ann.events = as_int();
  } else if (key == "VISUAL_COMPLEXITY" && as_int()) {
    ann.visual_complexity = as_int();
  } else if (!value.empty()) {
    ann.other[key] = value;
  }
}

void apply_setting(VhsScript& script, std::string_view key, std::string_view value, std::size_t line) {
  auto& s = script.settings;
  const std::string k(key);
  if (k == "Shell") {
    s.shell = unquote(value, line);
  } else if (k == "FontSize") {
    s.font_size = parse_int(value, line, "FontSize");
  } else if (k == "Width") {
    s.width = parse_int(value, line, "Width");
  } else if (k == "Height") {
    s.height = parse_int(value, line, "Height");
  } else if (k == "TypingSpeed") {
    s.typing_speed_ms = parse_duration_ms(value, line);
  } else if (k == "PlaybackSpeed") {
    s.playback_speed = parse_real(value, line, "PlaybackSpeed");
  } else if (k == "Margin") {
    s.margin = parse_int(value, line, "Margin");
  } else if (k == "MarginFill") {
    s.margin_fill = unquote(value, line);
  } else if (k == "BorderRadius") {
    s.border_radius = parse_int(value, line, "BorderRadius");
  } else if (k == "Padding") {
    s.padding = parse_int(value, line, "Padding");
  } else if (k == "LineHeight") {
    s.line_height = parse_real(value, line, "LineHeight");
  } else if (k == "LetterSpacing") {
    s.letter_spacing = parse_real(value, line, "LetterSpacing");
  } else if (k == "Theme") {
    const auto v = trim(value);
    if (!v.empty() && v.front() == '{') {
      s.theme = parse_theme_json(std::string(v), line);
    } else {
      s.theme.name = unquote(v, line);
    }
  } else {
    s.extra[k] = std::string(trim(value));
  }
}

void validate(const VhsScript& script) {
  const auto& s = script.settings;
  if (s.typing_speed_ms <= 0) throw Error(ErrorCode::InvalidConfig, "TypingSpeed must be positive");
  if (s.width <= 0 || s.height <= 0) throw Error(ErrorCode::InvalidConfig, "Width and Height must be positive");
  if (s.font_size <= 0) throw Error(ErrorCode::InvalidConfig, "FontSize must be positive");
}

// Parses "Word[@time]" into the word and the optional override.
std::pair<std::string_view, std::optional<std::int64_t>> split_speed(std::string_view word, std::size_t line) {
  const auto at = word.find('@');
  if (at == std::string_view::npos) return {word, std::nullopt};
  return {word.substr(0, at), parse_duration_ms(word.substr(at + 1), line)};
}

}  // namespace

std::int64_t parse_duration_ms(std::string_view text, std::size_t line) {
  const auto s = trim(text);
  std::size_t i = 0;
  while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
  const auto number = s.substr(0, i);
  const auto unit = trim(s.substr(i));
  if (number.empty() || number == "." || std::count(number.begin(), number.end(), '.') > 1)
    throw Error(ErrorCode::MalformedDuration, std::string(text), line);
  const double v = std::strtod(std::string(number).c_str(), nullptr);
  double ms;
  if (unit == "ms") {
    ms = v;
  } else if (unit.empty() || unit == "s") {
    ms = v * 1000.0;
  } else if (unit == "m") {
    ms = v * 60000.0;
  } else {
    throw Error(ErrorCode::MalformedDuration, std::string(text), line);
  }
  if (!std::isfinite(ms) || ms > 1e15) throw Error(ErrorCode::MalformedDuration, std::string(text), line);
  return static_cast<std::int64_t>(round_half_away(ms));
}

VhsScript parse_script(std::string_view text) {
  VhsScript script;
  const auto lines = split_lines(text);
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const std::size_t line_no = idx + 1;
    const auto line = trim(lines[idx]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::smatch m;
      const std::string s(line);
      if (std::regex_match(s, m, annotation_re())) record_annotation(script.annotations, m[1], m[2]);
      continue;
    }
    const auto [word, rest] = head_word(line);
    if (word == "Output") {
      script.output_path = unquote(rest, line_no);
    } else if (word == "Set") {
      const auto [key, value] = head_word(rest);
      if (key == "Theme" && !value.empty() && value.front() == '{') {
        // Multi-line JSON object: gather lines until the braces balance.
        std::string json(value);
        int depth = 0;
        auto count = [&depth](std::string_view piece) {
          for (char c : piece) depth += (c == '{') - (c == '}');
        };
        count(value);
        while (depth > 0 && idx + 1 < lines.size()) {
          ++idx;
          json.push_back('\n');
          json.append(lines[idx]);
          count(lines[idx]);
        }
        if (depth != 0) throw Error(ErrorCode::MalformedTheme, "unbalanced theme object", line_no);
        apply_setting(script, key, json, line_no);
      } else {
        apply_setting(script, key, value, line_no);
      }
    } else if (word == "Sleep") {
      script.commands.push_back(Command{CommandKind::Sleep, parse_duration_ms(rest, line_no)});
    } else if (word == "Hide" || word == "Show") {
      if (!rest.empty()) throw Error(ErrorCode::UnknownCommand, std::string(line), line_no);
      script.commands.push_back(Command{word == "Hide" ? CommandKind::Hide : CommandKind::Show});
    } else if (word == "Require") {
      Command c{CommandKind::Require};
      c.text = unquote(rest, line_no);
      script.commands.push_back(std::move(c));
    } else {
      const auto [name, speed] = split_speed(word, line_no);
      const auto lname = lower(name);
      if (name == "Type") {
        Command c{CommandKind::Type};
        c.text = unquote(rest, line_no);
        c.speed_ms = speed;
        script.commands.push_back(std::move(c));
      } else if (std::find(kVhsKeyNames.begin(), kVhsKeyNames.end(), name) != kVhsKeyNames.end()) {
        Command c{CommandKind::Key};
        c.text = std::string(name);
        c.speed_ms = speed;
        if (!rest.empty()) {
          int n = 0;
          const auto r = std::from_chars(rest.data(), rest.data() + rest.size(), n);
          if (r.ec != std::errc{} || r.ptr != rest.data() + rest.size() || n < 1)
            throw Error(ErrorCode::UnknownCommand, "bad repeat count: " + std::string(line), line_no);
          c.repeat = n;
        }
        script.commands.push_back(std::move(c));
      } else if ((lname.rfind("ctrl+", 0) == 0 || lname.rfind("alt+", 0) == 0 || lname.rfind("shift+", 0) == 0) &&
                 lname.back() != '+' && rest.empty()) {
        Command c{CommandKind::Chord};
        c.text = lname;
        c.speed_ms = speed;
        script.commands.push_back(std::move(c));
      } else {
        throw Error(ErrorCode::UnknownCommand, std::string(line), line_no);
      }
    }
  }
  validate(script);
  return script;
}

std::string script_to_text(const VhsScript& script) {
  std::ostringstream out;
  const auto& a = script.annotations;
  if (!a.id.empty()) out << "# ID: " << a.id << "\n";
  if (!a.instruction.empty()) out << "# INSTRUCTION: " << a.instruction << "\n";
  if (a.level) out << "# LEVEL: " << *a.level << "\n";
  if (a.events) out << "# EVENTS: " << *a.events << "\n";
  if (a.visual_complexity) out << "# VISUAL_COMPLEXITY: " << *a.visual_complexity << "\n";
  for (const auto& [k, v] : a.other) out << "# " << k << ": " << v << "\n";
  if (!script.output_path.empty()) out << "Output " << script.output_path << "\n";
  const auto& s = script.settings;
  auto real = [](double v) {
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
  };
  out << "Set Shell \"" << s.shell << "\"\n";
  out << "Set Theme " << theme_to_json(s.theme) << "\n";
  out << "Set FontSize " << s.font_size << "\n";
  out << "Set Width " << s.width << "\n";
  out << "Set Height " << s.height << "\n";
  out << "Set TypingSpeed " << s.typing_speed_ms << "ms\n";
  out << "Set PlaybackSpeed " << real(s.playback_speed) << "\n";
  out << "Set Margin " << s.margin << "\n";
  out << "Set MarginFill \"" << s.margin_fill << "\"\n";
  out << "Set BorderRadius " << s.border_radius << "\n";
  out << "Set Padding " << s.padding << "\n";
  out << "Set LineHeight " << real(s.line_height) << "\n";
  out << "Set LetterSpacing " << real(s.letter_spacing) << "\n";
  for (const auto& [k, v] : s.extra) out << "Set " << k << " " << v << "\n";
  for (const auto& c : script.commands) {
    const std::string speed = c.speed_ms ? "@" + std::to_string(*c.speed_ms) + "ms" : "";
    switch (c.kind) {
      case CommandKind::Sleep:
        out << "Sleep " << format_duration(c.duration_ms) << "\n";
        break;
      case CommandKind::Type: {
        const char q = c.text.find('"') == std::string::npos ? '"' : (c.text.find('`') == std::string::npos ? '`' : '\'');
        out << "Type" << speed << " " << q << c.text << q << "\n";
        break;
      }
      case CommandKind::Key:
        out << c.text << speed;
        if (c.repeat != 1) out << " " << c.repeat;
        out << "\n";
        break;
      case CommandKind::Chord:
        out << c.text << speed << "\n";
        break;
      case CommandKind::Hide:
        out << "Hide\n";
        break;
      case CommandKind::Show:
        out << "Show\n";
        break;
      case CommandKind::Require:
        out << "Require " << c.text << "\n";
        break;
    }
  }
  return out.str();
}

KeyTrace execute(const VhsScript& script) {
  KeyTrace trace;
  std::int64_t clock = 0;
  bool visible = true;
  for (const auto& c : script.commands) {
    const std::int64_t step = c.speed_ms.value_or(script.settings.typing_speed_ms);
    switch (c.kind) {
      case CommandKind::Sleep:
        clock += c.duration_ms;
        break;
      case CommandKind::Type:
        for (char32_t cp : utf8_decode(c.text)) {
          trace.events.push_back(TimedKeyEvent{clock, InputKind::Char, cp, {}, visible});
          clock += step;
        }
        break;
      case CommandKind::Key:
        for (int i = 0; i < c.repeat; ++i) {
          trace.events.push_back(TimedKeyEvent{clock, InputKind::Named, 0, c.text, visible});
          clock += step;
        }
        break;
      case CommandKind::Chord:
        trace.events.push_back(TimedKeyEvent{clock, InputKind::Chord, 0, c.text, visible});
        clock += step;
        break;
      case CommandKind::Hide:
        visible = false;
        break;
      case CommandKind::Show:
        visible = true;
        break;
      case CommandKind::Require:
        break;
    }
  }
  trace.duration_ms = clock;
  return trace;
}

std::string derive_caption(const VhsScript& script) {
  std::vector<std::string> parts;
  for (const auto& c : script.commands) {
    switch (c.kind) {
      case CommandKind::Type:
        parts.push_back("Type " + c.text);
        break;
      case CommandKind::Key:
        parts.push_back(c.repeat == 1 ? c.text : c.text + " " + std::to_string(c.repeat));
        break;
      case CommandKind::Chord: {
        // Rendered the way the DSL spells it: "Ctrl+C".
        std::string chord;
        bool cap = true;
        for (char ch : c.text) {
          chord.push_back(cap ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch))) : ch);
          cap = ch == '+';
        }
        parts.push_back(chord);
        break;
      }
      default:
        break;
    }
  }
  if (parts.empty()) return "";
  std::string caption;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) caption += "; ";
    caption += parts[i];
  }
  caption.push_back('.');
  return caption;
}

std::vector<VhsScript> filter_scripts(std::vector<VhsScript> scripts, const ScriptFilter& keep) {
  if (!keep) return scripts;
  scripts.erase(std::remove_if(scripts.begin(), scripts.end(), [&](const VhsScript& s) { return !keep(s); }),
                scripts.end());
  return scripts;
}

// ---- session simulation ---------------------------------------------------

namespace {

// Bytes a terminal sends for the key, as recorded in "i" events.
std::string key_input_bytes(const TimedKeyEvent& ev) {
  std::string out;
  switch (ev.kind) {
    case InputKind::Char:
      utf8_append(out, ev.ch);
      return out;
    case InputKind::Chord:
      if (ev.name.size() == 6 && ev.name.rfind("ctrl+", 0) == 0 && std::islower(static_cast<unsigned char>(ev.name[5])))
        return std::string(1, static_cast<char>(ev.name[5] & 0x1f));
      if (ev.name.size() == 5 && ev.name.rfind("alt+", 0) == 0) return "\x1b" + ev.name.substr(4);
      return out;
    case InputKind::Named:
      break;
  }
  static const std::map<std::string, std::string> kBytes = {
      {"Enter", "\r"},          {"Space", " "},           {"Tab", "\t"},          {"Backspace", "\x7f"},
      {"Escape", "\x1b"},       {"Delete", "\x1b[3~"},   {"Insert", "\x1b[2~"},  {"Up", "\x1b[A"},
      {"Down", "\x1b[B"},       {"Right", "\x1b[C"},     {"Left", "\x1b[D"},     {"PageUp", "\x1b[5~"},
      {"PageDown", "\x1b[6~"}};
  const auto it = kBytes.find(ev.name);
  return it == kBytes.end() ? out : it->second;
}

struct Session {
  const SessionOptions& opts;
  CastRecording rec;
  std::string line;  // current input line (UTF-8)
  bool in_repl = false;

  void emit(std::int64_t ms, std::string payload) {
    if (payload.empty()) return;
    const double t = static_cast<double>(ms) / 1000.0;
    if (!rec.events.empty() && rec.events.back().time == t && rec.events.back().kind == EventKind::Output) {
      rec.events.back().payload += payload;
    } else {
      rec.events.push_back(make_event(t, "o", std::move(payload)));
    }
  }

  void emit_input(std::int64_t ms, std::string payload) {
    if (payload.empty()) return;
    rec.events.push_back(make_event(static_cast<double>(ms) / 1000.0, "i", std::move(payload)));
  }

  std::string prompt() const { return in_repl ? opts.repl_prompt : opts.shell_prompt; }

  std::string submit() {
    const std::string cmd(trim(line));
    line.clear();
    std::string out = "\r\n";
    if (!in_repl) {
      if (cmd == "python" || cmd == "python3") {
        in_repl = true;
      } else if (cmd == "clear") {
        return "\x1b[H\x1b[2J" + prompt();
      }
    } else if (cmd == "exit()" || cmd == "quit()") {
      in_repl = false;
    } else if (!cmd.empty()) {
      if (const auto value = evaluate_arith(cmd)) out += *value + "\r\n";
    }
    return out + prompt();
  }

  std::string key(const TimedKeyEvent& ev) {
    if (ev.kind == InputKind::Char) {
      utf8_append(line, ev.ch);
      std::string s;
      utf8_append(s, ev.ch);
      return s;
    }
    if (ev.kind == InputKind::Chord) {
      if (ev.name == "ctrl+c") {
        line.clear();
        return "^C\r\n" + prompt();
      }
      if (ev.name == "ctrl+l") return "\x1b[H\x1b[2J" + prompt() + line;
      return {};
    }
    if (ev.name == "Enter") return submit();
    if (ev.name == "Space") {
      line.push_back(' ');
      return " ";
    }
    if (ev.name == "Tab") {
      line += "    ";
      return "    ";
    }
    if (ev.name == "Backspace") {
      if (line.empty()) return {};
      auto cps = utf8_decode(line);
      cps.pop_back();
      line = utf8_encode(cps);
      return "\b \b";
    }
    return {};  // cursor keys and the rest have no visible effect in the simulated shell
  }
};

}  // namespace

CastRecording simulate_session(const VhsScript& script, const SessionOptions& opts) {
  Session session{opts};
  auto& header = session.rec.header;
  const auto& s = script.settings;
  const double cell_w = std::max(1.0, s.font_size * 0.6 + s.letter_spacing);
  const double cell_h = std::max(1.0, s.font_size * s.line_height);
  header.width = opts.cols > 0 ? opts.cols : std::max(1, static_cast<int>((s.width - 2 * s.padding) / cell_w));
  header.height = opts.rows > 0 ? opts.rows : std::max(1, static_cast<int>((s.height - 2 * s.padding) / cell_h));
  header.env = std::map<std::string, std::string>{{"SHELL", "/bin/" + s.shell}, {"TERM", "xterm-256color"}};

  const KeyTrace trace = execute(script);
  session.emit(0, session.prompt());
  for (const auto& ev : trace.events) {
    if (ev.visible) session.emit_input(ev.time_ms, key_input_bytes(ev));
    session.emit(ev.time_ms, session.key(ev));
  }
  // Closing no-op event so the recording spans the full logical duration.
  const double end = static_cast<double>(trace.duration_ms) / 1000.0;
  if (session.rec.events.empty() || session.rec.events.back().time < end)
    session.rec.events.push_back(make_event(end, "o", ""));
  return session.rec;
}

// ---- arithmetic probes -----------------------------------------------------

namespace {

using i128 = __int128;

struct ArithParser {
  std::string_view s;
  std::size_t pos = 0;
  bool ok = true;

  static constexpr i128 kLimit = static_cast<i128>(1) << 120;

  bool check(i128 v) {
    if (v > kLimit || v < -kLimit) ok = false;
    return ok;
  }

  std::optional<i128> literal() {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return std::nullopt;
    i128 v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos++] - '0');
      if (!check(v)) return std::nullopt;
    }
    return v;
  }

  static i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }

  std::optional<i128> term() {
    auto lhs = literal();
    if (!lhs) return std::nullopt;
    i128 acc = *lhs;
    while (pos < s.size()) {
      int op;
      if (s.substr(pos, 2) == "//") {
        op = 1;
        pos += 2;
      } else if (s[pos] == '*') {
        op = 0;
        ++pos;
      } else if (s[pos] == '%') {
        op = 2;
        ++pos;
      } else {
        break;
      }
      auto rhs = literal();
      if (!rhs) return std::nullopt;
      if (op == 0) {
        acc *= *rhs;
      } else if (*rhs == 0) {
        return std::nullopt;
      } else if (op == 1) {
        acc = floor_div(acc, *rhs);
      } else {
        acc = acc - floor_div(acc, *rhs) * *rhs;
      }
      if (!check(acc)) return std::nullopt;
    }
    return acc;
  }

  std::optional<i128> expr() {
    auto lhs = term();
    if (!lhs) return std::nullopt;
    i128 acc = *lhs;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      const char op = s[pos++];
      auto rhs = term();
      if (!rhs) return std::nullopt;
      acc = op == '+' ? acc + *rhs : acc - *rhs;
      if (!check(acc)) return std::nullopt;
    }
    return acc;
  }
};

std::string to_decimal(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string digits;
  while (v != 0) {
    const int d = static_cast<int>(v % 10);
    digits.push_back(static_cast<char>('0' + (neg ? -d : d)));
    v /= 10;
  }
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

VhsScript probe_script(const std::string& id, const std::string& expression) {
  VhsScript script;
  script.output_path = id + ".mp4";
  script.annotations.id = id;
  script.annotations.instruction = "Evaluate an integer arithmetic expression in the Python REPL.";
  auto type = [](std::string text) {
    Command c{CommandKind::Type};
    c.text = std::move(text);
    return c;
  };
  auto key = [](std::string name) {
    Command c{CommandKind::Key};
    c.text = std::move(name);
    return c;
  };
  auto sleep = [](std::int64_t ms) { return Command{CommandKind::Sleep, ms}; };
  script.commands = {type("python3"), key("Enter"), sleep(500), type(expression), key("Enter"),
                     sleep(1000),     type("exit()"), key("Enter"), sleep(500)};
  return script;
}

}  // namespace

std::optional<std::string> evaluate_arith(std::string_view expression) {
  ArithParser p{expression};
  const auto v = p.expr();
  if (!v || !p.ok || p.pos != expression.size()) return std::nullopt;
  return to_decimal(*v);
}

std::vector<ArithProbe> gen_arith_probe(std::uint64_t seed, std::size_t n) {
  static constexpr const char* kOps[] = {"+", "-", "*", "//", "%"};
  static constexpr std::uint64_t kMaxLiteral = 1000000;
  SeededRng rng(seed);
  std::set<std::string> seen;
  std::vector<ArithProbe> probes;
  probes.reserve(n);
  while (probes.size() < n) {
    const std::size_t n_ops = 1 + rng.below(2);
    std::string expr = std::to_string(rng.below(kMaxLiteral + 1));
    for (std::size_t k = 0; k < n_ops; ++k) {
      const std::string op = kOps[rng.below(5)];
      std::uint64_t lit = rng.below(kMaxLiteral + 1);
      // The right operand of // and % is always a bare literal in this
      // grammar, so keeping it non-zero rules out division by zero.
      if ((op == "//" || op == "%") && lit == 0) lit = 1 + rng.below(kMaxLiteral);
      expr += op + std::to_string(lit);
    }
    if (!seen.insert(expr).second) continue;
    ArithProbe probe;
    char id[64];
    std::snprintf(id, sizeof id, "probe_%llu_%04zu", static_cast<unsigned long long>(seed), probes.size());
    probe.id = id;
    probe.expression = expr;
    probe.expected_answer = *evaluate_arith(expr);
    probe.seed = seed;
    probe.script = probe_script(probe.id, expr);
    probes.push_back(std::move(probe));
  }
  return probes;
}

bool score_probe(std::string_view expected, const std::vector<std::string>& generated_lines) {
  const std::string want = normalize_line(expected);
  return std::any_of(generated_lines.begin(), generated_lines.end(),
                     [&](const std::string& line) { return normalize_line(line) == want; });
}

}  // namespace ncf
