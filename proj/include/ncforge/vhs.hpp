#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncforge/cast_io.hpp"
#include "ncforge/theme.hpp"

namespace ncf {

struct VhsSettings {
  std::string shell = "bash";
  Theme theme;
  int font_size = 22;
  int width = 1200;
  int height = 600;
  std::int64_t typing_speed_ms = 50;
  double playback_speed = 1.0;
  int margin = 0;
  std::string margin_fill = "#000000";
  int border_radius = 0;
  int padding = 60;
  double line_height = 1.0;
  double letter_spacing = 0.0;
  // `Set` keys outside the list above, kept verbatim.
  std::map<std::string, std::string> extra;

  bool operator==(const VhsSettings&) const = default;
};

struct VhsAnnotations {
  std::string id;
  std::string instruction;
  std::optional<int> level;
  std::optional<int> events;
  std::optional<int> visual_complexity;
  std::map<std::string, std::string> other;  // any further `# KEY: value` comment

  bool operator==(const VhsAnnotations&) const = default;
};

enum class CommandKind { Sleep, Type, Key, Chord, Hide, Show, Require };

// Named keys accepted by the DSL.
extern const std::vector<std::string> kVhsKeyNames;

struct Command {
  CommandKind kind = CommandKind::Sleep;
  std::int64_t duration_ms = 0;           // Sleep
  std::string text;                       // Type text, key name, chord ("ctrl+c"), Require target
  std::optional<std::int64_t> speed_ms;   // per-command `@<time>` override
  int repeat = 1;                         // Key

  bool operator==(const Command&) const = default;
};

struct VhsScript {
  std::string output_path;
  VhsSettings settings;
  std::vector<Command> commands;
  VhsAnnotations annotations;

  bool operator==(const VhsScript&) const = default;
};

// Throws UnknownCommand(line), MalformedTheme(line), MalformedDuration(line),
// or InvalidConfig when a setting breaks its invariant.
VhsScript parse_script(std::string_view text);

// Regenerates DSL text that parses back to an equal script.
std::string script_to_text(const VhsScript& script);

// "800ms", "1s", "1.5s", "2" (seconds). Throws MalformedDuration.
std::int64_t parse_duration_ms(std::string_view text, std::size_t line = 0);

enum class InputKind { Char, Named, Chord };

struct TimedKeyEvent {
  std::int64_t time_ms = 0;
  InputKind kind = InputKind::Char;
  char32_t ch = 0;   // Char
  std::string name;  // Named key or chord ("ctrl+c")
  bool visible = true;

  bool operator==(const TimedKeyEvent&) const = default;
};

struct KeyTrace {
  std::vector<TimedKeyEvent> events;
  std::int64_t duration_ms = 0;  // logical clock after the last command
};

// Logical clock from 0: Sleep advances by its duration; every emitted key is
// followed by the typing delay (the command's `@` override, else TypingSpeed).
KeyTrace execute(const VhsScript& script);

// User-visible commands joined by "; " and closed with '.'; empty script -> "".
std::string derive_caption(const VhsScript& script);

using ScriptFilter = std::function<bool(const VhsScript&)>;
std::vector<VhsScript> filter_scripts(std::vector<VhsScript> scripts, const ScriptFilter& keep);

// Simulated terminal session for a script: typed keys are echoed after a
// prompt, Enter starts a new prompt, and a `python`/`python3` line switches
// to a REPL that prints results of integer arithmetic expressions. No process
// is spawned; the result replays through the ordinary cast pipeline.
struct SessionOptions {
  int cols = 0;  // 0 derives the geometry from the script's pixel settings
  int rows = 0;
  std::string shell_prompt = "$ ";
  std::string repl_prompt = ">>> ";
};

CastRecording simulate_session(const VhsScript& script, const SessionOptions& opts = {});

// ---- arithmetic probes --------------------------------------------------

struct ArithProbe {
  std::string id;
  std::string expression;
  std::string expected_answer;
  std::uint64_t seed = 0;
  VhsScript script;
};

// Exact evaluation of the probe grammar: non-negative integer literals,
// + - * // % with Python precedence and floor semantics. nullopt on syntax
// errors, division by zero or overflow of the 128-bit accumulator.
std::optional<std::string> evaluate_arith(std::string_view expression);

// `n` distinct probes over literals in [0, 10^6] with one or two operators.
std::vector<ArithProbe> gen_arith_probe(std::uint64_t seed, std::size_t n);

// True iff some generated line, normalized, equals the expected answer.
bool score_probe(std::string_view expected, const std::vector<std::string>& generated_lines);

}  // namespace ncf
