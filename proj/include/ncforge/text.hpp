#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ncf {

// Decodes UTF-8; invalid or truncated sequences decode to U+FFFD one byte at a time.
std::u32string utf8_decode(std::string_view bytes);
void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(std::u32string_view cps);

// Line normalization used by every text-space comparison: strip leading and
// trailing whitespace, collapse internal whitespace runs to a single space.
// Case and punctuation are untouched.
std::string normalize_line(std::string_view line);

// Splits on '\n', normalizes each line and drops the empty ones.
std::vector<std::string> normalize_text(std::string_view text);

std::string join_lines(const std::vector<std::string>& lines);

}  // namespace ncf
