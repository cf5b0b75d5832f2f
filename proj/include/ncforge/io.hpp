#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ncf {

// Whole-file helpers; failures throw Error(Io).
std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

// Regular files directly under `dir` with the given extension, sorted by name.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir, std::string_view extension);

}  // namespace ncf
