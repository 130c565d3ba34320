#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace memoria {

/// Whole-file read. Throws Error if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Appends `line` plus '\n' and flushes before returning.
void append_line(const std::filesystem::path& path, std::string_view line);

} // namespace memoria
