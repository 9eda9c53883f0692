#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace triwalk::cli {

inline constexpr int kCsvDigits = 12;

/// Locale-independent general-format rendering with `kCsvDigits` significant digits.
std::string format_real(double value);

/// Writes `content` to `path` through a temporary sibling and a rename, so a
/// failed run never leaves a partial file. Without a path, writes to stdout.
void write_output(const std::string& content, const std::optional<std::filesystem::path>& path);

}  // namespace triwalk::cli
