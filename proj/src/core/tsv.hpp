#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lexfreq::tsv {

std::vector<std::string> split(std::string_view line, char sep = '\t');
std::string join(const std::vector<std::string>& fields, char sep = '\t');

/// Reads a whole file; throws Error(io) when it cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string> lines(std::string_view content);

/// Rejects tab and newline characters, which the TSV formats cannot carry.
void require_plain_field(std::string_view value, std::string_view what);

std::string format_fixed(double value, int decimals);
std::string format_real(double value);

}  // namespace lexfreq::tsv
