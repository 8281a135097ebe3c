#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace relwords {

// Writes to "<path>.tmp" in the same directory, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

// Quotes the field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

std::string sha256_hex(std::string_view data);

}  // namespace relwords
