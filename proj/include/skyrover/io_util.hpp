#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace skyrover {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Strict: the whole token must be consumed. Throws ParseError.
double parse_double(std::string_view token);
long long parse_int(std::string_view token);
std::uint64_t parse_uint(std::string_view token);

}  // namespace skyrover
