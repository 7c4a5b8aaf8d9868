#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace artforge {

// Base-10, no padding.
void append_u64(std::string& out, std::uint64_t v);

// Shortest representation that round-trips exactly; used for every floating
// point value written to CSV or report files so reruns are byte-identical.
void append_double(std::string& out, double v);
std::string format_double(double v);

std::string read_file(const std::string& path);

// Writes to <path>.tmp then renames, so a crashed run never leaves a
// truncated artifact behind.
void write_file(const std::string& path, std::string_view contents);

std::string sha256_hex(std::string_view bytes);

}  // namespace artforge
