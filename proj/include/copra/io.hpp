#pragma once

#include <string>
#include <vector>

namespace copra {

// Doubles are always serialized with "%.17g": enough digits to round-trip,
// and a fixed choice so emitted files are byte-stable across runs.
std::string format_double(double x);

// Quotes a CSV field only when it needs quoting (comma, quote, newline).
std::string csv_field(const std::string& s);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

double parse_double(const std::string& s, const std::string& what);
unsigned long long parse_uint(const std::string& s, const std::string& what);

// Reads a whole file; throws std::runtime_error with the path on failure.
std::string read_file(const std::string& path);
// Writes (truncates) a whole file; throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace copra
