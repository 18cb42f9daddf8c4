// Result tables and deterministic serialization. Floats are written with 17
// significant digits so every value round-trips exactly, and nothing
// time- or host-dependent enters the output: identical configs produce
// byte-identical files.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace jcloss {

inline constexpr const char* kVersion = "0.1.0";

struct Table {
    // Echoed configuration, in insertion order, rendered as "# key: value".
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // Trailing scalar summaries, rendered as "# key: value" after the data.
    std::vector<std::pair<std::string, double>> summary;
};

// Shortest 17-significant-digit decimal form ("%.17g").
std::string format_double(double value);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

// Writes via a temp file in the same directory plus rename, so a crash never
// leaves a partial file at the destination.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace jcloss
