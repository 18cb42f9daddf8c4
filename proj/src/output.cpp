#include "jcloss/output.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace jcloss {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (const auto& [key, value] : table.header) {
        out += "# " + key + ": " + value + "\n";
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("to_csv: row width does not match column count");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    for (const auto& [key, value] : table.summary) {
        out += "# " + key + ": " + format_double(value) + "\n";
    }
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::ordered_json doc;
    auto& header = doc["header"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.header) header[key] = value;
    doc["columns"] = table.columns;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("to_json: row width does not match column count");
        rows.push_back(row);
    }
    auto& summary = doc["summary"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.summary) summary[key] = value;
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace jcloss
