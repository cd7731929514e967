#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace metacovert::sweep {

using Cell = std::variant<double, std::string>;

struct Metadata {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
};

/// Tabular series; column 0 is the independent variable.
struct SweepResult {
    std::string independent;  // e.g. "B_hz"
    std::string unit;         // e.g. "Hz"
    std::vector<std::string> columns;  // includes the independent column first
    std::vector<std::vector<Cell>> rows;
    Metadata metadata;

    void add_row(std::vector<Cell> row);
    /// Throws std::logic_error unless x strictly increases and every row has columns.size() cells.
    void validate() const;
};

/// Shortest decimal that round-trips; no locale, '.' decimal point.
std::string format_number(double v);

/// RFC-4180 CSV with '\n' line endings: a '#' metadata line, one header row, then data.
std::string to_csv(const SweepResult& result);
void write_csv(const std::filesystem::path& path, const SweepResult& result);

/// Pretty-printed JSON followed by a newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace metacovert::sweep
