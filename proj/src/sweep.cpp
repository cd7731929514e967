#include "metacovert/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace metacovert::sweep {
namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string render(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    return quote(std::get<std::string>(cell));
}

}  // namespace

void SweepResult::add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }

void SweepResult::validate() const {
    if (columns.empty()) throw std::logic_error("SweepResult: no columns");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != columns.size()) throw std::logic_error("SweepResult: ragged row " + std::to_string(i));
        const auto* x = std::get_if<double>(&rows[i][0]);
        if (!x) throw std::logic_error("SweepResult: non-numeric independent value");
        if (i > 0 && !(*x > std::get<double>(rows[i - 1][0]))) {
            throw std::logic_error("SweepResult: independent column not strictly increasing at row " +
                                   std::to_string(i));
        }
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const SweepResult& result) {
    result.validate();
    std::string out = "# config_hash=" + result.metadata.config_hash +
                      " seed=" + std::to_string(result.metadata.seed) + " version=" + result.metadata.version +
                      " independent=" + result.independent + " unit=" + result.unit + "\n";
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (c) out += ',';
        out += quote(result.columns[c]);
    }
    out += '\n';
    for (const auto& row : result.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += render(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_csv(const std::filesystem::path& path, const SweepResult& result) { write_text(path, to_csv(result)); }

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) { write_text(path, doc.dump(2) + "\n"); }

}  // namespace metacovert::sweep
