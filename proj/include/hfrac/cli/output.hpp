#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace hfrac::cli {

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Column {
    std::string name;
    std::string unit;   // "1" for dimensionless
};

struct Table {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("row width mismatch in table " + name);
        rows.push_back(std::move(row));
    }
};

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

inline std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "";
}

inline json cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        if (std::isfinite(v)) return v;
        return format_number(v);
    }
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

inline std::string header_line(const RunConfig& cfg) {
    return "# config_hash=" + cfg.hash_hex() + " command=" + cfg.command;
}

// <name>.csv: a comment line with the config hash, a comment line with the
// units, the column header, then rows. <name>.json mirrors it.
inline void write_table(const RunConfig& cfg, const Table& t) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const fs::path base = fs::path(cfg.out_dir) / t.name;
    {
        std::ofstream out(base.string() + ".csv", std::ios::binary);
        if (!out) throw DomainError("config", "cannot write to output directory '" + cfg.out_dir + "'");
        out << header_line(cfg) << "\r\n# units=";
        for (std::size_t k = 0; k < t.columns.size(); ++k)
            out << (k ? ";" : "") << t.columns[k].name << '[' << t.columns[k].unit << ']';
        out << "\r\n";
        for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << csv_field(t.columns[k].name);
        out << "\r\n";
        for (const auto& row : t.rows) {
            for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_field(cell_text(row[k]));
            out << "\r\n";
        }
    }
    json j;
    j["config_hash"] = cfg.hash_hex();
    j["command"] = cfg.command;
    j["table"] = t.name;
    j["columns"] = json::array();
    for (const auto& c : t.columns) j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    j["rows"] = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        j["rows"].push_back(std::move(r));
    }
    std::ofstream out(base.string() + ".json", std::ios::binary);
    if (!out) throw DomainError("config", "cannot write to output directory '" + cfg.out_dir + "'");
    out << j.dump(1) << "\n";
}

} // namespace hfrac::cli
