#include "poems/emit.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "poems/config.hpp"
#include "poems/errors.hpp"

namespace poems {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::logic_error("row width does not match the column count");
    rows.push_back(std::move(row));
}

Format parse_format(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw UsageError("unknown format '" + name + "' (expected csv or json)");
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (std::isnan(v)) return "nan";
                if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
                return format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return csv_field(v);
            }
        },
        c);
}

std::string json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return "null";
                return format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return nlohmann::json(v).dump();
            }
        },
        c);
}

}  // namespace

void write_table(const Table& t, Format f, std::ostream& out) {
    if (f == Format::csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out << (i ? "," : "") << csv_field(t.columns[i]);
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
            out << '\n';
        }
        return;
    }
    out << '[';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << (r ? ",\n " : "\n ") << '{';
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump() << ": "
                << json_cell(t.rows[r][i]);
        }
        out << '}';
    }
    out << (t.rows.empty() ? "]\n" : "\n]\n");
}

std::string render_table(const Table& t, Format f) {
    std::ostringstream os;
    write_table(t, f, os);
    return os.str();
}

void emit(const Table& t, Format f, const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        write_table(t, f, fallback);
        if (!fallback) throw IoError("failed writing output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    write_table(t, f, out);
    out.flush();
    if (!out) throw IoError("failed writing output file '" + path + "'");
}

Table parse_json_table(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("invalid JSON table: ") + e.what());
    }
    if (!doc.is_array()) throw IoError("JSON table must be an array of objects");
    Table t;
    for (const auto& obj : doc) {
        if (!obj.is_object()) throw IoError("JSON table rows must be objects");
        if (t.columns.empty() && t.rows.empty())
            for (const auto& [k, _] : obj.items()) t.columns.push_back(k);
        std::vector<Cell> row;
        std::size_t i = 0;
        for (const auto& [k, v] : obj.items()) {
            if (i >= t.columns.size() || k != t.columns[i])
                throw IoError("JSON table rows must share the same keys in the same order");
            if (v.is_null())
                row.emplace_back(std::nan(""));
            else if (v.is_boolean())
                row.emplace_back(v.get<bool>());
            else if (v.is_number_integer())
                row.emplace_back(v.get<std::int64_t>());
            else if (v.is_number())
                row.emplace_back(v.get<double>());
            else if (v.is_string())
                row.emplace_back(v.get<std::string>());
            else
                throw IoError("unsupported JSON value in table");
            ++i;
        }
        if (i != t.columns.size()) throw IoError("JSON table row has missing keys");
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace poems
