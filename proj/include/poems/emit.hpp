#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace poems {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

enum class Format { csv, json };

Format parse_format(const std::string& name);

// CSV: header row plus one line per row. JSON: array of objects whose keys
// follow the column order. Doubles use 17 significant digits; non-finite
// doubles become `inf`/`nan` in CSV and null in JSON.
void write_table(const Table& t, Format f, std::ostream& out);
std::string render_table(const Table& t, Format f);

// Writes to `path`, or to `fallback` when path is empty or "-". Throws IoError.
void emit(const Table& t, Format f, const std::string& path, std::ostream& fallback);

// Inverse of the JSON rendering; numbers without fraction or exponent are integers.
Table parse_json_table(const std::string& text);

}  // namespace poems
