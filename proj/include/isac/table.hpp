#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace isac {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Column-ordered result table with free-form metadata for JSON output.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    void add_row(std::vector<Cell> row);
};

/// Doubles use 12 significant digits; booleans are written as 1/0.
std::string format_cell(const Cell& c);
void write_csv(const Table& t, std::ostream& os);
void write_json(const Table& t, std::ostream& os);

}  // namespace isac
