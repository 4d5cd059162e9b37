#pragma once

#include <string>
#include <vector>

namespace wqed {

/// Tabular output with a schema tag. Cells are preformatted strings; numeric
/// cells must be written with format_float for cross-platform stability.
struct Table {
    std::string schema;   // "<name>/<version>"
    std::vector<std::pair<std::string, std::string>> provenance;  // header comments
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool truncated = false;  // cancelled mid-sweep; rows are a prefix
};

/// 17 significant digits, '.' decimal, locale-independent.
std::string format_float(double v);

/// First line "# schema=<name>/<version>", second line the column header,
/// then "# key=value" provenance comments, then RFC-4180 rows.
std::string to_csv(const Table& t);

std::string to_json(const Table& t);

}  // namespace wqed
