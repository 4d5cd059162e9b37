#include "wqed/csv.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace wqed {

std::string format_float(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string escape_cell(const std::string& cell) {
    bool needs_quotes = cell.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out = "# schema=" + t.schema + "\n";
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out += ',';
        out += escape_cell(t.columns[j]);
    }
    out += '\n';
    for (const auto& [key, value] : t.provenance)
        out += "# " + key + "=" + value + "\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += escape_cell(row[j]);
        }
        out += '\n';
    }
    if (t.truncated) out += "# truncated=true\n";
    return out;
}

std::string to_json(const Table& t) {
    nlohmann::json j;
    j["schema"] = t.schema;
    for (const auto& [key, value] : t.provenance) j["provenance"][key] = value;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) j["rows"].push_back(row);
    j["truncated"] = t.truncated;
    return j.dump(2) + "\n";
}

}  // namespace wqed
