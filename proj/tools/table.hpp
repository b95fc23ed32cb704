#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace qdx::cli {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Fixed-order columns, one row per lattice index. CSV mode prints a
/// header row and 17-digit floats; JSON mode wraps the same data as
/// {"columns": [...], "rows": [[...]]}.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<double> row) { rows_.push_back(std::move(row)); }

    void emit_csv(std::ostream& out) const {
        for (std::size_t c = 0; c < columns_.size(); ++c)
            out << (c ? "," : "") << columns_[c];
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << format_float(row[c]);
            out << '\n';
        }
    }

    void emit_json(std::ostream& out) const {
        nlohmann::json j;
        j["columns"] = columns_;
        auto& rows = j["rows"];
        rows = nlohmann::json::array();
        for (const auto& row : rows_) {
            nlohmann::json r = nlohmann::json::array();
            for (double v : row) {
                if (std::isnan(v))
                    r.push_back(nullptr); // JSON has no NaN
                else
                    r.push_back(v);
            }
            rows.push_back(std::move(r));
        }
        out << j.dump(2) << '\n';
    }

    void emit(const std::string& format, std::ostream& out) const {
        if (format == "json")
            emit_json(out);
        else
            emit_csv(out);
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

} // namespace qdx::cli
