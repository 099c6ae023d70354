#include "aspectra/table.hpp"

#include <cmath>
#include <unordered_set>

#include "aspectra/error.hpp"

namespace aspectra {

NumericTable::NumericTable(std::vector<std::string> column_names, std::vector<double> row_major_values)
    : names_(std::move(column_names)), values_(std::move(row_major_values)) {
    if (names_.empty() || values_.empty()) {
        throw Error(Errc::EmptyTable, "table needs at least one row and one column");
    }
    if (values_.size() % names_.size() != 0) {
        throw Error(Errc::LengthMismatch, "value count " + std::to_string(values_.size()) +
                                              " is not a multiple of column count " +
                                              std::to_string(names_.size()));
    }
    rows_ = values_.size() / names_.size();

    std::unordered_set<std::string_view> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) throw Error(Errc::DuplicateColumn, name);
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw Error(Errc::NonNumericCell, "non-finite value at row " + std::to_string(k / cols()) +
                                                  ", column '" + names_[k % cols()] + "'");
        }
    }
}

std::vector<double> NumericTable::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
}

std::size_t NumericTable::find_column(std::string_view name) const noexcept {
    for (std::size_t j = 0; j < names_.size(); ++j) {
        if (names_[j] == name) return j;
    }
    return names_.size();
}

NumericTable NumericTable::select_rows(std::span<const std::size_t> row_ids) const {
    std::vector<double> out;
    out.reserve(row_ids.size() * cols());
    for (std::size_t id : row_ids) {
        if (id >= rows_) throw Error(Errc::BadIndex, "row " + std::to_string(id) + " out of range");
        auto r = row(id);
        out.insert(out.end(), r.begin(), r.end());
    }
    return NumericTable(names_, std::move(out));
}

Observation::Observation(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j])) {
            throw Error(Errc::NonNumericCell, "observation value " + std::to_string(j) + " is not finite");
        }
    }
}

Observation Observation::from_row(const NumericTable& table, std::size_t row) {
    if (row >= table.rows()) {
        throw Error(Errc::BadIndex, "row " + std::to_string(row) + " out of range (n = " +
                                        std::to_string(table.rows()) + ")");
    }
    auto r = table.row(row);
    return Observation(std::vector<double>(r.begin(), r.end()));
}

}  // namespace aspectra
