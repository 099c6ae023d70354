#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace aspectra {

/// Immutable n x p table of finite reals with unique column names.
///
/// Values are stored row-major. Construction validates every invariant, so
/// holding a NumericTable means the data is already clean.
class NumericTable {
public:
    NumericTable(std::vector<std::string> column_names, std::vector<double> row_major_values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return names_.size(); }

    const std::vector<std::string>& column_names() const noexcept { return names_; }
    const std::string& column_name(std::size_t j) const { return names_.at(j); }

    double at(std::size_t i, std::size_t j) const noexcept { return values_[i * cols() + j]; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols(), cols()};
    }
    std::vector<double> column(std::size_t j) const;
    std::span<const double> values() const noexcept { return values_; }

    /// Index of a named column, or cols() when absent.
    std::size_t find_column(std::string_view name) const noexcept;

    /// New table holding the given rows (in order, repeats allowed).
    NumericTable select_rows(std::span<const std::size_t> row_ids) const;

    bool operator==(const NumericTable&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<double> values_;
    std::size_t rows_ = 0;
};

/// A single row aligned to some table's columns.
class Observation {
public:
    explicit Observation(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }

    static Observation from_row(const NumericTable& table, std::size_t row);

private:
    std::vector<double> values_;
};

}  // namespace aspectra
