#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aspectra/table.hpp"

namespace aspectra {

struct LoadedTable {
    NumericTable table;
    std::optional<std::vector<double>> target;
};

/// Reads comma-separated text with a header row. Every cell must parse as a
/// finite real; quoted fields are accepted. When `target` names a column it
/// is removed from the table and returned separately.
LoadedTable load_table(const std::filesystem::path& path,
                       const std::optional<std::string>& target = std::nullopt);

LoadedTable parse_table(const std::string& text,
                        const std::optional<std::string>& target = std::nullopt);

/// Writes the same dialect with 17 significant digits.
void save_table(const std::filesystem::path& path, const NumericTable& table);
std::string format_table(const NumericTable& table);

/// Shortest-exact decimal text for a double, "%.17g".
std::string format_double17(double v);

}  // namespace aspectra
