#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aspectra/table.hpp"

namespace aspectra {

struct Aspect {
    std::string name;
    std::vector<std::size_t> members;  // 0-based column indices

    bool operator==(const Aspect&) const = default;
};

/// Named groups of column indices. Validity against a column count is checked
/// separately by validate_partition, because the same groups may be built
/// before the table is known (e.g. from a JSON file).
struct AspectPartition {
    std::vector<Aspect> groups;

    std::size_t size() const noexcept { return groups.size(); }
    bool operator==(const AspectPartition&) const = default;
};

/// Throws Error{OverlappingGroups | NotCovering | EmptyGroup | BadIndex | InvalidArgument}.
void validate_partition(const AspectPartition& partition, std::size_t p);

/// One group per column, named after the column.
AspectPartition singleton_partition(const std::vector<std::string>& column_names);

/// For each column, the index of the group containing it.
std::vector<std::size_t> group_of_column(const AspectPartition& partition, std::size_t p);

/// Joins member names with '_' and truncates to 40 characters.
std::string auto_group_name(const std::vector<std::string>& column_names,
                            const std::vector<std::size_t>& members);

}  // namespace aspectra
