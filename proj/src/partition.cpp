#include "aspectra/partition.hpp"

#include <unordered_set>

#include "aspectra/error.hpp"

namespace aspectra {

void validate_partition(const AspectPartition& partition, std::size_t p) {
    std::vector<int> owner(p, -1);
    std::unordered_set<std::string_view> names;
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
        const auto& group = partition.groups[g];
        if (group.members.empty()) throw Error(Errc::EmptyGroup, group.name);
        if (!names.insert(group.name).second) {
            throw Error(Errc::InvalidArgument, "duplicate group name '" + group.name + "'");
        }
        for (std::size_t j : group.members) {
            if (j >= p) {
                throw Error(Errc::BadIndex, "group '" + group.name + "' references column " +
                                                std::to_string(j) + " but p = " + std::to_string(p));
            }
            if (owner[j] != -1) {
                const auto& other = partition.groups[static_cast<std::size_t>(owner[j])].name;
                throw Error(Errc::OverlappingGroups, "column " + std::to_string(j) + " is in both '" + other +
                                                         "' and '" + group.name + "'");
            }
            owner[j] = static_cast<int>(g);
        }
    }
    std::string missing;
    for (std::size_t j = 0; j < p; ++j) {
        if (owner[j] == -1) {
            if (!missing.empty()) missing += ",";
            missing += std::to_string(j);
        }
    }
    if (!missing.empty()) throw Error(Errc::NotCovering, "uncovered columns {" + missing + "}");
}

AspectPartition singleton_partition(const std::vector<std::string>& column_names) {
    AspectPartition out;
    out.groups.reserve(column_names.size());
    for (std::size_t j = 0; j < column_names.size(); ++j) out.groups.push_back({column_names[j], {j}});
    return out;
}

std::vector<std::size_t> group_of_column(const AspectPartition& partition, std::size_t p) {
    validate_partition(partition, p);
    std::vector<std::size_t> out(p);
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
        for (std::size_t j : partition.groups[g].members) out[j] = g;
    }
    return out;
}

std::string auto_group_name(const std::vector<std::string>& column_names,
                            const std::vector<std::size_t>& members) {
    constexpr std::size_t kMaxLength = 40;
    std::string name;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (k) name.push_back('_');
        name += column_names.at(members[k]);
        if (name.size() >= kMaxLength) break;
    }
    if (name.size() > kMaxLength) name.resize(kMaxLength);
    return name;
}

}  // namespace aspectra
