#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "aspectra/aspect_importance.hpp"
#include "aspectra/clustering.hpp"
#include "aspectra/global_importance.hpp"
#include "aspectra/partition.hpp"
#include "aspectra/triplot.hpp"

namespace aspectra {

using Json = nlohmann::ordered_json;

/// Pretty-printed JSON with a trailing newline.
std::string dump_json(const Json& doc);
Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);

/// Aspect-partition documents map group name -> array of column names.
Json partition_to_json(const AspectPartition& partition, const std::vector<std::string>& column_names);
AspectPartition partition_from_json(const Json& doc, const std::vector<std::string>& column_names);
std::string partition_to_tsv(const AspectPartition& partition, const std::vector<std::string>& column_names);

/// Array of {left, right, height, members}. Node ids and member column
/// indices are 1-based (leaves 1..p, merge t creates node p + t); heights are
/// rounded to 12 significant digits.
Json tree_to_json(const MergeTree& tree);
MergeTree tree_from_json(const Json& doc, std::size_t leaves);

/// Rounds to 12 significant digits.
double round12(double v);

Json to_json(const GlobalImportance& result);
std::string to_tsv(const GlobalImportance& result);

Json to_json(const AspectExplanation& result);
std::string to_tsv(const AspectExplanation& result);
AspectExplanation explanation_from_json(const Json& doc);

Json to_json(const TriplotResult& result);
std::string to_tsv(const TriplotResult& result);
TriplotResult triplot_from_json(const Json& doc);

}  // namespace aspectra
