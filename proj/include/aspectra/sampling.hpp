#pragma once

#include <cstddef>
#include <vector>

#include "aspectra/rng.hpp"
#include "aspectra/table.hpp"

namespace aspectra {

/// Draws `count` row ids uniformly with replacement from [0, n).
std::vector<std::size_t> sample_row_ids(std::size_t n, std::size_t count, RngStream& rng);

/// Draws `count` distinct row ids from [0, n), returned in ascending order.
std::vector<std::size_t> subsample_row_ids(std::size_t n, std::size_t count, RngStream& rng);

/// `count` rows sampled with replacement. Depends only on (table, count, rng).
NumericTable sample_rows(const NumericTable& table, std::size_t count, RngStream rng);

}  // namespace aspectra
