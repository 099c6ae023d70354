#include "aspectra/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "aspectra/error.hpp"

namespace aspectra {

std::vector<std::size_t> sample_row_ids(std::size_t n, std::size_t count, RngStream& rng) {
    if (n == 0) throw Error(Errc::EmptyTable, "cannot sample from an empty table");
    if (count == 0) throw Error(Errc::InvalidArgument, "sample size must be at least 1");
    std::vector<std::size_t> ids(count);
    for (auto& id : ids) id = static_cast<std::size_t>(rng.uniform_index(n));
    return ids;
}

std::vector<std::size_t> subsample_row_ids(std::size_t n, std::size_t count, RngStream& rng) {
    if (count > n) {
        throw Error(Errc::InvalidArgument, "subsample of " + std::to_string(count) + " rows from " +
                                               std::to_string(n));
    }
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `count` slots end up a uniform draw.
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

NumericTable sample_rows(const NumericTable& table, std::size_t count, RngStream rng) {
    const auto ids = sample_row_ids(table.rows(), count, rng);
    return table.select_rows(ids);
}

}  // namespace aspectra
