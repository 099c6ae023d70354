#include "aspectra/rng.hpp"

#include <cmath>
#include <numbers>

namespace aspectra {

std::uint64_t RngStream::next_u64() noexcept {
    // Two rounds of the splitmix finalizer over (key, counter).
    const std::uint64_t c = counter_++;
    return mix64(mix64(key_ ^ (c * 0xD1B54A32D192ED03ull)) + c);
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection; unbiased.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::substream(std::uint64_t tag) const noexcept {
    return RngStream(seed_, mix64(stream_ ^ mix64(tag + 0x3C6EF372FE94F82Bull)));
}

std::vector<std::size_t> RngStream::permutation(std::size_t n) noexcept {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::uint64_t hash_indices(std::span<const std::size_t> indices) noexcept {
    std::uint64_t h = 0x84222325CBF29CE4ull ^ indices.size();
    for (std::size_t v : indices) {
        h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace aspectra
