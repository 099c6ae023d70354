#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aspectra {

/// Counter-based random stream.
///
/// Draw k of stream (seed, stream_id) is a pure function of (seed, stream_id, k),
/// built from 64-bit integer mixing only. Sequences are therefore identical on
/// every platform and independent of how work is scheduled. Independent tasks
/// take their own stream through substream().
class RngStream {
public:
    constexpr RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_(stream_id), key_(make_key(seed, stream_id)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }
    std::uint64_t position() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound) noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept;

    /// Standard normal variate (Box-Muller, one value per call).
    double normal() noexcept;

    /// Child stream whose id is derived from this stream's id and `tag`.
    RngStream substream(std::uint64_t tag) const noexcept;

    /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
    std::vector<std::size_t> permutation(std::size_t n) noexcept;

private:
    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static constexpr std::uint64_t make_key(std::uint64_t seed, std::uint64_t stream) noexcept {
        return mix64(seed ^ mix64(stream ^ 0x632BE59BD9B4E019ull));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Order-sensitive hash of an index list, for deriving stream ids from sets.
std::uint64_t hash_indices(std::span<const std::size_t> indices) noexcept;

}  // namespace aspectra
