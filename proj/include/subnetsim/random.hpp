#pragma once

#include <cstdint>
#include <random>

namespace subnetsim {

using Rng = std::mt19937_64;

/// Purpose tags for the independent streams used inside one drop.
enum class StreamTag : std::uint64_t {
    Topology = 1,
    LargeScale = 2,
    SmallScale = 3,
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Order-sensitive combination of two words into a well-mixed seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Seed for a drop: a pure function of (master_seed, drop_index), so drops can
/// be executed in any order or on any worker.
std::uint64_t drop_seed(std::uint64_t master_seed, std::uint64_t drop_index);

/// Independent generator for (drop, purpose, index) within a campaign.
Rng make_stream(std::uint64_t drop_seed, StreamTag tag, std::uint64_t index = 0);

}  // namespace subnetsim
