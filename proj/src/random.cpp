#include "subnetsim/random.hpp"

#include <array>

namespace subnetsim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

std::uint64_t drop_seed(std::uint64_t master_seed, std::uint64_t drop_index) {
    return mix_seed(master_seed, drop_index);
}

Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
    const std::uint64_t s = mix_seed(mix_seed(seed, static_cast<std::uint64_t>(tag)), index);
    // Fill the full mt19937_64 state from four decorrelated words.
    std::array<std::uint32_t, 8> words{};
    std::uint64_t w = s;
    for (std::size_t i = 0; i < 4; ++i) {
        w = splitmix64(w);
        words[2 * i] = static_cast<std::uint32_t>(w);
        words[2 * i + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

}  // namespace subnetsim
