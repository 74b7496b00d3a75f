#include "sdelab/rng.hpp"

#include <cmath>

namespace sdelab {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;
constexpr std::uint32_t kMultA = 0xD2511F53u;
constexpr std::uint32_t kMultB = 0xCD9E8D57u;

inline void single_round(Philox::ctr_t& ctr, const Philox::key_t& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMultA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMultB) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

// splitmix-style mix so that nearby seeds give unrelated keys
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline Philox::ctr_t block(const SeedSpec& spec, std::uint64_t step, std::uint32_t component) {
    const std::uint64_t k = mix64(spec.master_seed) ^ mix64(mix64(spec.stream_index) + spec.path_index);
    Philox::key_t key = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    Philox::ctr_t ctr = {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                         component, 0u};
    return Philox::round10(ctr, key);
}

inline double u01(std::uint32_t w) {
    // (w + 0.5) / 2^32 lies strictly inside (0,1)
    return (static_cast<double>(w) + 0.5) * 0x1p-32;
}

}  // namespace

Philox::ctr_t Philox::round10(ctr_t ctr, key_t key) {
    for (int r = 0; r < 10; ++r) {
        single_round(ctr, key);
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

double uniform_draw(const SeedSpec& spec, std::uint64_t step, std::uint32_t component) {
    return u01(block(spec, step, component)[0]);
}

double normal_draw(const SeedSpec& spec, std::uint64_t step, std::uint32_t component) {
    const auto b = block(spec, step, component);
    const double u1 = u01(b[0]);
    const double u2 = u01(b[1]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace sdelab
