#pragma once

#include <array>
#include <cstdint>

namespace sdelab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A draw is a pure function of (key, counter), so any (seed, path, stream,
// step) tuple maps to the same bits no matter how work is split across
// threads or processes.
class Philox {
public:
    using ctr_t = std::array<std::uint32_t, 4>;
    using key_t = std::array<std::uint32_t, 2>;

    static ctr_t round10(ctr_t ctr, key_t key);
};

/// Identifies one independent random stream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
    std::uint64_t stream_index = 0;
};

/// One standard normal per (spec, step, component), deterministic.
double normal_draw(const SeedSpec& spec, std::uint64_t step, std::uint32_t component);

/// Uniform in (0,1), never exactly 0 or 1.
double uniform_draw(const SeedSpec& spec, std::uint64_t step, std::uint32_t component);

}  // namespace sdelab
