#pragma once

#include <cmath>

#include "sdelab/lp.hpp"
#include "sdelab/rng.hpp"

namespace sdelab {

/// Deterministic corpus of periodic test fields with mixed regularity:
/// smooth trigonometric combinations, bumps, Hoelder-rough profiles and
/// random trigonometric polynomials with decaying spectra.
inline std::vector<std::vector<double>> make_field_corpus(const SpaceGrid& grid,
                                                          std::size_t count,
                                                          std::uint64_t seed) {
    const double L = grid.length;
    const double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<std::vector<double>> corpus;
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<double> f(grid.n);
        const SeedSpec spec{seed, c, 0};
        switch (c % 5) {
            case 0:  // smooth low-frequency mix
                for (std::size_t i = 0; i < grid.n; ++i) {
                    const double x = grid.x(i);
                    f[i] = std::sin(two_pi * x / L) +
                           0.5 * std::cos(2.0 * two_pi * x / L + 0.3 * static_cast<double>(c));
                }
                break;
            case 1:  // periodic Gaussian bump
                for (std::size_t i = 0; i < grid.n; ++i) {
                    const double x = grid.x(i) - L * (0.25 + 0.02 * static_cast<double>(c));
                    const double d = x - L * std::floor(x / L + 0.5);
                    f[i] = std::exp(-d * d / (0.002 * L * L));
                }
                break;
            case 2:  // Hoelder-1/2 rough profile
                for (std::size_t i = 0; i < grid.n; ++i)
                    f[i] = std::sqrt(std::abs(std::sin(two_pi * grid.x(i) / L *
                                                       (1.0 + static_cast<double>(c % 3)))));
                break;
            case 3:  // random trig polynomial, smooth decay
                for (std::size_t i = 0; i < grid.n; ++i) {
                    double v = 0.0;
                    for (std::uint64_t k = 1; k <= 12; ++k) {
                        const double amp =
                            (uniform_draw(spec, k, 0) - 0.5) / (static_cast<double>(k) * k);
                        const double ph = two_pi * uniform_draw(spec, k, 1);
                        v += amp * std::sin(two_pi * static_cast<double>(k) * grid.x(i) / L + ph);
                    }
                    f[i] = v;
                }
                break;
            default:  // rough random spectrum, ~C^{1/2} decay
                for (std::size_t i = 0; i < grid.n; ++i) {
                    double v = 0.0;
                    for (std::uint64_t k = 1; k <= 64; ++k) {
                        const double amp = (uniform_draw(spec, k, 0) - 0.5) /
                                           std::pow(static_cast<double>(k), 1.0);
                        const double ph = two_pi * uniform_draw(spec, k, 1);
                        v += amp * std::sin(two_pi * static_cast<double>(k) * grid.x(i) / L + ph);
                    }
                    f[i] = v;
                }
                break;
        }
        corpus.push_back(std::move(f));
    }
    return corpus;
}

}  // namespace sdelab
