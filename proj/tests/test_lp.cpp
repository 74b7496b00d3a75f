#include <cmath>
#include <stdexcept>
#include <complex>

#include <doctest.h>

#include "sdelab/corpus.hpp"
#include "sdelab/fft.hpp"
#include "sdelab/lp.hpp"

using namespace sdelab;

namespace {
const SpaceGrid kGrid{256, 16.0 * 3.14159265358979323846};
}

TEST_SUITE("lp") {
    TEST_CASE("chi profile is a smooth plateau cutoff") {
        CHECK(chi_profile(0.0) == 1.0);
        CHECK(chi_profile(1.0) == 1.0);
        CHECK(chi_profile(1.5) == 0.0);
        CHECK(chi_profile(2.0) == 0.0);
        const double mid = chi_profile(1.25);
        CHECK(mid > 0.0);
        CHECK(mid < 1.0);
    }

    TEST_CASE("cutoffs telescope to the coarse plateau") {
        const auto cut = build_cutoffs(kGrid.n, kGrid.length);
        REQUIRE(cut.j_max >= 3);
        for (std::size_t i = 0; i < kGrid.n; ++i) {
            double sum = 0.0;
            for (int j = -1; j <= cut.j_max; ++j) sum += cut.block(j)[i];
            const double xi = std::abs(fft_frequency(i, kGrid.n, kGrid.length));
            CHECK(sum == doctest::Approx(chi_profile(xi / std::pow(2.0, cut.j_max))).epsilon(1e-12));
        }
        CHECK_THROWS_AS(build_cutoffs(100, kGrid.length), std::invalid_argument);
        CHECK_THROWS_AS(build_cutoffs(8, kGrid.length), std::invalid_argument);
    }

    TEST_CASE("decomposition reconstructs the corpus") {
        const auto cut = build_cutoffs(kGrid.n, kGrid.length);
        for (const auto& f : make_field_corpus(kGrid, 10, 3)) {
            const auto rec = decompose(f, cut).reconstruct();
            double err = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(rec[i] - f[i]));
            CHECK(err <= 1e-10 * std::max(1.0, sup_norm(f)));
        }
    }

    TEST_CASE("blocks live on dyadic frequency annuli") {
        const auto cut = build_cutoffs(kGrid.n, kGrid.length);
        const auto f = make_field_corpus(kGrid, 5, 3)[4];
        const auto dec = decompose(f, cut);
        for (int j = 0; j <= cut.j_max; ++j) {
            const auto hat = fft_of_real(dec.block(j));
            const double lo = std::pow(2.0, j) / 2.0, hi = 1.5 * std::pow(2.0, j);
            for (std::size_t i = 0; i < kGrid.n; ++i) {
                const double xi = std::abs(fft_frequency(i, kGrid.n, kGrid.length));
                if (xi < lo * (1.0 - 1e-12) || xi > hi * (1.0 + 1e-12))
                    CHECK(std::abs(hat[i]) <= 1e-10 * kGrid.n);
            }
        }
    }

    TEST_CASE("a constant scores its absolute value in the dyadic norm") {
        const auto cut = build_cutoffs(kGrid.n, kGrid.length);
        const std::vector<double> c(kGrid.n, -3.7);
        CHECK(holder_norm_dyadic(decompose(c, cut), 0.5) == doctest::Approx(3.7).epsilon(1e-10));
    }

    TEST_CASE("dyadic and direct norms agree within a fixed factor") {
        const auto cut = build_cutoffs(kGrid.n, kGrid.length);
        for (double alpha : {0.25, 0.5, 0.75}) {
            for (const auto& f : make_field_corpus(kGrid, 8, 11)) {
                const double dy = holder_norm_dyadic(decompose(f, cut), alpha);
                const double di = holder_norm_direct(f, alpha, kGrid);
                CHECK(dy / di <= 8.0);
                CHECK(di / dy <= 8.0);
            }
        }
        CHECK_THROWS_AS(holder_norm_dyadic(decompose(std::vector<double>(kGrid.n, 1.0), cut), 1.5),
                        std::invalid_argument);
    }

    TEST_CASE("Bernstein ratios are uniformly bounded") {
        const auto cut = build_cutoffs(kGrid.n, kGrid.length);
        for (const auto& f : make_field_corpus(kGrid, 10, 17)) {
            const auto dec = decompose(f, cut);
            for (int k : {1, 2})
                for (const auto& r : bernstein_check(dec, k)) CHECK(r.ratio <= 10.0);
        }
    }

    TEST_CASE("spectral derivative is exact on trigonometric modes") {
        std::vector<double> f(kGrid.n), want(kGrid.n);
        const double xi = 2.0 * 3.14159265358979323846 * 3.0 / kGrid.length;
        for (std::size_t i = 0; i < kGrid.n; ++i) {
            f[i] = std::sin(xi * kGrid.x(i));
            want[i] = xi * std::cos(xi * kGrid.x(i));
        }
        const auto d = spectral_derivative(f, 1, kGrid);
        for (std::size_t i = 0; i < kGrid.n; ++i)
            CHECK(d[i] == doctest::Approx(want[i]).epsilon(1e-9));
        const auto d2 = spectral_derivative(f, 2, kGrid);
        for (std::size_t i = 0; i < kGrid.n; ++i)
            CHECK(d2[i] == doctest::Approx(-xi * xi * f[i]).epsilon(1e-9));
    }

    TEST_CASE("higher-order norm dominates the lower-order one") {
        const auto cut = build_cutoffs(kGrid.n, kGrid.length);
        const auto f = make_field_corpus(kGrid, 4, 23)[3];
        const double low = holder_norm_dyadic_general(f, 0.5, cut);
        const double high = holder_norm_dyadic_general(f, 2.5, cut);
        CHECK(low > 0.0);
        CHECK(high >= low * 0.99);
    }
}
