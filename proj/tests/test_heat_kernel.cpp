#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "sdelab/fft.hpp"
#include "sdelab/heat_kernel.hpp"

using namespace sdelab;

namespace {
const SpaceGrid kGrid{256, 16.0 * 3.14159265358979323846};

DiffusionSchedule wavy_schedule() {
    DiffusionSchedule s;
    s.a = [](double t) { return SymMat::scalar(0.25 + 0.1 * std::sin(6.2831853071795865 * t)); };
    s.lambda_min = 0.15;
    s.lambda_max = 0.35;
    return s;
}
}  // namespace

TEST_SUITE("kernel") {
    TEST_CASE("symmetric 2x2 helpers") {
        const SymMat m{2, {2.0, 0.5, 1.0}};
        CHECK(m.det() == doctest::Approx(1.75));
        const SymMat inv = m.inverse();
        // m * inv = id, probed through the quadratic form
        CHECK(inv.quad({1.0, 0.0}) == doctest::Approx(1.0 / 1.75));
        const auto ev = m.eigenvalues();
        CHECK(ev[0] * ev[1] == doctest::Approx(m.det()));
        CHECK(ev[0] + ev[1] == doctest::Approx(3.0));
        CHECK_THROWS_AS((SymMat{2, {1.0, 1.0, 1.0}}.inverse()), std::invalid_argument);
    }

    TEST_CASE("schedule validation enforces the ellipticity band") {
        auto s = wavy_schedule();
        CHECK_NOTHROW(s.validate(0.0, 1.0));
        s.lambda_max = 0.3;  // violated at the sine peak
        CHECK_THROWS_AS(s.validate(0.0, 1.0), std::invalid_argument);
    }

    TEST_CASE("A accumulates the exact integral of a(t)") {
        const auto acc = accumulate_A(DiffusionSchedule::constant(0.3), 0.25, 1.0);
        CHECK(acc.A.m[0] == doctest::Approx(0.3 * 0.75).epsilon(1e-14));
        // sin schedule: int_0^1 (1/4 + sin(2 pi t)/10) dt = 1/4
        const auto acc2 = accumulate_A(wavy_schedule(), 0.0, 1.0);
        CHECK(acc2.A.m[0] == doctest::Approx(0.25).epsilon(1e-10));
        CHECK_THROWS_AS(accumulate_A(wavy_schedule(), 1.0, 0.5), std::invalid_argument);
    }

    TEST_CASE("kernel has unit mass") {
        const auto acc = accumulate_A(wavy_schedule(), 0.0, 0.5);
        const double sigma = std::sqrt(2.0 * acc.A.m[0]);
        const double h = sigma / 200.0;
        double mass = 0.0;
        for (double x = -12.0 * sigma; x <= 12.0 * sigma; x += h) mass += kernel_eval(acc, x) * h;
        CHECK(std::abs(mass - 1.0) <= 1e-8);
    }

    TEST_CASE("semigroup acts as the Gaussian Fourier multiplier") {
        const auto acc = accumulate_A(wavy_schedule(), 0.0, 0.5);
        std::vector<double> f(kGrid.n);
        const double xi = 2.0 * 3.14159265358979323846 * 5.0 / kGrid.length;
        for (std::size_t i = 0; i < kGrid.n; ++i) f[i] = std::sin(xi * kGrid.x(i));
        const auto pf = semigroup_apply(acc, f, kGrid);
        const double want = std::exp(-acc.A.m[0] * xi * xi);
        for (std::size_t i = 0; i < kGrid.n; ++i)
            CHECK(std::abs(pf[i] - want * f[i]) <= 1e-8);
    }

    TEST_CASE("Chapman-Kolmogorov composition") {
        const auto sched = wavy_schedule();
        const auto a_ts = accumulate_A(sched, 0.0, 0.3);
        const auto a_sr = accumulate_A(sched, 0.3, 0.8);
        const auto a_tr = accumulate_A(sched, 0.0, 0.8);
        std::vector<double> f(kGrid.n);
        for (std::size_t i = 0; i < kGrid.n; ++i) {
            const double x = kGrid.x(i);
            f[i] = std::sin(2.0 * 3.14159265358979323846 * x / kGrid.length * 3.0) +
                   0.5 * std::cos(2.0 * 3.14159265358979323846 * x / kGrid.length * 7.0);
        }
        const auto two_step = semigroup_apply(a_ts, semigroup_apply(a_sr, f, kGrid), kGrid);
        const auto one_step = semigroup_apply(a_tr, f, kGrid);
        for (std::size_t i = 0; i < kGrid.n; ++i)
            CHECK(std::abs(two_step[i] - one_step[i]) <= 1e-6);
    }

    TEST_CASE("a kernel wider than the period is rejected") {
        const auto acc = accumulate_A(DiffusionSchedule::constant(1.0), 0.0, 400.0);
        const std::vector<double> f(kGrid.n, 1.0);
        CHECK_THROWS_AS(semigroup_apply(acc, f, kGrid), std::invalid_argument);
    }

    TEST_CASE("Duhamel solution matches the closed form for a single mode") {
        const double a0 = 0.3;
        const auto sched = DiffusionSchedule::constant(a0);
        const TimeGrid tg{1.0, 32};
        SpaceTimeField f(tg, kGrid);
        const double xi = 2.0 * 3.14159265358979323846 * 2.0 / kGrid.length;
        for (std::size_t k = 0; k <= tg.steps; ++k)
            for (std::size_t i = 0; i < kGrid.n; ++i) f.at(k, i) = std::sin(xi * kGrid.x(i));
        const auto sol = duhamel_solution(sched, f);
        for (std::size_t k = 0; k <= tg.steps; ++k) {
            const double tau = tg.t_end - tg.t(k);
            const double want = (1.0 - std::exp(-a0 * xi * xi * tau)) / (a0 * xi * xi);
            const auto s = sol.slice(k);
            for (std::size_t i = 0; i < kGrid.n; ++i)
                CHECK(std::abs(s[i] - want * std::sin(xi * kGrid.x(i))) <= 2e-6);
        }
    }
}
