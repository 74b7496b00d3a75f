#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "sdelab/malliavin.hpp"

using namespace sdelab;

TEST_SUITE("malliavin") {
    TEST_CASE("linear functional differentiates exactly for every eps") {
        const TimeGrid tg{1.0, 32};
        const auto F = make_functional("w1");
        const auto h = CameronMartinDirection::constant(tg, 1.3);
        const auto p = sample_path({7, 0, 0}, tg, 1);
        for (double eps : {1.0, 0.1, 1e-6})
            CHECK(directional_derivative(F, p, h, eps) ==
                  doctest::Approx(1.3).epsilon(1e-9));
        CHECK_THROWS_AS(directional_derivative(F, p, h, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(make_functional("nope"), std::invalid_argument);
    }

    TEST_CASE("squared terminal value has derivative 2 W_1 + eps") {
        const TimeGrid tg{1.0, 32};
        const auto F = make_functional("w1sq");
        const auto h = CameronMartinDirection::constant(tg, 1.0);
        const auto p = sample_path({8, 0, 0}, tg, 1);
        const double eps = 1.0 / 64.0;
        CHECK(directional_derivative(F, p, h, eps) ==
              doctest::Approx(2.0 * p.value(32) + eps).epsilon(1e-10));
    }

    TEST_CASE("convergence criterion: linear rate for smooth functionals") {
        const TimeGrid tg{1.0, 32};
        const auto h = CameronMartinDirection::constant(tg, 1.0);
        const auto ens = sample_ensemble({9, 0, 0}, 100, tg, 1);
        const std::vector<double> eps = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128,
                                         1.0 / 256};
        for (const char* name : {"w1sq", "expmart"}) {
            const auto rep = derivative_criterion_check(make_functional(name), ens, h, 1.0, eps);
            CHECK(rep.slope >= 0.9);
        }
        // linear functionals have identically zero error
        const auto lin = derivative_criterion_check(make_functional("w1"), ens, h, 1.0, eps);
        for (double e : lin.lq_error) CHECK(e <= 1e-12);
    }

    TEST_CASE("continuations freeze the past and are reproducible") {
        const TimeGrid tg{1.0, 16};
        const auto p = sample_path({10, 0, 0}, tg, 1);
        const auto c1 = continuation_path(p, 8, 0, 3, 77);
        const auto c2 = continuation_path(p, 8, 0, 3, 77);
        for (std::size_t k = 0; k < 8; ++k) CHECK(c1.increment(k, 0) == p.increment(k, 0));
        for (std::size_t k = 0; k < 16; ++k) CHECK(c1.increment(k, 0) == c2.increment(k, 0));
        CHECK(continuation_path(p, 8, 0, 4, 77).increment(9, 0) != c1.increment(9, 0));
    }

    TEST_CASE("conditional expectation matches Gaussian closed forms") {
        const TimeGrid tg{1.0, 16};
        const ConditionalConfig cfg{512, 21};
        const auto p = sample_path({20, 0, 0}, tg, 1);
        const std::size_t t = 8;
        const double wt = p.value(t), tau = 1.0 - tg.t(t);

        const auto e1 = conditional_expectation(make_functional("w1"), t, p, 0, cfg);
        CHECK(std::abs(e1.mean - wt) <= 3.0 * std::sqrt(tau / 512.0) + 3.0 * e1.std_error);

        // F_t-measurable functional: exact value, zero variance
        PathFunctional G;
        G.eval = [t](const BrownianPath& q) { return q.value(t) * q.value(t); };
        const auto e2 = conditional_expectation(G, t, p, 0, cfg);
        CHECK(e2.mean == doctest::Approx(wt * wt).epsilon(1e-14));
        CHECK(e2.std_error == 0.0);

        const auto e3 = conditional_expectation(make_functional("w1sq"), t, p, 0, cfg);
        CHECK(std::abs(e3.mean - (wt * wt + tau)) <= 4.0 * e3.std_error + 1e-9);

        CHECK_THROWS_AS(conditional_expectation(G, t, p, 0, ConditionalConfig{1, 0}),
                        std::invalid_argument);
    }

    TEST_CASE("tower property within Monte Carlo error") {
        const TimeGrid tg{1.0, 16};
        const ConditionalConfig cfg{2048, 31};
        const auto p = sample_path({30, 0, 0}, tg, 1);
        const std::size_t t = 4, s = 8;
        // E^s W_1^2 = W_s^2 + (1 - t_s), in closed form
        PathFunctional Es;
        Es.eval = [s, &tg](const BrownianPath& q) {
            return q.value(s) * q.value(s) + (1.0 - tg.t(s));
        };
        const auto outer = conditional_expectation(Es, t, p, 0, cfg);
        const auto direct = conditional_expectation(make_functional("w1sq"), t, p, 0, cfg);
        CHECK(std::abs(outer.mean - direct.mean) <=
              3.0 * (outer.std_error + direct.std_error) + 1e-9);
    }

    TEST_CASE("Clark-Ocone reconstruction") {
        const ConditionalConfig cfg{8, 41};
        SUBCASE("terminal value is reconstructed exactly") {
            const auto ens = sample_ensemble({40, 0, 0}, 200, {1.0, 64}, 1);
            const auto rep = clark_ocone_reconstruct(make_functional("w1"), ens, cfg);
            // EF is the empirical mean, so the residual is the mean itself
            double mean = 0.0;
            for (const auto& q : ens.paths) mean += q.value(64);
            mean /= 200.0;
            for (double e : rep.abs_error) CHECK(e <= std::abs(mean) + 1e-12);
        }
        SUBCASE("smooth functionals reconstruct at the Ito-sum scale") {
            const auto ens = sample_ensemble({40, 0, 0}, 2000, {1.0, 256}, 1);
            for (const char* name : {"w1sq", "expmart", "integral-of-w"}) {
                const auto rep = clark_ocone_reconstruct(make_functional(name), ens, cfg, 2);
                CHECK(rep.mean_abs_error <= 0.12);
            }
        }
        SUBCASE("missing derivative data is an error") {
            PathFunctional F;
            F.eval = [](const BrownianPath& q) { return q.value(1); };
            const auto ens = sample_ensemble({40, 0, 0}, 4, {1.0, 8}, 1);
            CHECK_THROWS_AS(clark_ocone_reconstruct(F, ens, cfg), std::invalid_argument);
        }
    }

    TEST_CASE("nested-MC fallback agrees with the analytic conditional derivative") {
        const auto ens = sample_ensemble({44, 0, 0}, 16, {1.0, 16}, 1);
        const ConditionalConfig cfg{2048, 45};
        auto F = make_functional("w1sq");
        const auto exact = clark_ocone_reconstruct(F, ens, cfg);
        F.conditional_derivative = nullptr;  // force the nested estimate of E^t 2 W_1
        const auto nested = clark_ocone_reconstruct(F, ens, cfg, 2);
        CHECK(std::abs(exact.mean_abs_error - nested.mean_abs_error) <= 0.25);
    }

    TEST_CASE("running-integral decomposition is exact for adapted data") {
        // y_t = int_0^t W_s ds: every term of the identity is F_t-measurable,
        // so the discrete residual collapses to rounding error
        EtyProcess y;
        y.y0.eval = [](const BrownianPath&) { return 0.0; };
        y.y0.malliavin = [](const BrownianPath& q) {
            return std::vector<double>(q.grid().steps, 0.0);
        };
        y.ydot = [](const BrownianPath& q, std::size_t s) { return q.value(s); };
        y.ydot_malliavin = [](const BrownianPath&, std::size_t r, std::size_t s) {
            return r < s ? 1.0 : 0.0;
        };
        const auto ens = sample_ensemble({50, 0, 0}, 8, {1.0, 16}, 1);
        const auto rep = ety_decompose(y, ens, ConditionalConfig{16, 51}, 2);
        CHECK(rep.sup_residual <= 1e-10);
    }

    TEST_CASE("constant-rate decomposition reduces to Clark-Ocone noise") {
        // y_t = W_1 (ydot = 0): E^t y_t = W_t and the martingale sum telescopes
        EtyProcess y;
        y.y0 = make_functional("w1");
        y.ydot = [](const BrownianPath&, std::size_t) { return 0.0; };
        y.ydot_malliavin = [](const BrownianPath&, std::size_t, std::size_t) { return 0.0; };
        // the residual carries the ensemble estimate of E y_0 = E W_1, which
        // is only O(paths^{-1/2}) accurate, on top of the inner MC error
        const auto ens = sample_ensemble({52, 0, 0}, 256, {1.0, 16}, 1);
        const auto rep = ety_decompose(y, ens, ConditionalConfig{1024, 53}, 2);
        CHECK(rep.sup_residual <= 0.25);

        EtyProcess bad = y;
        bad.ydot_malliavin = nullptr;
        CHECK_THROWS_AS(ety_decompose(bad, ens, ConditionalConfig{16, 0}), std::invalid_argument);
    }
}
