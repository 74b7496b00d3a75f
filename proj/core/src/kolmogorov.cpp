#include "sdelab/kolmogorov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdelab {

void CoefficientSlice::check() const {
    if (lambda_min <= 0.0 || lambda_max < lambda_min)
        throw std::invalid_argument("CoefficientSlice: bad ellipticity bounds");
    for (double v : a.data) {
        if (!std::isfinite(v) || v < lambda_min * (1.0 - 1e-9) || v > lambda_max * (1.0 + 1e-9))
            throw std::invalid_argument("CoefficientSlice: a outside ellipticity bounds");
    }
    for (double v : b.data)
        if (!std::isfinite(v)) throw std::invalid_argument("CoefficientSlice: b not finite");
    for (double v : c.data)
        if (!std::isfinite(v)) throw std::invalid_argument("CoefficientSlice: c not finite");
    for (double v : f.data)
        if (!std::isfinite(v)) throw std::invalid_argument("CoefficientSlice: f not finite");
}

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    auto thomas = [&](std::vector<double> d, std::vector<double> r) {
        std::vector<double> c(n, 0.0);
        c[0] = sup[0] / d[0];
        r[0] /= d[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = d[i] - sub[i] * c[i - 1];
            c[i] = sup[i] / m;
            r[i] = (r[i] - sub[i] * r[i - 1]) / m;
        }
        for (std::size_t i = n - 1; i-- > 0;) r[i] -= c[i] * r[i + 1];
        return r;
    };
    // Sherman-Morrison: fold the corner entries sub[0], sup[n-1] into a rank-1 update
    const double gamma = -diag[0];
    std::vector<double> d = diag;
    d[0] -= gamma;
    d[n - 1] -= sup[n - 1] * sub[0] / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = sup[n - 1];
    const std::vector<double> y = thomas(d, rhs);
    const std::vector<double> z = thomas(d, u);
    const double vy = y[0] + sub[0] / gamma * y[n - 1];
    const double vz = 1.0 + z[0] + sub[0] / gamma * z[n - 1];
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - vy / vz * z[i];
    return x;
}

BackwardSolution solve_backward(const CoefficientSlice& slice) {
    slice.check();
    const TimeGrid tg = slice.a.tgrid;
    const SpaceGrid xg = slice.a.xgrid;
    const std::size_t n = xg.n;
    const double dt = tg.dt();
    const double dx = xg.dx();

    BackwardSolution sol;
    sol.w = SpaceTimeField(tg, xg);

    auto apply_L = [&](std::size_t k, const std::vector<double>& w) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double wp = w[(i + 1) % n], wm = w[(i + n - 1) % n];
            out[i] = slice.a.at(k, i) * (wp - 2.0 * w[i] + wm) / (dx * dx) +
                     slice.b.at(k, i) * (wp - wm) / (2.0 * dx) + slice.c.at(k, i) * w[i];
        }
        return out;
    };

    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    std::vector<double> w_next(n, 0.0);  // terminal condition w_T = 0, exact
    for (std::size_t k = tg.steps; k-- > 0;) {
        const std::vector<double> Lw = apply_L(k + 1, w_next);
        for (std::size_t i = 0; i < n; ++i)
            rhs[i] = w_next[i] +
                     0.5 * dt * (Lw[i] + slice.f.at(k + 1, i) + slice.f.at(k, i));
        for (std::size_t i = 0; i < n; ++i) {
            const double ai = slice.a.at(k, i) / (dx * dx);
            const double bi = slice.b.at(k, i) / (2.0 * dx);
            diag[i] = 1.0 + 0.5 * dt * (2.0 * ai - slice.c.at(k, i));
            sub[i] = -0.5 * dt * (ai - bi);
            sup[i] = -0.5 * dt * (ai + bi);
        }
        std::vector<double> w_k = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
        for (double v : w_k)
            if (!std::isfinite(v))
                throw std::runtime_error("solve_backward: NaN at time slice " + std::to_string(k));
        sol.w.set_slice(k, w_k);
        w_next = std::move(w_k);
    }
    return sol;
}

SchauderReport schauder_diagnostic(const BackwardSolution& w, const SpaceTimeField& f,
                                   double alpha) {
    if (sup_norm(f.data) == 0.0) throw std::invalid_argument("schauder_diagnostic: zero source");
    const auto cutoffs = build_cutoffs(w.w.xgrid.n, w.w.xgrid.length);
    SchauderReport rep;
    for (std::size_t k = 0; k <= w.w.tgrid.steps; ++k) {
        rep.dt_norm = std::max(rep.dt_norm,
                               holder_norm_dyadic_general(w.dt_slice(k), alpha, cutoffs));
        rep.sol_norm = std::max(rep.sol_norm,
                                holder_norm_dyadic_general(w.slice(k), 2.0 + alpha, cutoffs));
        rep.zero_norm = std::max(rep.zero_norm, sup_norm(w.slice(k)));
        rep.source_norm = std::max(rep.source_norm,
                                   holder_norm_dyadic_general(f.slice(k), alpha, cutoffs));
    }
    rep.zero_norm /= w.w.tgrid.t_end;
    rep.ratio = (rep.dt_norm + rep.sol_norm + rep.zero_norm) / rep.source_norm;
    return rep;
}

InterpolationReport interpolation_diagnostic(const BackwardSolution& w, double gamma0,
                                             double gamma1, double gamma2) {
    if (!(gamma0 >= 0.0 && gamma0 < gamma1 && gamma1 < gamma2))
        throw std::invalid_argument("interpolation_diagnostic: need 0 <= g0 < g1 < g2");
    if (std::abs(gamma1 - std::round(gamma1)) < 1e-12)
        throw std::invalid_argument("interpolation_diagnostic: gamma1 must not be an integer");
    const auto cutoffs = build_cutoffs(w.w.xgrid.n, w.w.xgrid.length);
    InterpolationReport rep;
    rep.theta = (gamma2 - gamma1) / (gamma2 - gamma0);

    const std::size_t m = w.w.tgrid.steps;
    const std::size_t stride = std::max<std::size_t>(1, m / 16);
    for (std::size_t k1 = 0; k1 <= m; k1 += stride) {
        const auto s1 = w.slice(k1);
        for (std::size_t k2 = k1 + stride; k2 <= m; k2 += stride) {
            const auto s2 = w.slice(k2);
            std::vector<double> diff(s1.size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s1[i] - s2[i];
            const double num = holder_norm_dyadic_general(diff, gamma1, cutoffs);
            const double den = std::pow(w.w.tgrid.t(k2) - w.w.tgrid.t(k1), rep.theta);
            rep.measured = std::max(rep.measured, num / den);
        }
    }
    double dt_norm = 0.0, hi_norm = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        dt_norm = std::max(dt_norm, holder_norm_dyadic_general(w.dt_slice(k), gamma0, cutoffs));
        hi_norm = std::max(hi_norm, holder_norm_dyadic_general(w.slice(k), gamma2, cutoffs));
    }
    rep.bound = std::pow(dt_norm, rep.theta) * std::pow(hi_norm, 1.0 - rep.theta);
    rep.ratio = rep.bound > 0.0 ? rep.measured / rep.bound : 0.0;
    return rep;
}

}  // namespace sdelab
