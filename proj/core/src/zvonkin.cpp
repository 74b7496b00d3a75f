#include "sdelab/zvonkin.hpp"

#include <cmath>
#include <stdexcept>

#include "sdelab/parallel.hpp"

namespace sdelab {

double ZvonkinFrame::phi(std::size_t k, double x) const {
    return x + interp_periodic(u_slices[k], u.xgrid, x);
}

double ZvonkinFrame::grad_phi(std::size_t k, double x) const {
    return 1.0 + interp_periodic(du[k], u.xgrid, x);
}

double ZvonkinFrame::invert(std::size_t k, double y, double guess) const {
    double x = guess;
    for (int it = 0; it < 200; ++it) {
        const double next = y - interp_periodic(u_slices[k], u.xgrid, x);
        if (std::abs(next - x) < 1e-10) return next;
        x = next;
    }
    throw std::runtime_error("invert_phi: fixed point did not converge (frame corrupted?)");
}

ZvonkinFrame build_phi(const SpaceTimeField& u, const SpaceTimeField& v) {
    ZvonkinFrame f;
    f.u = u;
    f.v = v;
    const double dx = u.xgrid.dx();
    for (std::size_t k = 0; k <= u.tgrid.steps; ++k) {
        f.u_slices.push_back(u.slice(k));
        f.v_slices.push_back(v.slice(k));
        f.du.push_back(fd_derivative(f.u_slices.back(), dx));
        f.dv_slices.push_back(fd_derivative(f.v_slices.back(), dx));
        for (double g : f.du.back()) f.grad_bound = std::max(f.grad_bound, std::abs(g));
    }
    if (f.grad_bound > 0.5)
        throw std::invalid_argument("build_phi: sup||grad u|| exceeds 1/2, got " +
                                    std::to_string(f.grad_bound));
    return f;
}

namespace {

double measured_grad(const CoefficientModel& model, const SpaceGrid& grid, double T,
                     std::size_t steps) {
    // conditional expectation is a contraction, so probing grad w bounds grad u
    const TimeGrid tg{T, steps};
    double g = 0.0;
    const std::size_t probes = model.deterministic ? 1 : 3;
    for (std::size_t i = 0; i < probes; ++i) {
        const BrownianPath p = sample_path({1234, i, 0}, tg, 1);
        const BackwardSolution w = solve_w(model, p, grid);
        for (std::size_t k = 0; k <= steps; ++k)
            for (double v : w.d1(k)) g = std::max(g, std::abs(v));
    }
    return g;
}

}  // namespace

HorizonReport choose_horizon(const CoefficientModel& model, const SpaceGrid& grid,
                             double t_start, double t_min) {
    const std::size_t steps = 64;
    double T = t_start, g = 0.0;
    while (T >= t_min) {
        g = measured_grad(model, grid, T, steps);
        if (g <= 0.45) return {T, g, steps};
        T *= 0.5;
    }
    throw std::runtime_error("choose_horizon: no horizon >= " + std::to_string(t_min) +
                             " achieves the gradient bound; last measured " + std::to_string(g));
}

TransformedCoefficients transform_coefficients(const ZvonkinFrame& frame,
                                               const CoefficientModel& model,
                                               const BrownianPath& path, double box_n) {
    if (frame.u.tgrid != path.grid())
        throw std::invalid_argument("transform_coefficients: incompatible time grids");
    const ZvonkinFrame* f = &frame;
    const auto sigma = model.sigma;
    const auto p = path;  // copy: evaluators must not dangle
    const TimeGrid tg = frame.u.tgrid;

    TransformedCoefficients tc;
    tc.b_tilde = [f, sigma, p, tg](std::size_t k, double y) {
        const double x = f->invert(k, y);
        return interp_periodic(f->dv_slices[k], f->u.xgrid, x) * sigma(tg.t(k), x, p);
    };
    tc.sigma_tilde = [f, sigma, p, tg](std::size_t k, double y) {
        const double x = f->invert(k, y);
        return f->grad_phi(k, x) * sigma(tg.t(k), x, p) +
               interp_periodic(f->v_slices[k], f->u.xgrid, x);
    };

    const double dx = frame.u.xgrid.dx();
    for (std::size_t k = 0; k <= tg.steps; ++k) {
        double kb = 0.0;
        for (double v : frame.u_slices[k]) kb = std::max(kb, std::abs(v));
        for (double v : frame.du[k]) kb = std::max(kb, std::abs(v));
        for (double v : fd_second_derivative(frame.u_slices[k], dx)) kb = std::max(kb, std::abs(v));
        for (double v : frame.v_slices[k]) kb = std::max(kb, std::abs(v));
        for (double v : frame.dv_slices[k]) kb = std::max(kb, std::abs(v));
        for (double v : fd_second_derivative(frame.v_slices[k], dx)) kb = std::max(kb, std::abs(v));
        tc.k_bound = std::max(tc.k_bound, kb);
    }

    const std::size_t probes = 64;
    for (std::size_t k = 0; k <= tg.steps; k += std::max<std::size_t>(1, tg.steps / 8)) {
        for (std::size_t i = 0; i + 1 < probes; ++i) {
            const double y0 = -box_n / 2.0 + box_n * static_cast<double>(i) / probes;
            const double y1 = -box_n / 2.0 + box_n * static_cast<double>(i + 1) / probes;
            const double num = std::abs(tc.b_tilde(k, y0) - tc.b_tilde(k, y1)) +
                               std::abs(tc.sigma_tilde(k, y0) - tc.sigma_tilde(k, y1));
            tc.lipschitz_probe = std::max(tc.lipschitz_probe, num / (y1 - y0));
        }
    }
    return tc;
}

SdePaths euler_direct(const CoefficientModel& model, double x0, const BrownianEnsemble& ens,
                      std::size_t workers) {
    SdePaths out;
    out.x.resize(ens.size());
    out.excluded.assign(ens.size(), 0);
    parallel_for(ens.size(), workers, [&](std::size_t i) {
        const auto& p = ens.paths[i];
        const TimeGrid tg = p.grid();
        std::vector<double> xs(tg.steps + 1);
        xs[0] = x0;
        for (std::size_t k = 0; k < tg.steps; ++k)
            xs[k + 1] = xs[k] + model.b(tg.t(k), xs[k], p) * tg.dt() +
                        model.sigma(tg.t(k), xs[k], p) * p.increment(k, 0);
        out.x[i] = std::move(xs);
    });
    return out;
}

SdePaths euler_transformed(const ZvonkinFrame& frame, const TransformedCoefficients& tc,
                           double x0, const BrownianEnsemble& ens, double box_n,
                           std::size_t workers) {
    SdePaths out;
    out.x.resize(ens.size());
    out.excluded.assign(ens.size(), 0);
    parallel_for(ens.size(), workers, [&](std::size_t i) {
        const auto& p = ens.paths[i];
        const TimeGrid tg = p.grid();
        std::vector<double> xs(tg.steps + 1);
        double y = frame.phi(0, x0);
        double xguess = x0;
        xs[0] = x0;
        for (std::size_t k = 0; k < tg.steps; ++k) {
            y += tc.b_tilde(k, y) * tg.dt() + tc.sigma_tilde(k, y) * p.increment(k, 0);
            if (std::abs(y) > box_n / 2.0) out.excluded[i] = 1;
            xguess = frame.invert(k + 1, y, xguess);
            xs[k + 1] = xguess;
        }
        out.x[i] = std::move(xs);
    });
    std::size_t n_exc = 0;
    for (char e : out.excluded) n_exc += e;
    out.excluded_fraction = static_cast<double>(n_exc) / static_cast<double>(ens.size());
    return out;
}

BranchReport nonuniqueness_demo(double dt, double delta, std::uint64_t seed) {
    if (dt > 1.0 / 256.0) throw std::invalid_argument("nonuniqueness_demo: dt must be <= 2^-8");
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / dt));
    const TimeGrid tg{1.0, steps};
    const BrownianPath w = sample_path({seed, 0, 0}, tg, 1);
    auto drift = [](double x, double wt) { return std::min(std::sqrt(std::abs(x - wt)), 1.0); };

    BranchReport rep;
    // closed-form branches against the discrete integral equation
    double sum1 = 0.0, sum2 = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = tg.t(k);
        const double wk = w.value(k);
        rep.residual_flat = std::max(rep.residual_flat, std::abs(wk - sum1 - wk));
        rep.residual_quadratic =
            std::max(rep.residual_quadratic, std::abs(t * t / 4.0 + wk - sum2 - wk));
        if (k < steps) {
            sum1 += drift(wk, wk) * tg.dt();
            sum2 += drift(t * t / 4.0 + wk, wk) * tg.dt();
        }
    }

    // Euler on Y = X - W, which solves the random ODE y' = sqrt(|y|) ^ 1
    auto run = [&](double y0) {
        double y = y0;
        for (std::size_t k = 0; k < steps; ++k) y += std::min(std::sqrt(std::abs(y)), 1.0) * dt;
        return y;
    };
    rep.euler_zero_terminal = std::abs(run(0.0));
    rep.euler_delta_gap = std::abs(run(delta) - 0.25);
    return rep;
}

std::vector<UcpRow> ucp_cauchy_experiment(const CoefficientModel& model,
                                          const std::vector<double>& m_levels, double x0,
                                          const BrownianEnsemble& ens, const SpaceGrid& grid,
                                          std::size_t workers) {
    if (m_levels.size() < 2) throw std::invalid_argument("ucp: need >= 2 mollification levels");
    const TimeGrid tg = ens.paths.at(0).grid();
    const std::size_t half = tg.steps / 2;

    // sup_{t <= T/2} |X^{m_l} - X^{m_{l+1}}| per path, common noise
    std::vector<std::vector<double>> sup_diff(m_levels.size() - 1,
                                              std::vector<double>(ens.size(), 0.0));
    parallel_for(ens.size(), workers, [&](std::size_t i) {
        const auto& p = ens.paths[i];
        std::vector<std::vector<double>> xs;
        for (double m : m_levels) {
            const CoefficientSlice sl = model_slices(model, p, grid, m);
            std::vector<double> x(tg.steps + 1);
            x[0] = x0;
            for (std::size_t k = 0; k < tg.steps; ++k)
                x[k + 1] = x[k] + interp_periodic(sl.b.slice(k), grid, x[k]) * tg.dt() +
                           model.sigma(tg.t(k), x[k], p) * p.increment(k, 0);
            xs.push_back(std::move(x));
        }
        for (std::size_t l = 0; l + 1 < m_levels.size(); ++l)
            for (std::size_t k = 0; k <= half; ++k)
                sup_diff[l][i] = std::max(sup_diff[l][i], std::abs(xs[l][k] - xs[l + 1][k]));
    });

    std::vector<UcpRow> rows;
    const auto n = static_cast<double>(ens.size());
    for (std::size_t l = 0; l + 1 < m_levels.size(); ++l) {
        UcpRow row;
        row.m = m_levels[l];
        double s = 0.0, s2 = 0.0;
        for (double v : sup_diff[l]) {
            s += v;
            s2 += v * v;
        }
        row.mean_sup = s / n;
        row.std_err = std::sqrt(std::max(0.0, s2 / n - row.mean_sup * row.mean_sup) / n);
        rows.push_back(row);
    }
    return rows;
}

ItoWentzellRecipe make_ito_wentzell_recipe(const std::string& name) {
    ItoWentzellRecipe r;
    auto zero = [](double, double, const BrownianPath&) { return 0.0; };
    r.beta = [](double, double) { return 0.0; };
    r.gamma = [](double, double) { return 1.0; };
    if (name == "identity") {
        r.phi = [](double, double x, const BrownianPath&) { return x; };
        r.dphi = [](double, double, const BrownianPath&) { return 1.0; };
        r.d2phi = zero;
        r.g = zero;
        r.v = zero;
        r.dv = zero;
    } else if (name == "quadratic") {
        r.phi = [](double t, double x, const BrownianPath&) { return x + t * x * x; };
        r.dphi = [](double t, double x, const BrownianPath&) { return 1.0 + 2.0 * t * x; };
        r.d2phi = [](double t, double, const BrownianPath&) { return 2.0 * t; };
        r.g = [](double, double x, const BrownianPath&) { return x * x; };
        r.v = zero;
        r.dv = zero;
    } else if (name == "linear-noise") {
        r.phi = [](double t, double x, const BrownianPath& p) {
            return x * (1.0 + p.value_at(t));
        };
        r.dphi = [](double t, double, const BrownianPath& p) { return 1.0 + p.value_at(t); };
        r.d2phi = zero;
        r.g = zero;
        r.v = [](double, double x, const BrownianPath&) { return x; };
        r.dv = [](double, double, const BrownianPath&) { return 1.0; };
    } else {
        throw std::invalid_argument("unknown recipe: " + name);
    }
    return r;
}

double ito_wentzell_check(const ItoWentzellRecipe& recipe, const BrownianEnsemble& ens,
                          bool drop_cross, std::size_t workers) {
    std::vector<double> sup(ens.size(), 0.0);
    parallel_for(ens.size(), workers, [&](std::size_t i) {
        const auto& p = ens.paths[i];
        const TimeGrid tg = p.grid();
        const double dt = tg.dt();
        double x = recipe.x0, rhs = recipe.phi(0.0, recipe.x0, p);
        for (std::size_t k = 0; k < tg.steps; ++k) {
            const double t = tg.t(k);
            const double dw = p.increment(k, 0);
            const double gamma = recipe.gamma(t, x);
            const double dx = recipe.beta(t, x) * dt + gamma * dw;
            rhs += recipe.g(t, x, p) * dt + recipe.v(t, x, p) * dw + recipe.dphi(t, x, p) * dx +
                   0.5 * recipe.d2phi(t, x, p) * gamma * gamma * dt;
            if (!drop_cross) rhs += recipe.dv(t, x, p) * gamma * dt;
            x += dx;
            sup[i] = std::max(sup[i], std::abs(recipe.phi(tg.t(k + 1), x, p) - rhs));
        }
    });
    double mean = 0.0;
    for (double v : sup) mean += v;
    return mean / static_cast<double>(ens.size());
}

}  // namespace sdelab
