#include "sdelab/malliavin.hpp"

#include <cmath>
#include <stdexcept>

#include "sdelab/parallel.hpp"

namespace sdelab {

namespace {

double inner_product_h(const std::vector<double>& df, const CameronMartinDirection& h) {
    double s = 0.0;
    for (std::size_t k = 0; k < df.size(); ++k) s += df[k] * h.at(k);
    return s * h.grid.dt();
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    // least squares in log-log, skipping values at the noise floor
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] < 1e-14) continue;
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace

PathFunctional make_functional(const std::string& name) {
    PathFunctional F;
    if (name == "w1") {
        F.eval = [](const BrownianPath& p) { return p.value(p.grid().steps); };
        F.malliavin = [](const BrownianPath& p) {
            return std::vector<double>(p.grid().steps, 1.0);
        };
        F.conditional_derivative = [](const BrownianPath&, std::size_t) { return 1.0; };
    } else if (name == "w1sq") {
        F.eval = [](const BrownianPath& p) {
            const double w = p.value(p.grid().steps);
            return w * w;
        };
        F.malliavin = [](const BrownianPath& p) {
            return std::vector<double>(p.grid().steps, 2.0 * p.value(p.grid().steps));
        };
        F.conditional_derivative = [](const BrownianPath& p, std::size_t t) {
            return 2.0 * p.value(t);
        };
    } else if (name == "expmart") {
        F.eval = [](const BrownianPath& p) {
            return std::exp(p.value(p.grid().steps) - 0.5 * p.grid().t_end);
        };
        F.malliavin = [](const BrownianPath& p) {
            const double f = std::exp(p.value(p.grid().steps) - 0.5 * p.grid().t_end);
            return std::vector<double>(p.grid().steps, f);
        };
        F.conditional_derivative = [](const BrownianPath& p, std::size_t t) {
            return std::exp(p.value(t) - 0.5 * p.grid().t(t));
        };
    } else if (name == "integral-of-w") {
        // left-point sum of int_0^T W dt; its derivative in increment k is
        // exactly T - t_{k+1} on the grid
        F.eval = [](const BrownianPath& p) {
            double s = 0.0, w = 0.0;
            for (std::size_t k = 0; k < p.grid().steps; ++k) {
                s += w * p.grid().dt();
                w += p.increment(k, 0);
            }
            return s;
        };
        F.malliavin = [](const BrownianPath& p) {
            std::vector<double> df(p.grid().steps);
            for (std::size_t k = 0; k < df.size(); ++k)
                df[k] = p.grid().t_end - p.grid().t(k + 1);
            return df;
        };
        F.conditional_derivative = [](const BrownianPath& p, std::size_t t) {
            return t < p.grid().steps ? p.grid().t_end - p.grid().t(t + 1) : 0.0;
        };
    } else {
        throw std::invalid_argument("unknown functional: " + name);
    }
    return F;
}

double directional_derivative(const PathFunctional& F, const BrownianPath& path,
                              const CameronMartinDirection& h, double eps) {
    if (eps == 0.0) throw std::invalid_argument("directional_derivative: eps must be nonzero");
    return (F.eval(shift_path(path, h, eps)) - F.eval(path)) / eps;
}

CriterionReport derivative_criterion_check(const PathFunctional& F, const BrownianEnsemble& ens,
                                           const CameronMartinDirection& h, double q,
                                           const std::vector<double>& eps_seq) {
    if (!F.has_malliavin())
        throw std::invalid_argument("derivative_criterion_check: analytic DF required");
    CriterionReport rep;
    rep.eps = eps_seq;
    for (double eps : eps_seq) {
        double acc = 0.0;
        for (const auto& p : ens.paths) {
            const double fd = directional_derivative(F, p, h, eps);
            const double exact = inner_product_h(F.malliavin(p), h);
            acc += std::pow(std::abs(fd - exact), q);
        }
        rep.lq_error.push_back(acc / static_cast<double>(ens.size()));
    }
    rep.slope = fit_slope(rep.eps, rep.lq_error);
    return rep;
}

BrownianPath continuation_path(const BrownianPath& path, std::size_t t_index,
                               std::size_t outer_index, std::size_t inner_index,
                               std::uint64_t master_seed) {
    BrownianPath out = path;
    const SeedSpec spec{master_seed, outer_index,
                        0x8000000000000000ull | (static_cast<std::uint64_t>(t_index) << 32) |
                            inner_index};
    const double sd = std::sqrt(path.grid().dt());
    for (std::size_t k = t_index; k < path.grid().steps; ++k)
        for (std::size_t c = 0; c < path.dimension(); ++c)
            out.increment(k, c) = sd * normal_draw(spec, k, static_cast<std::uint32_t>(c));
    return out;
}

MonteCarloValue conditional_expectation(const PathFunctional& F, std::size_t t_index,
                                        const BrownianPath& path, std::size_t outer_index,
                                        const ConditionalConfig& cfg) {
    if (cfg.inner_samples < 2)
        throw std::invalid_argument("conditional_expectation: K must be >= 2");
    double sum = 0.0, sum2 = 0.0;
    const auto K = static_cast<double>(cfg.inner_samples);
    for (std::size_t j = 0; j < cfg.inner_samples; ++j) {
        const double v =
            F.eval(continuation_path(path, t_index, outer_index, j, cfg.master_seed));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / K;
    const double var = std::max(0.0, sum2 / K - mean * mean);
    return {mean, std::sqrt(var / K)};
}

ClarkOconeReport clark_ocone_reconstruct(const PathFunctional& F, const BrownianEnsemble& ens,
                                         const ConditionalConfig& cfg, std::size_t workers) {
    if (!F.conditional_derivative && !F.has_malliavin())
        throw std::invalid_argument("clark_ocone_reconstruct: no derivative data");
    ClarkOconeReport rep;
    double mean = 0.0;
    for (const auto& p : ens.paths) mean += F.eval(p);
    mean /= static_cast<double>(ens.size());
    rep.functional_mean = mean;

    rep.abs_error.assign(ens.size(), 0.0);
    parallel_for(ens.size(), workers, [&](std::size_t i) {
        const auto& p = ens.paths[i];
        double recon = mean;
        for (std::size_t k = 0; k < p.grid().steps; ++k) {
            double etd;
            if (F.conditional_derivative) {
                etd = F.conditional_derivative(p, k);
            } else {
                PathFunctional G;
                const auto* base = &F;
                G.eval = [base, k](const BrownianPath& q) { return base->malliavin(q)[k]; };
                etd = conditional_expectation(G, k, p, i, cfg).mean;
            }
            recon += etd * p.increment(k, 0);
        }
        rep.abs_error[i] = std::abs(F.eval(p) - recon);
    });
    for (double e : rep.abs_error) rep.mean_abs_error += e;
    rep.mean_abs_error /= static_cast<double>(ens.size());
    return rep;
}

EtyReport ety_decompose(const EtyProcess& y, const BrownianEnsemble& ens,
                        const ConditionalConfig& cfg, std::size_t workers) {
    if (!y.y0.has_malliavin() || !y.ydot_malliavin)
        throw std::invalid_argument("ety_decompose: analytic Malliavin data required");
    const TimeGrid grid = ens.paths.at(0).grid();
    const double dt = grid.dt();
    const std::size_t m = grid.steps;

    double ey0 = 0.0;
    for (const auto& p : ens.paths) ey0 += y.y0.eval(p);
    ey0 /= static_cast<double>(ens.size());

    std::vector<std::vector<double>> residual(ens.size());
    parallel_for(ens.size(), workers, [&](std::size_t i) {
        const auto& p = ens.paths[i];
        std::vector<double> res(m + 1, 0.0);
        double drift = 0.0, mart = 0.0;
        for (std::size_t t = 0; t <= m; ++t) {
            // lhs: E^t of y_t = y_0 + sum_{s<t} ydot_s dt
            PathFunctional Yt;
            Yt.eval = [&y, t, dt](const BrownianPath& q) {
                double v = y.y0.eval(q);
                for (std::size_t s = 0; s < t; ++s) v += y.ydot(q, s) * dt;
                return v;
            };
            const double lhs = conditional_expectation(Yt, t, p, i, cfg).mean;
            res[t] = std::abs(lhs - (ey0 + drift + mart));
            if (t == m) break;

            // advance the right-hand side with left-point sums
            PathFunctional Ydot;
            Ydot.eval = [&y, t](const BrownianPath& q) { return y.ydot(q, t); };
            drift += conditional_expectation(Ydot, t, p, i, cfg).mean * dt;

            PathFunctional Yss;  // y_{t,t} = D_t y_0 + sum_{r<t} D_t ydot_r dt
            Yss.eval = [&y, t, dt](const BrownianPath& q) {
                double v = y.y0.malliavin(q)[t];
                for (std::size_t r = 0; r < t; ++r) v += y.ydot_malliavin(q, t, r) * dt;
                return v;
            };
            mart += conditional_expectation(Yss, t, p, i, cfg).mean * p.increment(t, 0);
        }
        residual[i] = std::move(res);
    });

    EtyReport rep;
    rep.mean_abs_residual.assign(m + 1, 0.0);
    for (std::size_t t = 0; t <= m; ++t) {
        for (std::size_t i = 0; i < ens.size(); ++i)
            rep.mean_abs_residual[t] += residual[i][t];
        rep.mean_abs_residual[t] /= static_cast<double>(ens.size());
        rep.sup_residual = std::max(rep.sup_residual, rep.mean_abs_residual[t]);
    }
    return rep;
}

}  // namespace sdelab
