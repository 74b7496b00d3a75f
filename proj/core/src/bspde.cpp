#include "sdelab/bspde.hpp"

#include <cmath>
#include <stdexcept>

#include "sdelab/parallel.hpp"

namespace sdelab {

BackwardSolution solve_w(const CoefficientModel& model, const BrownianPath& path,
                         const SpaceGrid& grid, double mollify_m) {
    return solve_backward(model_slices(model, path, grid, mollify_m));
}

BackwardSolution solve_ws(const CoefficientModel& model, std::size_t s_index,
                          const BrownianPath& path, const BackwardSolution& w,
                          const SpaceGrid& grid, double mollify_m) {
    const DerivativeSlices d = model_derivative_slices(model, path, s_index, grid, mollify_m);
    CoefficientSlice sl = model_slices(model, path, grid, mollify_m);
    for (std::size_t k = 0; k <= path.grid().steps; ++k) {
        const auto w0 = w.slice(k);
        const auto w1 = w.d1(k);
        const auto w2 = w.d2(k);
        for (std::size_t i = 0; i < grid.n; ++i)
            sl.f.at(k, i) = d.da.at(k, i) * w2[i] + d.db.at(k, i) * w1[i] +
                            d.dc.at(k, i) * w0[i] + d.df.at(k, i);
    }
    return solve_backward(sl);
}

void solve_u(const CoefficientModel& model, const BrownianPath& path, std::size_t outer_index,
             const SpaceGrid& grid, const ConditionalConfig& cfg, BspdePair& out,
             double mollify_m) {
    const TimeGrid tg = path.grid();
    out.u = SpaceTimeField(tg, grid);
    out.u_err = SpaceTimeField(tg, grid);
    if (model.deterministic) {
        // degenerate conditioning: u = w, zero variance
        out.u = solve_w(model, path, grid, mollify_m).w;
        return;
    }
    const auto K = static_cast<double>(cfg.inner_samples);
    for (std::size_t t = 0; t < tg.steps; ++t) {  // u_T = 0 exactly, skip
        std::vector<double> sum(grid.n, 0.0), sum2(grid.n, 0.0);
        for (std::size_t j = 0; j < cfg.inner_samples; ++j) {
            const auto cont = continuation_path(path, t, outer_index, j, cfg.master_seed);
            const auto wt = solve_w(model, cont, grid, mollify_m).slice(t);
            for (std::size_t i = 0; i < grid.n; ++i) {
                sum[i] += wt[i];
                sum2[i] += wt[i] * wt[i];
            }
        }
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double mean = sum[i] / K;
            out.u.at(t, i) = mean;
            out.u_err.at(t, i) = std::sqrt(std::max(0.0, sum2[i] / K - mean * mean) / K);
        }
    }
}

std::vector<double> solve_v(const CoefficientModel& model, std::size_t s_index,
                            const BrownianPath& path, std::size_t outer_index,
                            const SpaceGrid& grid, const ConditionalConfig& cfg,
                            std::vector<double>* std_err, double mollify_m) {
    if (cfg.inner_samples < 2) throw std::invalid_argument("solve_v: K must be >= 2");
    const auto K = static_cast<double>(cfg.inner_samples);
    std::vector<double> sum(grid.n, 0.0), sum2(grid.n, 0.0);
    for (std::size_t j = 0; j < cfg.inner_samples; ++j) {
        const auto cont = continuation_path(path, s_index, outer_index, j, cfg.master_seed);
        const auto w = solve_w(model, cont, grid, mollify_m);
        const auto wss = solve_ws(model, s_index, cont, w, grid, mollify_m).slice(s_index);
        for (std::size_t i = 0; i < grid.n; ++i) {
            sum[i] += wss[i];
            sum2[i] += wss[i] * wss[i];
        }
    }
    std::vector<double> mean(grid.n);
    if (std_err) std_err->assign(grid.n, 0.0);
    for (std::size_t i = 0; i < grid.n; ++i) {
        mean[i] = sum[i] / K;
        if (std_err)
            (*std_err)[i] = std::sqrt(std::max(0.0, sum2[i] / K - mean[i] * mean[i]) / K);
    }
    return mean;
}

BspdePair build_pair(const CoefficientModel& model, const BrownianPath& path,
                     std::size_t outer_index, const SpaceGrid& grid,
                     const ConditionalConfig& cfg, double mollify_m) {
    BspdePair pair;
    solve_u(model, path, outer_index, grid, cfg, pair, mollify_m);
    const TimeGrid tg = path.grid();
    pair.v = SpaceTimeField(tg, grid);
    pair.v_err = SpaceTimeField(tg, grid);
    if (model.deterministic) return pair;  // v vanishes identically
    std::vector<double> err;
    for (std::size_t s = 0; s < tg.steps; ++s) {
        pair.v.set_slice(s, solve_v(model, s, path, outer_index, grid, cfg, &err, mollify_m));
        pair.v_err.set_slice(s, err);
    }
    return pair;
}

ResidualReport bspde_residual(const CoefficientModel& model, const BrownianEnsemble& ens,
                              const SpaceGrid& grid, const ConditionalConfig& cfg,
                              std::size_t workers, double mollify_m) {
    ResidualReport rep;
    rep.per_path.assign(ens.size(), 0.0);
    std::vector<double> vmax(ens.size(), 0.0);
    parallel_for(ens.size(), workers, [&](std::size_t i) {
        const auto& path = ens.paths[i];
        const TimeGrid tg = path.grid();
        const double dt = tg.dt();
        const double dx = grid.dx();
        const BspdePair pair = build_pair(model, path, i, grid, cfg, mollify_m);
        const CoefficientSlice sl = model_slices(model, path, grid, mollify_m);

        // Lu + f per slice from the averaged field u
        std::vector<std::vector<double>> lu(tg.steps);
        for (std::size_t s = 0; s < tg.steps; ++s) {
            const auto us = pair.u.slice(s);
            const auto u1 = fd_derivative(us, dx);
            const auto u2 = fd_second_derivative(us, dx);
            lu[s].resize(grid.n);
            for (std::size_t x = 0; x < grid.n; ++x)
                lu[s][x] = sl.a.at(s, x) * u2[x] + sl.b.at(s, x) * u1[x] +
                           sl.c.at(s, x) * us[x] + sl.f.at(s, x);
        }

        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t x = 0; x < grid.n; ++x) {
            double drift = 0.0, mart = 0.0;  // sums over [t, T), built backward
            for (std::size_t t = tg.steps; t-- > 0;) {
                drift += lu[t][x] * dt;
                mart += pair.v.at(t, x) * path.increment(t, 0);
                acc += std::abs(pair.u.at(t, x) - drift + mart);
                ++count;
                vmax[i] = std::max(vmax[i], std::abs(pair.v.at(t, x)));
            }
        }
        rep.per_path[i] = acc / static_cast<double>(count);
    });
    for (std::size_t i = 0; i < ens.size(); ++i) {
        rep.mean_abs += rep.per_path[i];
        rep.max_abs_v = std::max(rep.max_abs_v, vmax[i]);
    }
    rep.mean_abs /= static_cast<double>(ens.size());
    return rep;
}

std::vector<StabilityRow> stability_sweep(const CoefficientModel& model, const BrownianPath& path,
                                          const std::vector<double>& m_levels, double beta,
                                          const ConditionalConfig& cfg) {
    if (m_levels.size() < 2) throw std::invalid_argument("stability_sweep: need >= 2 levels");
    for (std::size_t i = 1; i < m_levels.size(); ++i)
        if (m_levels[i] <= m_levels[i - 1])
            throw std::invalid_argument("stability_sweep: levels must increase");
    // short period so every mollification level is resolved by the lattice
    const SpaceGrid grid{256, 2.0 * 3.14159265358979323846};
    const auto cutoffs = build_cutoffs(grid.n, grid.length);
    std::vector<BspdePair> pairs;
    for (double m : m_levels) pairs.push_back(build_pair(model, path, 0, grid, cfg, m));

    std::vector<StabilityRow> rows;
    for (std::size_t i = 0; i + 1 < m_levels.size(); ++i) {
        StabilityRow row;
        row.m = m_levels[i];
        for (std::size_t t = 0; t <= path.grid().steps; ++t) {
            auto du = pairs[i].u.slice(t);
            const auto du2 = pairs[i + 1].u.slice(t);
            for (std::size_t x = 0; x < grid.n; ++x) du[x] -= du2[x];
            row.du = std::max(row.du, holder_norm_dyadic_general(du, 2.0 + beta, cutoffs));
            if (t < path.grid().steps) {
                auto dv = pairs[i].v.slice(t);
                const auto dv2 = pairs[i + 1].v.slice(t);
                for (std::size_t x = 0; x < grid.n; ++x) dv[x] -= dv2[x];
                row.dv = std::max(row.dv, holder_norm_dyadic_general(dv, 2.0 + beta, cutoffs));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sdelab
