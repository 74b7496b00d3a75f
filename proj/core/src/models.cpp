#include "sdelab/models.hpp"

#include <cmath>
#include <stdexcept>

namespace sdelab {

namespace {

double holder_half_drift(double x) { return std::sqrt(std::abs(std::sin(x))); }

std::function<double(double, double, double, const BrownianPath&)> zero4() {
    return [](double, double, double, const BrownianPath&) { return 0.0; };
}

}  // namespace

CoefficientModel make_model(const std::string& name) {
    CoefficientModel m;
    m.name = name;
    m.sigma = [](double, double, const BrownianPath&) { return 1.0; };
    m.c = [](double, double, const BrownianPath&) { return 0.0; };
    m.d_sigma = zero4();
    m.d_c = zero4();
    m.alpha = 0.5;
    m.p = 4.0;

    if (name == "deterministic") {
        m.b = [](double, double x, const BrownianPath&) { return holder_half_drift(x); };
        m.d_b = zero4();
        m.d_f = zero4();
        m.Lambda = 4.0;
        m.Lambda_prime = 0.0;
        m.deterministic = true;
    } else if (name == "example12") {
        // smooth drift of the path's running value: b(t, x) = 0.5 sin(x + W_t)
        m.b = [](double t, double x, const BrownianPath& p) {
            return 0.5 * std::sin(x + p.value_at(t));
        };
        m.d_b = [](double s, double t, double x, const BrownianPath& p) {
            return s < t ? 0.5 * std::cos(x + p.value_at(t)) : 0.0;
        };
        m.Lambda = 4.0;
        m.Lambda_prime = 4.0;
    } else if (name == "w-dependent") {
        // Hoelder-in-x factor times a smooth function of W_t
        m.b = [](double t, double x, const BrownianPath& p) {
            return holder_half_drift(x) * (0.5 + 0.3 * std::sin(p.value_at(t)));
        };
        m.d_b = [](double s, double t, double x, const BrownianPath& p) {
            return s < t ? holder_half_drift(x) * 0.3 * std::cos(p.value_at(t)) : 0.0;
        };
        m.Lambda = 4.0;
        m.Lambda_prime = 4.0;
    } else {
        throw std::invalid_argument("unknown model: " + name);
    }
    m.f = m.b;  // source equals the drift: phi = id + u removes it
    if (!m.d_f) m.d_f = m.d_b;
    return m;
}

void CoefficientModel::validate(const BrownianPath& probe, const SpaceGrid& grid) const {
    const double T = probe.grid().t_end;
    for (double t : {0.0, 0.5 * T, T}) {
        std::vector<double> bs(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.x(i);
            const double a = 0.5 * sigma(t, x, probe) * sigma(t, x, probe);
            if (a < (1.0 / Lambda) * (1.0 - 1e-9) || a > Lambda * (1.0 + 1e-9))
                throw std::invalid_argument("model " + name + ": a outside ellipticity band");
            bs[i] = b(t, x, probe);
            for (double s : {0.0, 0.5 * t}) {
                if (std::abs(d_b(s, t, x, probe)) > Lambda_prime * (1.0 + 1e-9))
                    throw std::invalid_argument("model " + name + ": |D_s b| exceeds bound");
            }
        }
        if (holder_norm_direct(bs, alpha, grid) > Lambda)
            throw std::invalid_argument("model " + name + ": drift Hoelder norm exceeds bound");
    }
}

CoefficientSlice model_slices(const CoefficientModel& model, const BrownianPath& path,
                              const SpaceGrid& grid, double mollify_m) {
    const TimeGrid tg = path.grid();
    CoefficientSlice sl;
    sl.a = SpaceTimeField(tg, grid);
    sl.b = SpaceTimeField(tg, grid);
    sl.c = SpaceTimeField(tg, grid);
    sl.f = SpaceTimeField(tg, grid);
    double amin = 1e300, amax = 0.0;
    for (std::size_t k = 0; k <= tg.steps; ++k) {
        const double t = tg.t(k);
        std::vector<double> bs(grid.n), fs(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.x(i);
            const double s = model.sigma(t, x, path);
            const double a = 0.5 * s * s;
            sl.a.at(k, i) = a;
            sl.c.at(k, i) = model.c(t, x, path);
            bs[i] = model.b(t, x, path);
            fs[i] = model.f(t, x, path);
            amin = std::min(amin, a);
            amax = std::max(amax, a);
        }
        if (mollify_m > 0.0) {
            bs = mollify(bs, grid, mollify_m);
            fs = mollify(fs, grid, mollify_m);
        }
        sl.b.set_slice(k, bs);
        sl.f.set_slice(k, fs);
    }
    sl.lambda_min = amin;
    sl.lambda_max = amax;
    sl.holder_const = model.Lambda;
    return sl;
}

DerivativeSlices model_derivative_slices(const CoefficientModel& model, const BrownianPath& path,
                                         std::size_t s_index, const SpaceGrid& grid,
                                         double mollify_m) {
    const TimeGrid tg = path.grid();
    const double s = tg.t(s_index);
    DerivativeSlices d;
    d.da = SpaceTimeField(tg, grid);
    d.db = SpaceTimeField(tg, grid);
    d.dc = SpaceTimeField(tg, grid);
    d.df = SpaceTimeField(tg, grid);
    for (std::size_t k = 0; k <= tg.steps; ++k) {
        const double t = tg.t(k);
        std::vector<double> dbs(grid.n), dfs(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.x(i);
            d.da.at(k, i) = model.sigma(t, x, path) * model.d_sigma(s, t, x, path);
            d.dc.at(k, i) = model.d_c(s, t, x, path);
            dbs[i] = model.d_b(s, t, x, path);
            dfs[i] = model.d_f(s, t, x, path);
        }
        if (mollify_m > 0.0) {
            dbs = mollify(dbs, grid, mollify_m);
            dfs = mollify(dfs, grid, mollify_m);
        }
        d.db.set_slice(k, dbs);
        d.df.set_slice(k, dfs);
    }
    return d;
}

}  // namespace sdelab
