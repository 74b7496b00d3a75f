#include "sdelab/paths.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sdelab {

BrownianPath::BrownianPath(TimeGrid grid, std::size_t dimension)
    : grid_(grid), dim_(dimension), inc_(grid.steps * dimension, 0.0) {
    if (grid.steps == 0 || grid.t_end <= 0.0) throw std::invalid_argument("degenerate time grid");
    if (dimension == 0) throw std::invalid_argument("dimension must be >= 1");
}

double BrownianPath::value(std::size_t k, std::size_t comp) const {
    if (dirty_) {
        cum_.assign((grid_.steps + 1) * dim_, 0.0);
        for (std::size_t j = 0; j < grid_.steps; ++j)
            for (std::size_t c = 0; c < dim_; ++c)
                cum_[(j + 1) * dim_ + c] = cum_[j * dim_ + c] + inc_[j * dim_ + c];
        dirty_ = false;
    }
    return cum_[k * dim_ + comp];
}

double BrownianPath::value_at(double t, std::size_t comp) const {
    const double dt = grid_.dt();
    const double pos = t / dt;
    auto k = static_cast<std::size_t>(pos);
    if (k >= grid_.steps) return value(grid_.steps, comp);
    const double frac = pos - static_cast<double>(k);
    return value(k, comp) + frac * increment(k, comp);
}

CameronMartinDirection CameronMartinDirection::constant(TimeGrid grid, double v, std::size_t d) {
    return {grid, std::vector<double>(grid.steps * d, v)};
}

double CameronMartinDirection::at(std::size_t step, std::size_t comp) const {
    return values[step * dimension() + comp];
}

double CameronMartinDirection::squared_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s * grid.dt();
}

BrownianPath sample_path(const SeedSpec& seed, const TimeGrid& grid, std::size_t dimension) {
    BrownianPath p(grid, dimension);
    const double sd = std::sqrt(grid.dt());
    for (std::size_t k = 0; k < grid.steps; ++k)
        for (std::size_t c = 0; c < dimension; ++c)
            p.increment(k, c) = sd * normal_draw(seed, k, static_cast<std::uint32_t>(c));
    p.value(0);  // warm the prefix-sum cache before the path is shared
    return p;
}

BrownianEnsemble sample_ensemble(const SeedSpec& seed, std::size_t count, const TimeGrid& grid,
                                 std::size_t dimension) {
    if (count == 0) throw std::invalid_argument("ensemble count must be >= 1");
    BrownianEnsemble e;
    e.paths.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SeedSpec s = seed;
        s.path_index += i;
        e.paths.push_back(sample_path(s, grid, dimension));
    }
    return e;
}

BrownianPath shift_path(const BrownianPath& path, const CameronMartinDirection& h, double eps) {
    if (!(h.grid == path.grid()) || h.dimension() != path.dimension())
        throw std::invalid_argument("shift_path: grid mismatch");
    BrownianPath out = path;
    const double dt = path.grid().dt();
    for (std::size_t k = 0; k < path.grid().steps; ++k)
        for (std::size_t c = 0; c < path.dimension(); ++c)
            out.increment(k, c) += eps * h.at(k, c) * dt;
    return out;
}

double girsanov_density(const BrownianPath& path, const CameronMartinDirection& h, double theta) {
    if (!(h.grid == path.grid()) || h.dimension() != path.dimension())
        throw std::invalid_argument("girsanov_density: grid mismatch");
    double ito = 0.0;
    for (std::size_t k = 0; k < path.grid().steps; ++k)
        for (std::size_t c = 0; c < path.dimension(); ++c)
            ito += h.at(k, c) * path.increment(k, c);
    const double expo = theta * ito - 0.5 * theta * theta * h.squared_norm();
    if (expo > 700.0) throw std::overflow_error("girsanov_density: exponent overflow");
    return std::exp(expo);
}

void dump_path_csv(const BrownianPath& path, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "t";
    for (std::size_t c = 1; c <= path.dimension(); ++c) out << ",w_" << c;
    out << "\n";
    char buf[64];
    for (std::size_t k = 0; k <= path.grid().steps; ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", path.grid().t(k));
        out << buf;
        for (std::size_t c = 0; c < path.dimension(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", path.value(k, c));
            out << ',' << buf;
        }
        out << "\n";
    }
}

}  // namespace sdelab
