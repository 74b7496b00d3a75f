#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sdelab/rng.hpp"

namespace sdelab {

/// Uniform grid on [0, T], t_k = k * dt, dt = T / steps.
struct TimeGrid {
    double t_end = 1.0;
    std::size_t steps = 1;

    double dt() const { return t_end / static_cast<double>(steps); }
    double t(std::size_t k) const { return static_cast<double>(k) * dt(); }
    bool operator==(const TimeGrid&) const = default;
};

/// Discretized d-dimensional Brownian path stored as N(0, dt) increments.
/// Values are prefix sums computed on demand, W(0) = 0.
class BrownianPath {
public:
    BrownianPath(TimeGrid grid, std::size_t dimension);

    const TimeGrid& grid() const { return grid_; }
    std::size_t dimension() const { return dim_; }

    double& increment(std::size_t step, std::size_t comp) {
        dirty_ = true;
        return inc_[step * dim_ + comp];
    }
    double increment(std::size_t step, std::size_t comp) const { return inc_[step * dim_ + comp]; }

    /// W(t_k), prefix sum of the first k increments.  The prefix sums are
    /// cached; the cache rebuild after mutation is not thread-safe, so warm a
    /// path (any value() call) before sharing it across workers read-only.
    double value(std::size_t k, std::size_t comp = 0) const;

    /// Linear interpolation of the piecewise-linear path at arbitrary t.
    double value_at(double t, std::size_t comp = 0) const;

private:
    TimeGrid grid_;
    std::size_t dim_;
    std::vector<double> inc_;
    mutable std::vector<double> cum_;
    mutable bool dirty_ = true;
};

/// Piecewise-constant Cameron-Martin direction h on the grid;
/// the induced shift of a path is eps * int_0^. h ds.
struct CameronMartinDirection {
    TimeGrid grid;
    std::vector<double> values;  // steps * d, constant on [t_k, t_{k+1})

    static CameronMartinDirection constant(TimeGrid grid, double value, std::size_t d = 1);

    double at(std::size_t step, std::size_t comp = 0) const;
    std::size_t dimension() const { return values.size() / grid.steps; }
    /// |h|_H^2 = sum |h_k|^2 dt
    double squared_norm() const;
};

struct BrownianEnsemble {
    std::vector<BrownianPath> paths;

    std::size_t size() const { return paths.size(); }
    const BrownianPath& operator[](std::size_t i) const { return paths[i]; }
};

/// `count` independent paths; bit-identical for identical SeedSpec.
/// Path i uses path_index = seed.path_index + i.
BrownianEnsemble sample_ensemble(const SeedSpec& seed, std::size_t count, const TimeGrid& grid,
                                 std::size_t dimension);

/// Single path for the given spec.
BrownianPath sample_path(const SeedSpec& seed, const TimeGrid& grid, std::size_t dimension);

/// omega -> omega + eps * int h ds, i.e. increment_k += eps * h_k * dt.
BrownianPath shift_path(const BrownianPath& path, const CameronMartinDirection& h, double eps);

/// Girsanov density E(theta h) = exp(theta sum h.dW - theta^2/2 |h|_H^2).
/// Throws on overflow instead of returning inf.
double girsanov_density(const BrownianPath& path, const CameronMartinDirection& h, double theta);

/// CSV dump: header "t,w_1..w_d", one row per grid point, 17 significant digits.
void dump_path_csv(const BrownianPath& path, const std::string& filename);

}  // namespace sdelab
