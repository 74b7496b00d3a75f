#pragma once

#include <vector>

#include "sdelab/lp.hpp"
#include "sdelab/paths.hpp"

namespace sdelab {

/// Real field on (time grid point) x (periodic space grid), row-major in time.
struct SpaceTimeField {
    TimeGrid tgrid;
    SpaceGrid xgrid;
    std::vector<double> data;  // (steps + 1) * n

    SpaceTimeField() = default;
    SpaceTimeField(TimeGrid tg, SpaceGrid xg)
        : tgrid(tg), xgrid(xg), data((tg.steps + 1) * xg.n, 0.0) {}

    double& at(std::size_t k, std::size_t i) { return data[k * xgrid.n + i]; }
    double at(std::size_t k, std::size_t i) const { return data[k * xgrid.n + i]; }

    std::vector<double> slice(std::size_t k) const {
        return {data.begin() + static_cast<std::ptrdiff_t>(k * xgrid.n),
                data.begin() + static_cast<std::ptrdiff_t>((k + 1) * xgrid.n)};
    }
    void set_slice(std::size_t k, const std::vector<double>& s) {
        std::copy(s.begin(), s.end(), data.begin() + static_cast<std::ptrdiff_t>(k * xgrid.n));
    }
};

/// 4th-order central first derivative, periodic.
std::vector<double> fd_derivative(const std::vector<double>& f, double dx);
/// 4th-order central second derivative, periodic.
std::vector<double> fd_second_derivative(const std::vector<double>& f, double dx);

/// Periodic cubic (Catmull-Rom) interpolation of a sampled field at x.
double interp_periodic(const std::vector<double>& f, const SpaceGrid& grid, double x);
/// Periodic linear interpolation.
double interp_linear(const std::vector<double>& f, const SpaceGrid& grid, double x);

/// Space-time solution of a backward equation with derivative accessors.
struct BackwardSolution {
    SpaceTimeField w;

    std::vector<double> slice(std::size_t k) const { return w.slice(k); }
    std::vector<double> d1(std::size_t k) const;
    std::vector<double> d2(std::size_t k) const;
    /// time derivative at t_k, one-sided at the terminal slice
    std::vector<double> dt_slice(std::size_t k) const;
};

/// Periodic mollification with the scaled bump rho_m(x) = m rho(m x),
/// rho a compactly supported C^inf bump of unit mass.
std::vector<double> mollify(const std::vector<double>& field, const SpaceGrid& grid, double m);

}  // namespace sdelab
