#pragma once

#include <functional>
#include <string>

#include "sdelab/kolmogorov.hpp"
#include "sdelab/malliavin.hpp"

namespace sdelab {

/// Coefficients of dX = b dt + sigma dW and of the associated backward
/// operator, as callables of (t, x, path), with analytic Malliavin derivative
/// fields D_s(.) supplied as callables of (s, t, x, path).  a = sigma^2 / 2.
struct CoefficientModel {
    std::string name;
    std::function<double(double, double, const BrownianPath&)> sigma, b, c, f;
    std::function<double(double, double, double, const BrownianPath&)> d_sigma, d_b, d_c, d_f;

    double Lambda = 1.0;        // ellipticity + drift Hoelder budget
    double Lambda_prime = 0.0;  // bound on the Malliavin derivative fields
    double alpha = 0.5;
    double p = 4.0;
    bool deterministic = false;  // no path dependence anywhere

    /// Spot-checks on a probe lattice: a within [Lambda^-1, Lambda], direct
    /// Hoelder-alpha norm of b(t, ., path) <= Lambda, |D_s b| <= Lambda_prime.
    void validate(const BrownianPath& probe, const SpaceGrid& grid) const;
};

/// Registry: deterministic, example12, w-dependent.
CoefficientModel make_model(const std::string& name);

/// Samples a, b, c, f along the path onto (path grid) x (space grid).
/// mollify_m > 0 replaces each b slice by b * rho_m.
CoefficientSlice model_slices(const CoefficientModel& model, const BrownianPath& path,
                              const SpaceGrid& grid, double mollify_m = 0.0);

/// The Malliavin-derivative fields at fixed s = t_{s_index}, sampled the
/// same way (da = sigma * d_sigma).
struct DerivativeSlices {
    SpaceTimeField da, db, dc, df;
};

DerivativeSlices model_derivative_slices(const CoefficientModel& model, const BrownianPath& path,
                                         std::size_t s_index, const SpaceGrid& grid,
                                         double mollify_m = 0.0);

}  // namespace sdelab
