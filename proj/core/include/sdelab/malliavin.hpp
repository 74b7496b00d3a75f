#pragma once

#include <functional>
#include <optional>

#include "sdelab/paths.hpp"

namespace sdelab {

/// Scalar Wiener functional with optional analytic derivative data (d = 1).
struct PathFunctional {
    std::function<double(const BrownianPath&)> eval;
    /// DF(path) as a step function on the grid (one value per step), or empty.
    std::function<std::vector<double>(const BrownianPath&)> malliavin;
    /// Analytic E^t D_t F at step index t, or empty.
    std::function<double(const BrownianPath&, std::size_t)> conditional_derivative;

    bool has_malliavin() const { return static_cast<bool>(malliavin); }
};

/// Named registry used by the CLI: w1, w1sq, expmart, integral-of-w.
PathFunctional make_functional(const std::string& name);

/// Nested Monte Carlo setup for E^t X = E(X | F_t).
struct ConditionalConfig {
    std::size_t inner_samples = 64;  // K >= 2
    std::uint64_t master_seed = 0;
};

struct MonteCarloValue {
    double mean = 0.0;
    double std_error = 0.0;
};

/// (F(path + eps int h) - F(path)) / eps.
double directional_derivative(const PathFunctional& F, const BrownianPath& path,
                              const CameronMartinDirection& h, double eps);

struct CriterionReport {
    std::vector<double> eps;
    std::vector<double> lq_error;  // E |D^h_eps F - <DF,h>|^q over the ensemble
    double slope = 0.0;            // log-log fit of error vs eps
};

/// Convergence of the finite-difference derivative to <DF, h>_H in L^q.
CriterionReport derivative_criterion_check(const PathFunctional& F, const BrownianEnsemble& ens,
                                           const CameronMartinDirection& h, double q,
                                           const std::vector<double>& eps_seq);

/// E(F | F_{t_k}) by freezing increments on [0, t_k] and averaging K fresh
/// continuations.  Inner streams are keyed by (outer_index, t_k, inner index)
/// so the estimator is deterministic.
MonteCarloValue conditional_expectation(const PathFunctional& F, std::size_t t_index,
                                        const BrownianPath& path, std::size_t outer_index,
                                        const ConditionalConfig& cfg);

/// The continuation path used by conditional_expectation (exposed for reuse).
BrownianPath continuation_path(const BrownianPath& path, std::size_t t_index,
                               std::size_t outer_index, std::size_t inner_index,
                               std::uint64_t master_seed);

struct ClarkOconeReport {
    double functional_mean = 0.0;
    std::vector<double> abs_error;  // per path |F - reconstruction|
    double mean_abs_error = 0.0;
};

/// F ~ E F + sum_k E^{t_k} D_{t_k} F . dW_k per path.  Uses the analytic
/// conditional derivative when available, nested MC otherwise.
ClarkOconeReport clark_ocone_reconstruct(const PathFunctional& F, const BrownianEnsemble& ens,
                                         const ConditionalConfig& cfg, std::size_t workers = 1);

/// Non-adapted absolutely continuous process y_t = y_0 + int_0^t ydot_r dr
/// with analytic Malliavin data for the decomposition identity of E^t y_t.
struct EtyProcess {
    PathFunctional y0;
    /// ydot at step index s
    std::function<double(const BrownianPath&, std::size_t)> ydot;
    /// D at step r of ydot at step s
    std::function<double(const BrownianPath&, std::size_t, std::size_t)> ydot_malliavin;
};

struct EtyReport {
    std::vector<double> mean_abs_residual;  // per grid time
    double sup_residual = 0.0;              // sup over t of mean |lhs - rhs|
};

/// Checks E^t y_t = E y_0 + int_0^t E^s ydot_s ds + int_0^t E^s y_{s,s} dW_s
/// on each path of the ensemble (left-point sums, nested MC conditionals).
EtyReport ety_decompose(const EtyProcess& y, const BrownianEnsemble& ens,
                        const ConditionalConfig& cfg, std::size_t workers = 1);

}  // namespace sdelab
