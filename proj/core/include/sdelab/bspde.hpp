#pragma once

#include "sdelab/models.hpp"

namespace sdelab {

/// Adapted pair (u, v) along one outer path: u_t = E^t w_t and
/// v_s = E^s w^s_s, with nested-MC standard errors.  u_T = 0 exactly;
/// the terminal row of v is unused and kept at zero.
struct BspdePair {
    SpaceTimeField u, u_err;
    SpaceTimeField v, v_err;
};

/// Backward solve of the full-path Kolmogorov equation (no conditioning).
BackwardSolution solve_w(const CoefficientModel& model, const BrownianPath& path,
                         const SpaceGrid& grid, double mollify_m = 0.0);

/// w^s: same operator, source g^s = (D_s a) dxx w + (D_s b) dx w + (D_s c) w
/// + D_s f assembled from the model's analytic derivative fields.
BackwardSolution solve_ws(const CoefficientModel& model, std::size_t s_index,
                          const BrownianPath& path, const BackwardSolution& w,
                          const SpaceGrid& grid, double mollify_m = 0.0);

/// u_t(.) for every grid t by freezing the path on [0, t] and averaging the
/// w_t slice over K continuations.
void solve_u(const CoefficientModel& model, const BrownianPath& path, std::size_t outer_index,
             const SpaceGrid& grid, const ConditionalConfig& cfg, BspdePair& out,
             double mollify_m = 0.0);

/// v_s(.) = E^s w^s_s by the same nested average.
std::vector<double> solve_v(const CoefficientModel& model, std::size_t s_index,
                            const BrownianPath& path, std::size_t outer_index,
                            const SpaceGrid& grid, const ConditionalConfig& cfg,
                            std::vector<double>* std_err = nullptr, double mollify_m = 0.0);

BspdePair build_pair(const CoefficientModel& model, const BrownianPath& path,
                     std::size_t outer_index, const SpaceGrid& grid,
                     const ConditionalConfig& cfg, double mollify_m = 0.0);

struct ResidualReport {
    std::vector<double> per_path;  // mean |R| over (t, x) per path
    double mean_abs = 0.0;
    double max_abs_v = 0.0;  // sup |v| across the ensemble (structural checks)
};

/// R(t,x) = u_t - sum_{s>=t} (L_s u_s + f_s) dt + sum_{s>=t} v_s dW_s.
ResidualReport bspde_residual(const CoefficientModel& model, const BrownianEnsemble& ens,
                              const SpaceGrid& grid, const ConditionalConfig& cfg,
                              std::size_t workers = 1, double mollify_m = 0.0);

struct StabilityRow {
    double m = 0.0;       // coarser of the two consecutive levels
    double du = 0.0;      // sup_t dyadic C^{2+beta} distance of u^m vs u^{2m}
    double dv = 0.0;
};

/// Mollification sweep b -> b * rho_m on one representative path.
std::vector<StabilityRow> stability_sweep(const CoefficientModel& model, const BrownianPath& path,
                                          const std::vector<double>& m_levels, double beta,
                                          const ConditionalConfig& cfg);

}  // namespace sdelab
