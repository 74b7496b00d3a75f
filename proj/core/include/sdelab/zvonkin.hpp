#pragma once

#include "sdelab/bspde.hpp"

namespace sdelab {

/// phi_t(x) = x + u_t(x) with cached gradient slices; requires the gradient
/// bound g* = sup||grad u|| <= 1/2 so that phi is bi-Lipschitz (1/2, 3/2).
struct ZvonkinFrame {
    SpaceTimeField u, v;
    std::vector<std::vector<double>> u_slices, v_slices;  // cached copies per time index
    std::vector<std::vector<double>> du, dv_slices;       // cached spatial gradients
    double grad_bound = 0.0;

    double phi(std::size_t k, double x) const;
    double grad_phi(std::size_t k, double x) const;
    /// fixed point x <- y - u_t(x); contraction factor <= g*
    double invert(std::size_t k, double y) const { return invert(k, y, y); }
    double invert(std::size_t k, double y, double guess) const;
};

ZvonkinFrame build_phi(const SpaceTimeField& u, const SpaceTimeField& v);

struct HorizonReport {
    double horizon = 0.0;
    double grad_norm = 0.0;  // achieved sup||grad u||
    std::size_t steps = 0;   // time steps used at the returned horizon
};

/// Halves T until the measured gradient of the drift-removing solution stays
/// below 0.45 (the 1/2 bound with 10% margin).  Throws if no T >= t_min works.
HorizonReport choose_horizon(const CoefficientModel& model, const SpaceGrid& grid,
                             double t_start = 1.0, double t_min = 1e-3);

struct TransformedCoefficients {
    std::function<double(std::size_t, double)> b_tilde;      // (time index, y)
    std::function<double(std::size_t, double)> sigma_tilde;  // (time index, y)
    double lipschitz_probe = 0.0;  // max probe ratio in the half box
    double k_bound = 0.0;          // ||u||_C2 + ||v||_C2 on the lattice
};

/// b~ = (grad v . sigma) o phi^-1, sigma~ = (grad phi sigma + v) o phi^-1.
TransformedCoefficients transform_coefficients(const ZvonkinFrame& frame,
                                               const CoefficientModel& model,
                                               const BrownianPath& path, double box_n = 8.0);

struct SdePaths {
    std::vector<std::vector<double>> x;  // per path, steps+1 samples
    std::vector<char> excluded;          // left the |y| <= N/2 box
    double excluded_fraction = 0.0;
};

SdePaths euler_direct(const CoefficientModel& model, double x0, const BrownianEnsemble& ens,
                      std::size_t workers = 1);

SdePaths euler_transformed(const ZvonkinFrame& frame, const TransformedCoefficients& tc,
                           double x0, const BrownianEnsemble& ens, double box_n = 8.0,
                           std::size_t workers = 1);

struct BranchReport {
    double residual_flat = 0.0;       // branch X = W of dX = (sqrt|X - W| ^ 1)dt + dW
    double residual_quadratic = 0.0;  // branch X = t^2/4 + W
    double euler_zero_terminal = 0.0; // |Y_1| started from 0
    double euler_delta_gap = 0.0;     // |Y_1 - 1/4| started from delta
};

BranchReport nonuniqueness_demo(double dt, double delta, std::uint64_t seed);

struct UcpRow {
    double m = 0.0;
    double mean_sup = 0.0;  // E sup_{t <= T/2} |X^m - X^{2m}|
    double std_err = 0.0;
};

/// Common driving noise across all mollification levels.
std::vector<UcpRow> ucp_cauchy_experiment(const CoefficientModel& model,
                                          const std::vector<double>& m_levels, double x0,
                                          const BrownianEnsemble& ens, const SpaceGrid& grid,
                                          std::size_t workers = 1);

/// phi_t(x) = phi_0(x) + int_0^t g ds + int_0^t v dW with exact partials,
/// evaluated along dX = beta dt + gamma dW.
struct ItoWentzellRecipe {
    std::function<double(double, double, const BrownianPath&)> phi, dphi, d2phi, g, v, dv;
    std::function<double(double, double)> beta, gamma;
    double x0 = 0.0;
};

/// Registry: identity, quadratic (phi = x + t x^2, X = W),
/// linear-noise (phi = x (1 + W_t), X = W; exercises the cross-variation term).
ItoWentzellRecipe make_ito_wentzell_recipe(const std::string& name);

/// Mean over paths of the sup discrete residual of the five-term formula.
/// drop_cross omits the cross-variation term (negative control).
double ito_wentzell_check(const ItoWentzellRecipe& recipe, const BrownianEnsemble& ens,
                          bool drop_cross = false, std::size_t workers = 1);

}  // namespace sdelab
