#pragma once

#include "sdelab/fields.hpp"

namespace sdelab {

/// Sampled coefficients of dt w + a dxx w + b dx w + c w + f = 0 for one
/// fixed path already substituted.
struct CoefficientSlice {
    SpaceTimeField a, b, c, f;
    double lambda_min = 0.0, lambda_max = 0.0;
    double holder_const = 0.0;  // Lambda of H1, informational

    void check() const;  // ellipticity + finiteness
};

/// Crank-Nicolson backward march from w_T = 0, periodic in space,
/// cyclic tridiagonal solve per step.
BackwardSolution solve_backward(const CoefficientSlice& slice);

/// Solves M x = r with M cyclic tridiagonal (Sherman-Morrison + Thomas).
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             const std::vector<double>& rhs);

struct SchauderReport {
    double dt_norm = 0.0;      // ||dt w||_alpha
    double sol_norm = 0.0;     // ||w||_{2+alpha}
    double zero_norm = 0.0;    // T^{-1} ||w||_0
    double source_norm = 0.0;  // ||f||_alpha
    double ratio = 0.0;
};

SchauderReport schauder_diagnostic(const BackwardSolution& w, const SpaceTimeField& f,
                                   double alpha);

struct InterpolationReport {
    double measured = 0.0;  // sup over time pairs ||w_t1 - w_t2||_{g1} / |t1-t2|^theta
    double bound = 0.0;     // ||dt w||_{g0}^theta ||w||_{g2}^{1-theta}
    double ratio = 0.0;
    double theta = 0.0;
};

InterpolationReport interpolation_diagnostic(const BackwardSolution& w, double gamma0,
                                             double gamma1, double gamma2);

}  // namespace sdelab
