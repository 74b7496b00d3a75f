#pragma once

#include <array>
#include <functional>

#include "sdelab/fields.hpp"

namespace sdelab {

/// Symmetric matrix, dimensions 1 or 2, stored as [a00, a01, a11].
struct SymMat {
    int dim = 1;
    std::array<double, 3> m = {0.0, 0.0, 0.0};

    static SymMat scalar(double v) { return {1, {v, 0.0, 0.0}}; }

    double quad(const std::array<double, 2>& x) const;  // <x, M x>
    double det() const;
    SymMat inverse() const;
    SymMat& operator+=(const SymMat& o);
    SymMat& operator*=(double s);
    /// eigenvalues (ascending)
    std::array<double, 2> eigenvalues() const;
};

/// Time-dependent, x-independent diffusion matrix a(t) with ellipticity
/// bounds lambda_min |xi|^2 <= <xi, a(t) xi> <= lambda_max |xi|^2.
struct DiffusionSchedule {
    int dim = 1;
    std::function<SymMat(double)> a;
    double lambda_min = 0.0;
    double lambda_max = 0.0;

    static DiffusionSchedule constant(double value);

    /// checks the bounds on a probe lattice of t; throws on violation
    void validate(double t0 = 0.0, double t1 = 1.0) const;
};

/// A_{t,s} = int_t^s a(r) dr by composite Simpson quadrature.
struct KernelAccumulator {
    SymMat A;
    double t = 0.0, s = 0.0;
};

KernelAccumulator accumulate_A(const DiffusionSchedule& a, double t, double s);

/// Heat kernel value (det 4 pi A)^{-1/2} exp(-<x, A^{-1} x>/4); integrates to
/// one and has Fourier transform exp(-<xi, A xi>).
double kernel_eval(const KernelAccumulator& acc, const std::array<double, 2>& x);
double kernel_eval(const KernelAccumulator& acc, double x);

/// P^a_{t,s} f by periodic FFT convolution with the sampled kernel (dim 1).
/// Throws if the kernel mass outside half the period exceeds 1e-8.
std::vector<double> semigroup_apply(const KernelAccumulator& acc, const std::vector<double>& f,
                                    const SpaceGrid& grid);

/// w_t = int_t^T P^a_{t,s} f_s ds, composite quadrature in s with subinterval
/// halving near s = t; the oracle against which the grid solver is checked.
BackwardSolution duhamel_solution(const DiffusionSchedule& a, const SpaceTimeField& f);

}  // namespace sdelab
