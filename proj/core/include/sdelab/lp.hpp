#pragma once

#include <cstddef>
#include <vector>

namespace sdelab {

/// Periodic 1-D grid: x_i = i * length / n, i = 0..n-1.
struct SpaceGrid {
    std::size_t n = 256;
    double length = 16.0 * 3.14159265358979323846;

    double dx() const { return length / static_cast<double>(n); }
    double x(std::size_t i) const { return static_cast<double>(i) * dx(); }
    bool operator==(const SpaceGrid&) const = default;
};

/// Smooth dyadic cutoff family on the discrete frequency lattice of the grid:
/// chi = 1 on |xi| <= 1, chi = 0 on |xi| >= 3/2, phi_j(xi) = phi(2^-j xi) with
/// phi = chi - chi(2.), and phi_{-1} = chi(2.).  Sum_{j<=k} phi_j = chi(2^-k .).
struct DyadicCutoffs {
    SpaceGrid grid;
    int j_max = 0;
    std::vector<std::vector<double>> phi;  // phi[j+1] samples phi_j on the lattice
    std::vector<double> chi;               // chi on the lattice
    std::vector<double> phi_tilde;         // wider cutoff, support in B_{7/4} \ B_{1/4}; kept
                                           // for completeness, no operation consumes it

    const std::vector<double>& block(int j) const { return phi[static_cast<std::size_t>(j + 1)]; }
};

/// chi profile at scalar frequency magnitude (smooth bump interpolation
/// between radii 1 and 3/2).
double chi_profile(double r);

DyadicCutoffs build_cutoffs(std::size_t n, double length);

struct DyadicDecomposition {
    SpaceGrid grid;
    int j_max = 0;
    std::vector<std::vector<double>> blocks;  // blocks[j+1] = Delta_j f on the grid

    const std::vector<double>& block(int j) const {
        return blocks[static_cast<std::size_t>(j + 1)];
    }
    std::vector<double> reconstruct() const;
};

DyadicDecomposition decompose(const std::vector<double>& field, const DyadicCutoffs& cutoffs);

/// sup_j weight(j, alpha) * max_x |Delta_j f|, weight = 2^{j alpha} for j >= 0
/// and 1 for the low block, so a constant c scores |c|.
double holder_norm_dyadic(const DyadicDecomposition& dec, double alpha);

/// sup|f| + max over (subsampled) grid pairs of |f(x)-f(y)| / dist(x,y)^alpha,
/// dist the periodic distance.  Pair count capped near 10^6.
double holder_norm_direct(const std::vector<double>& field, double alpha, const SpaceGrid& grid);

/// Seminorm part of holder_norm_direct only.
double holder_seminorm_direct(const std::vector<double>& field, double alpha,
                              const SpaceGrid& grid);

struct BernsteinRatio {
    int j;
    double ratio;  // ||grad^k Delta_j f|| / (2^{kj} ||Delta_j f||)
};

/// Blocks with sup-norm below 1e-12 are skipped.  k in {1, 2}.
std::vector<BernsteinRatio> bernstein_check(const DyadicDecomposition& dec, int k);

/// Spectral derivative of order k on the periodic grid.
std::vector<double> spectral_derivative(const std::vector<double>& field, int k,
                                        const SpaceGrid& grid);

/// C^{m+alpha} norm with m = floor(gamma), via spectral derivatives and the
/// dyadic alpha-seminorm; gamma must not be an integer unless gamma == 0.
double holder_norm_dyadic_general(const std::vector<double>& field, double gamma,
                                  const DyadicCutoffs& cutoffs);

double sup_norm(const std::vector<double>& field);

}  // namespace sdelab
