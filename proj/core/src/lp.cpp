#include "sdelab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdelab/fft.hpp"

namespace sdelab {

namespace {

// smooth transition: 0 at u<=0, 1 at u>=1, built from the bump exp(-1/u)
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double phi_tilde_profile(double r) {
    // 1 on B_{3/2} \ B_{1/2}, support in B_{7/4} \ B_{1/4}
    if (r <= 0.25 || r >= 1.75) return 0.0;
    if (r < 0.5) return smoothstep((r - 0.25) / 0.25);
    if (r <= 1.5) return 1.0;
    return smoothstep((1.75 - r) / 0.25);
}

double block_weight(int j, double alpha) {
    return j < 0 ? 1.0 : std::pow(2.0, j * alpha);
}

}  // namespace

double chi_profile(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 1.5) return 0.0;
    return smoothstep((1.5 - r) / 0.5);
}

DyadicCutoffs build_cutoffs(std::size_t n, double length) {
    if (!is_power_of_two(n) || n < 16)
        throw std::invalid_argument("build_cutoffs: N must be a power of two >= 16");
    DyadicCutoffs c;
    c.grid = {n, length};
    int j_max = static_cast<int>(std::round(std::log2(static_cast<double>(n)))) - 2;
    // make sure chi(2^-j_max .) covers the whole lattice so blocks telescope to 1
    const double xi_max = M_PI * static_cast<double>(n) / length;
    while (std::ldexp(1.0, j_max) < xi_max) ++j_max;
    c.j_max = j_max;

    c.chi.resize(n);
    c.phi_tilde.resize(n);
    c.phi.assign(static_cast<std::size_t>(j_max + 2), std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const double r = std::abs(fft_frequency(k, n, length));
        c.chi[k] = chi_profile(r);
        c.phi_tilde[k] = phi_tilde_profile(r);
        c.phi[0][k] = chi_profile(2.0 * r);  // phi_{-1}
        for (int j = 0; j <= j_max; ++j) {
            const double s = std::ldexp(r, -j);  // 2^-j r
            c.phi[static_cast<std::size_t>(j + 1)][k] = chi_profile(s) - chi_profile(2.0 * s);
        }
    }
    return c;
}

std::vector<double> DyadicDecomposition::reconstruct() const {
    std::vector<double> out(grid.n, 0.0);
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

DyadicDecomposition decompose(const std::vector<double>& field, const DyadicCutoffs& cutoffs) {
    if (field.size() != cutoffs.grid.n)
        throw std::invalid_argument("decompose: field/cutoff size mismatch");
    DyadicDecomposition dec;
    dec.grid = cutoffs.grid;
    dec.j_max = cutoffs.j_max;
    const cvector spectrum = fft_of_real(field);
    dec.blocks.reserve(cutoffs.phi.size());
    for (const auto& phi_j : cutoffs.phi) {
        cvector s(spectrum);
        for (std::size_t k = 0; k < s.size(); ++k) s[k] *= phi_j[k];
        dec.blocks.push_back(real_ifft(std::move(s)));
    }
    return dec;
}

double sup_norm(const std::vector<double>& field) {
    double m = 0.0;
    for (double v : field) m = std::max(m, std::abs(v));
    return m;
}

double holder_norm_dyadic(const DyadicDecomposition& dec, double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("holder_norm_dyadic: alpha must be in (0,1)");
    double norm = 0.0;
    for (int j = -1; j <= dec.j_max; ++j)
        norm = std::max(norm, block_weight(j, alpha) * sup_norm(dec.block(j)));
    return norm;
}

double holder_seminorm_direct(const std::vector<double>& field, double alpha,
                              const SpaceGrid& grid) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("holder_seminorm_direct: alpha must be in (0,1)");
    const std::size_t n = field.size();
    // cap total pair count near 1e6 by striding over offsets
    const std::size_t max_pairs = 1'000'000;
    const std::size_t total = n * (n / 2);
    const std::size_t stride = std::max<std::size_t>(1, total / max_pairs);
    double semi = 0.0;
    for (std::size_t o = 1; o <= n / 2; o += stride) {
        const double dist = std::min<double>(o, n - o) * grid.dx();
        const double denom = std::pow(dist, alpha);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + o) % n;
            worst = std::max(worst, std::abs(field[i] - field[j]));
        }
        semi = std::max(semi, worst / denom);
    }
    return semi;
}

double holder_norm_direct(const std::vector<double>& field, double alpha, const SpaceGrid& grid) {
    return sup_norm(field) + holder_seminorm_direct(field, alpha, grid);
}

std::vector<double> spectral_derivative(const std::vector<double>& field, int k,
                                        const SpaceGrid& grid) {
    cvector s = fft_of_real(field);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double xi = fft_frequency(i, grid.n, grid.length);
        std::complex<double> mult(1.0, 0.0);
        for (int d = 0; d < k; ++d) mult *= std::complex<double>(0.0, xi);
        s[i] *= mult;
    }
    // the Nyquist mode has no well-defined odd derivative; drop it
    if (k % 2 == 1) s[grid.n / 2] = 0.0;
    return real_ifft(std::move(s));
}

std::vector<BernsteinRatio> bernstein_check(const DyadicDecomposition& dec, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("bernstein_check: k must be 1 or 2");
    std::vector<BernsteinRatio> out;
    for (int j = -1; j <= dec.j_max; ++j) {
        const double base = sup_norm(dec.block(j));
        if (base < 1e-12) continue;
        const double deriv = sup_norm(spectral_derivative(dec.block(j), k, dec.grid));
        out.push_back({j, deriv / (std::ldexp(1.0, k * j) * base)});
    }
    return out;
}

double holder_norm_dyadic_general(const std::vector<double>& field, double gamma,
                                  const DyadicCutoffs& cutoffs) {
    const int m = static_cast<int>(std::floor(gamma));
    const double frac = gamma - m;
    double norm = 0.0;
    std::vector<double> g = field;
    for (int i = 0; i < m; ++i) {
        norm += sup_norm(g);
        g = spectral_derivative(g, 1, cutoffs.grid);
    }
    if (frac > 0.0)
        norm += holder_norm_dyadic(decompose(g, cutoffs), frac);
    else
        norm += sup_norm(g);
    return norm;
}

}  // namespace sdelab
