#include "sdelab/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "sdelab/fft.hpp"

namespace sdelab {

std::vector<double> fd_derivative(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fp1 = f[(i + 1) % n], fm1 = f[(i + n - 1) % n];
        const double fp2 = f[(i + 2) % n], fm2 = f[(i + n - 2) % n];
        out[i] = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * dx);
    }
    return out;
}

std::vector<double> fd_second_derivative(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fp1 = f[(i + 1) % n], fm1 = f[(i + n - 1) % n];
        const double fp2 = f[(i + 2) % n], fm2 = f[(i + n - 2) % n];
        out[i] = (-fp2 + 16.0 * fp1 - 30.0 * f[i] + 16.0 * fm1 - fm2) / (12.0 * dx * dx);
    }
    return out;
}

double interp_linear(const std::vector<double>& f, const SpaceGrid& grid, double x) {
    const double pos = x / grid.dx();
    const double fl = std::floor(pos);
    const double frac = pos - fl;
    const auto n = static_cast<long long>(grid.n);
    const long long i = ((static_cast<long long>(fl) % n) + n) % n;
    return f[static_cast<std::size_t>(i)] * (1.0 - frac) +
           f[static_cast<std::size_t>((i + 1) % n)] * frac;
}

double interp_periodic(const std::vector<double>& f, const SpaceGrid& grid, double x) {
    const double pos = x / grid.dx();
    const double fl = std::floor(pos);
    const double t = pos - fl;
    const auto n = static_cast<long long>(grid.n);
    const long long i1 = ((static_cast<long long>(fl) % n) + n) % n;
    const double p0 = f[static_cast<std::size_t>((i1 + n - 1) % n)];
    const double p1 = f[static_cast<std::size_t>(i1)];
    const double p2 = f[static_cast<std::size_t>((i1 + 1) % n)];
    const double p3 = f[static_cast<std::size_t>((i1 + 2) % n)];
    // Catmull-Rom
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                          t * (3.0 * (p1 - p2) + p3 - p0)));
}

std::vector<double> BackwardSolution::d1(std::size_t k) const {
    return fd_derivative(w.slice(k), w.xgrid.dx());
}

std::vector<double> BackwardSolution::d2(std::size_t k) const {
    return fd_second_derivative(w.slice(k), w.xgrid.dx());
}

std::vector<double> BackwardSolution::dt_slice(std::size_t k) const {
    const double dt = w.tgrid.dt();
    const std::size_t m = w.tgrid.steps;
    const std::size_t lo = (k == m) ? k - 1 : k;
    std::vector<double> out(w.xgrid.n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (w.at(lo + 1, i) - w.at(lo, i)) / dt;
    return out;
}

std::vector<double> mollify(const std::vector<double>& field, const SpaceGrid& grid, double m) {
    if (2.0 / m >= grid.length)
        throw std::invalid_argument("mollify: mollifier support exceeds the period");
    const std::size_t n = grid.n;
    std::vector<double> rho(n, 0.0);
    // bump exp(-1/(1-s^2)) scaled to width 1/m, sampled periodically
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = grid.x(i);
        if (x > grid.length / 2.0) x -= grid.length;
        const double s = m * x;
        if (std::abs(s) < 1.0) rho[i] = std::exp(-1.0 / (1.0 - s * s));
        mass += rho[i];
    }
    if (mass <= 0.0) throw std::invalid_argument("mollify: m too large for the grid resolution");
    for (auto& v : rho) v /= mass;  // discrete unit mass, so constants are preserved
    cvector fh = fft_of_real(field);
    const cvector rh = fft_of_real(rho);
    for (std::size_t i = 0; i < n; ++i) fh[i] *= rh[i];
    return real_ifft(std::move(fh));
}

}  // namespace sdelab
