#include "sdelab/heat_kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "sdelab/fft.hpp"

namespace sdelab {

double SymMat::quad(const std::array<double, 2>& x) const {
    if (dim == 1) return m[0] * x[0] * x[0];
    return m[0] * x[0] * x[0] + 2.0 * m[1] * x[0] * x[1] + m[2] * x[1] * x[1];
}

double SymMat::det() const { return dim == 1 ? m[0] : m[0] * m[2] - m[1] * m[1]; }

SymMat SymMat::inverse() const {
    const double d = det();
    if (std::abs(d) < 1e-300) throw std::invalid_argument("SymMat: singular matrix");
    if (dim == 1) return {1, {1.0 / m[0], 0.0, 0.0}};
    return {2, {m[2] / d, -m[1] / d, m[0] / d}};
}

SymMat& SymMat::operator+=(const SymMat& o) {
    for (int i = 0; i < 3; ++i) m[i] += o.m[i];
    return *this;
}

SymMat& SymMat::operator*=(double s) {
    for (auto& v : m) v *= s;
    return *this;
}

std::array<double, 2> SymMat::eigenvalues() const {
    if (dim == 1) return {m[0], m[0]};
    const double tr = m[0] + m[2];
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det()));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
}

DiffusionSchedule DiffusionSchedule::constant(double value) {
    return {1, [value](double) { return SymMat::scalar(value); }, value, value};
}

void DiffusionSchedule::validate(double t0, double t1) const {
    constexpr int probes = 33;
    for (int i = 0; i < probes; ++i) {
        const double t = t0 + (t1 - t0) * i / (probes - 1);
        const auto ev = a(t).eigenvalues();
        if (ev[0] < lambda_min * (1.0 - 1e-9) || ev[1] > lambda_max * (1.0 + 1e-9))
            throw std::invalid_argument("DiffusionSchedule: ellipticity bounds violated");
    }
    if (lambda_min <= 0.0) throw std::invalid_argument("DiffusionSchedule: lambda_min must be > 0");
}

KernelAccumulator accumulate_A(const DiffusionSchedule& sched, double t, double s) {
    if (t >= s) throw std::invalid_argument("accumulate_A: need t < s");
    constexpr int panels = 32;  // composite Simpson
    const double h = (s - t) / panels;
    SymMat A{sched.dim, {0.0, 0.0, 0.0}};
    for (int i = 0; i < panels; ++i) {
        const double lo = t + i * h;
        SymMat f0 = sched.a(lo), fm = sched.a(lo + h / 2.0), f1 = sched.a(lo + h);
        fm *= 4.0;
        f0 += fm;
        f0 += f1;
        f0 *= h / 6.0;
        A += f0;
    }
    return {A, t, s};
}

double kernel_eval(const KernelAccumulator& acc, const std::array<double, 2>& x) {
    const double d = acc.A.det();
    const double norm = std::pow(4.0 * M_PI, -acc.A.dim / 2.0) / std::sqrt(d);
    return norm * std::exp(-acc.A.inverse().quad(x) / 4.0);
}

double kernel_eval(const KernelAccumulator& acc, double x) { return kernel_eval(acc, {x, 0.0}); }

namespace {

std::vector<double> sampled_kernel(const KernelAccumulator& acc, const SpaceGrid& grid) {
    std::vector<double> p(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double x = grid.x(i);
        if (x > grid.length / 2.0) x -= grid.length;
        p[i] = kernel_eval(acc, x);
    }
    return p;
}

}  // namespace

std::vector<double> semigroup_apply(const KernelAccumulator& acc, const std::vector<double>& f,
                                    const SpaceGrid& grid) {
    if (f.size() != grid.n) throw std::invalid_argument("semigroup_apply: field/grid mismatch");
    if (acc.A.dim != 1) throw std::invalid_argument("semigroup_apply: dim 1 only");
    // variance of the kernel is 2A; mass outside half the period
    const double sigma = std::sqrt(2.0 * acc.A.m[0]);
    const double tail = std::erfc(grid.length / 2.0 / (sigma * std::sqrt(2.0)));
    if (tail > 1e-8) throw std::invalid_argument("semigroup_apply: kernel too wide for the period");

    cvector fh = fft_of_real(f);
    const cvector ph = fft_of_real(sampled_kernel(acc, grid));
    const double dx = grid.dx();
    for (std::size_t i = 0; i < grid.n; ++i) fh[i] *= ph[i] * dx;
    return real_ifft(std::move(fh));
}

namespace {

// exact Fourier multiplier of the kernel, used inside the Duhamel quadrature
// (well defined down to s = t where the sampled kernel degenerates)
void add_weighted(cvector& acc_hat, const cvector& f_hat, double weight, const SymMat& A,
                  const SpaceGrid& grid) {
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double xi = fft_frequency(i, grid.n, grid.length);
        acc_hat[i] += weight * std::exp(-A.m[0] * xi * xi) * f_hat[i];
    }
}

struct DuhamelCtx {
    const DiffusionSchedule* sched;
    const std::vector<cvector>* slices;  // spectrum of f at each grid time
    const TimeGrid* tg;
    SpaceGrid grid;
    double t;

    cvector f_hat(double s) const {
        const double dt = tg->dt();
        double pos = s / dt;
        auto l = static_cast<std::size_t>(pos);
        if (l >= tg->steps) return (*slices)[tg->steps];
        const double frac = pos - static_cast<double>(l);
        cvector out((*slices)[l].size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (1.0 - frac) * (*slices)[l][i] + frac * (*slices)[l + 1][i];
        return out;
    }

    // Simpson panel of P_{t,s} f_s over [lo, hi], accumulated into acc_hat
    void simpson(cvector& acc_hat, double lo, double hi) const {
        const double mid = (lo + hi) / 2.0;
        const double h = hi - lo;
        add_weighted(acc_hat, f_hat(lo), h / 6.0, A_of(lo), grid);
        add_weighted(acc_hat, f_hat(mid), 4.0 * h / 6.0, A_of(mid), grid);
        add_weighted(acc_hat, f_hat(hi), h / 6.0, A_of(hi), grid);
    }

    SymMat A_of(double s) const {
        if (s <= t) return SymMat::scalar(0.0);
        return accumulate_A(*sched, t, s).A;
    }

    // adaptive bisection near the degenerate endpoint s = t
    void adaptive(cvector& acc_hat, double lo, double hi, int depth) const {
        cvector coarse(grid.n, {0.0, 0.0}), fine(grid.n, {0.0, 0.0});
        simpson(coarse, lo, hi);
        const double mid = (lo + hi) / 2.0;
        simpson(fine, lo, mid);
        simpson(fine, mid, hi);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) {
            diff = std::max(diff, std::abs(fine[i] - coarse[i]));
            scale = std::max(scale, std::abs(fine[i]));
        }
        if (depth >= 10 || diff <= 1e-6 * std::max(scale, 1e-12)) {
            for (std::size_t i = 0; i < grid.n; ++i) acc_hat[i] += fine[i];
            return;
        }
        adaptive(acc_hat, lo, mid, depth + 1);
        adaptive(acc_hat, mid, hi, depth + 1);
    }
};

}  // namespace

BackwardSolution duhamel_solution(const DiffusionSchedule& sched, const SpaceTimeField& f) {
    if (sched.dim != 1) throw std::invalid_argument("duhamel_solution: dim 1 only");
    const TimeGrid tg = f.tgrid;
    const SpaceGrid grid = f.xgrid;
    std::vector<cvector> slices;
    slices.reserve(tg.steps + 1);
    for (std::size_t k = 0; k <= tg.steps; ++k) slices.push_back(fft_of_real(f.slice(k)));

    BackwardSolution sol;
    sol.w = SpaceTimeField(tg, grid);
    for (std::size_t k = 0; k < tg.steps; ++k) {
        DuhamelCtx ctx{&sched, &slices, &tg, grid, tg.t(k)};
        cvector acc(grid.n, {0.0, 0.0});
        // first interval refined (kernel degenerates at s = t), rest one panel each
        ctx.adaptive(acc, tg.t(k), tg.t(k + 1), 0);
        for (std::size_t l = k + 1; l < tg.steps; ++l) ctx.simpson(acc, tg.t(l), tg.t(l + 1));
        sol.w.set_slice(k, real_ifft(std::move(acc)));
    }
    return sol;  // terminal slice stays exactly zero
}

}  // namespace sdelab
