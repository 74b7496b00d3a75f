#include "sdelab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sdelab {

namespace {

std::mutex plan_mutex;

fftw_plan plan_for(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find({n, sign});
    if (it != cache.end()) return it->second;
    // UNALIGNED so the plan can execute on std::vector storage
    fftw_complex* tmp = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), tmp, tmp, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(tmp);
    cache[{n, sign}] = p;
    return p;
}

void execute(cvector& data, int sign) {
    if (!is_power_of_two(data.size()))
        throw std::invalid_argument("fft: length must be a power of two");
    fftw_plan p = plan_for(data.size(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, ptr, ptr);
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

void fft_forward(cvector& data) { execute(data, FFTW_FORWARD); }

void fft_inverse(cvector& data) {
    execute(data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z *= scale;
}

cvector fft_of_real(const std::vector<double>& field) {
    cvector out(field.begin(), field.end());
    fft_forward(out);
    return out;
}

std::vector<double> real_ifft(cvector spectrum) {
    fft_inverse(spectrum);
    std::vector<double> out(spectrum.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum[i].real();
    return out;
}

double fft_frequency(std::size_t k, std::size_t n, double period) {
    const auto ik = static_cast<long long>(k);
    const auto in = static_cast<long long>(n);
    const long long signed_k = (ik <= in / 2) ? ik : ik - in;
    return 2.0 * M_PI * static_cast<double>(signed_k) / period;
}

}  // namespace sdelab
