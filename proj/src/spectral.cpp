#include "orbits/spectral.hpp"

#include <fftw3.h>

#include <cassert>
#include <map>
#include <mutex>
#include <numbers>

namespace orbits::spectral {

namespace {

// FFTW plans are cached per (size, direction). Plan creation and execution on
// the shared buffers are serialized; transforms are small so this is cheap.
struct PlanCache {
    std::mutex mtx;
    std::map<std::pair<int, int>, fftw_plan> plans;
    std::map<int, fftw_complex*> buffers;

    fftw_complex* buffer(int n) {
        auto it = buffers.find(n);
        if (it != buffers.end()) return it->second;
        fftw_complex* b = fftw_alloc_complex(static_cast<size_t>(n));
        buffers[n] = b;
        return b;
    }

    fftw_plan plan(int n, int sign) {
        auto key = std::make_pair(n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        fftw_complex* b = buffer(n);
        fftw_plan p = fftw_plan_dft_1d(n, b, b, sign, FFTW_ESTIMATE);
        plans[key] = p;
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

std::vector<cd> transform(std::span<const cd> x, int sign, double scale) {
    const int n = static_cast<int>(x.size());
    assert(n > 0);
    std::vector<cd> out(static_cast<size_t>(n));
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mtx);
    fftw_complex* b = c.buffer(n);
    fftw_plan p = c.plan(n, sign);
    for (int j = 0; j < n; ++j) {
        b[j][0] = x[static_cast<size_t>(j)].real();
        b[j][1] = x[static_cast<size_t>(j)].imag();
    }
    fftw_execute(p);
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(j)] = cd(b[j][0], b[j][1]) * scale;
    return out;
}

}  // namespace

std::vector<cd> dft(std::span<const cd> x) {
    return transform(x, FFTW_FORWARD, 1.0 / static_cast<double>(x.size()));
}

std::vector<cd> idft(std::span<const cd> c) { return transform(c, FFTW_BACKWARD, 1.0); }

std::vector<double> cumulative(std::span<const double> f) {
    const int n = static_cast<int>(f.size());
    std::vector<cd> fc(f.begin(), f.end());
    std::vector<cd> hat = dft(fc);
    const double mean = hat[0].real();

    // periodic part P with P'(tau) = f - mean, coefficients hat_k / (2 pi i k)
    std::vector<cd> pc(static_cast<size_t>(n), cd(0.0, 0.0));
    for (int k = 1; k < n; ++k) {
        int m = signed_freq(k, n);
        if (2 * m == -n) continue;  // Nyquist dropped, as in differentiation
        pc[static_cast<size_t>(k)] = hat[static_cast<size_t>(k)] / cd(0.0, 2.0 * std::numbers::pi * m);
    }
    std::vector<cd> p = idft(pc);

    std::vector<double> out(static_cast<size_t>(n));
    const double p0 = p[0].real();
    for (int j = 0; j < n; ++j) {
        double tau = static_cast<double>(j) / n;
        out[static_cast<size_t>(j)] = mean * tau + p[static_cast<size_t>(j)].real() - p0;
    }
    return out;
}

std::vector<double> cumulative_adjoint(std::span<const double> u) {
    const int n = static_cast<int>(u.size());
    std::vector<cd> uc(u.begin(), u.end());
    std::vector<cd> hat = dft(uc);
    const cd u0 = hat[0];

    double mu = 0.0;  // (1/n) sum_j u_j tau_j
    for (int j = 0; j < n; ++j) mu += u[static_cast<size_t>(j)] * (static_cast<double>(j) / n);
    mu /= n;

    std::vector<cd> vc(static_cast<size_t>(n), cd(0.0, 0.0));
    for (int k = 1; k < n; ++k) {
        int m = signed_freq(k, n);
        if (2 * m == -n) continue;
        cd g = 1.0 / cd(0.0, 2.0 * std::numbers::pi * m);
        vc[static_cast<size_t>(k)] = g * (u0 - hat[static_cast<size_t>(k)]);
    }
    std::vector<cd> v = idft(vc);

    std::vector<double> out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(j)] = mu + v[static_cast<size_t>(j)].real();
    return out;
}

double first_moment(std::span<const double> v) {
    const int n = static_cast<int>(v.size());
    std::vector<cd> vc(v.begin(), v.end());
    std::vector<cd> hat = dft(vc);
    double out = 0.5 * hat[0].real();
    for (int k = 1; k < n; ++k) {
        int m = signed_freq(k, n);
        if (2 * m == -n) continue;
        out += (hat[static_cast<size_t>(k)] / cd(0.0, 2.0 * std::numbers::pi * m)).real();
    }
    return out;
}

}  // namespace orbits::spectral
