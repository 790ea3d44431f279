#include "orbits/loop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "orbits/spectral.hpp"

namespace orbits {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double max_abs(const Loop& a) {
    double m = 0.0;
    for (const cd& v : a.samples()) m = std::max(m, std::abs(v));
    return m;
}

// Demodulate a twisted loop into an ordinary periodic sample vector.
std::vector<cd> demodulate(const Loop& a) {
    const int n = a.size();
    std::vector<cd> w(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        w[static_cast<size_t>(j)] = a[j] * std::polar(1.0, -std::numbers::pi * a.node(j));
    return w;
}

}  // namespace

const char* to_string(Parity p) { return p == Parity::periodic ? "periodic" : "antiperiodic"; }

Parity parity_from_string(const std::string& s) {
    if (s == "periodic") return Parity::periodic;
    if (s == "antiperiodic") return Parity::antiperiodic;
    throw InvalidInput("unknown parity: " + s);
}

Loop::Loop(std::vector<cd> samples, Parity parity) : s_(std::move(samples)), p_(parity) {
    const int n = static_cast<int>(s_.size());
    if (n < 8 || n % 2 != 0)
        throw InvalidInput("loop needs an even number of samples, at least 8; got " + std::to_string(n));
}

Loop make_loop(std::vector<cd> samples, Parity parity) { return Loop(std::move(samples), parity); }

double l2_inner(const Loop& a, const Loop& b) {
    if (a.size() != b.size() || a.parity() != b.parity())
        throw ShapeMismatch("l2_inner: mismatched resolution or parity");
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j) s += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
    return s / a.size();
}

double l2_norm_sq(const Loop& a) {
    double s = 0.0;
    for (const cd& v : a.samples()) s += std::norm(v);
    return s / a.size();
}

Loop spectral_derivative(const Loop& a) {
    const int n = a.size();
    if (a.parity() == Parity::periodic) {
        std::vector<cd> c = spectral::dft(a.samples());
        for (int k = 0; k < n; ++k) {
            int m = spectral::signed_freq(k, n);
            if (2 * m == -n) m = 0;  // Nyquist has no well-defined derivative
            c[static_cast<size_t>(k)] *= cd(0.0, two_pi * m);
        }
        return Loop(spectral::idft(c), Parity::periodic);
    }
    std::vector<cd> w = demodulate(a);
    std::vector<cd> c = spectral::dft(w);
    for (int k = 0; k < n; ++k) {
        double f = spectral::signed_freq(k, n) + 0.5;
        c[static_cast<size_t>(k)] *= cd(0.0, two_pi * f);
    }
    std::vector<cd> d = spectral::idft(c);
    for (int j = 0; j < n; ++j)
        d[static_cast<size_t>(j)] *= std::polar(1.0, std::numbers::pi * a.node(j));
    return Loop(std::move(d), Parity::antiperiodic);
}

HalfInt winding_number(const Loop& a, double tol) {
    const int n = a.size();
    const double floor = tol * max_abs(a);
    for (const cd& v : a.samples())
        if (std::abs(v) <= floor) throw WindingUndefined("winding_number: loop passes too close to 0");

    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        cd next = (j + 1 < n) ? a[j + 1] : (a.parity() == Parity::periodic ? a[0] : -a[0]);
        total += std::arg(next / a[j]);
    }
    double raw = total / std::numbers::pi;  // twice the winding number
    int twice = static_cast<int>(std::lround(raw));
    if (std::abs(raw - twice) > 0.25)
        throw WindingUndefined("winding_number: argument increments do not resolve a winding");
    return HalfInt{twice};
}

Loop apply_involution(const Loop& a) {
    std::vector<cd> s(a.samples());
    for (cd& v : s) v = -v;
    return Loop(std::move(s), a.parity());
}

Loop double_twisted(const Loop& a) {
    if (a.parity() != Parity::antiperiodic)
        throw InvalidInput("double_twisted: input must be antiperiodic");
    const int n = a.size();
    std::vector<cd> out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        int jj = 2 * j;
        out[static_cast<size_t>(j)] = jj < n ? a[jj] : -a[jj - n];  // antiperiodic extension
    }
    return Loop(std::move(out), Parity::periodic);
}

Loop resample(const Loop& a, int m) {
    const int n = a.size();
    if (m < 8 || m % 2 != 0) throw InvalidInput("resample: target resolution must be even and >= 8");
    if (m == n) return a;

    const bool twisted = a.parity() == Parity::antiperiodic;
    std::vector<cd> c =
        twisted ? spectral::dft(demodulate(a)) : spectral::dft(a.samples());

    std::vector<cd> cm(static_cast<size_t>(m), cd(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        int f = spectral::signed_freq(k, n);
        if (f < -m / 2 || f > m / 2 - 1) continue;
        cm[static_cast<size_t>((f + m) % m)] += c[static_cast<size_t>(k)];
    }
    std::vector<cd> s = spectral::idft(cm);
    if (twisted)
        for (int j = 0; j < m; ++j)
            s[static_cast<size_t>(j)] *= std::polar(1.0, std::numbers::pi * j / m);
    return Loop(std::move(s), a.parity());
}

LoopInterp::LoopInterp(const Loop& a) : p_(a.parity()) {
    c_ = (p_ == Parity::antiperiodic) ? spectral::dft(demodulate(a)) : spectral::dft(a.samples());
}

cd LoopInterp::eval(double tau) const { return deriv(tau, 0); }

cd LoopInterp::deriv(double tau, int order) const {
    const int n = size();
    const double half = (p_ == Parity::antiperiodic) ? 0.5 : 0.0;
    cd out(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
        int m = spectral::signed_freq(k, n);
        double f = m + half;
        if (order > 0 && p_ == Parity::periodic && 2 * m == -n) continue;
        cd w = c_[static_cast<size_t>(k)];
        for (int d = 0; d < order; ++d) w *= cd(0.0, two_pi * f);
        out += w * std::polar(1.0, two_pi * f * tau);
    }
    return out;
}

}  // namespace orbits
