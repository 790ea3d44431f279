#pragma once

#include <complex>
#include <vector>

#include "orbits/errors.hpp"

namespace orbits {

using cd = std::complex<double>;

// A loop is periodic (z(tau+1) = z(tau)) or twisted (z(tau+1) = -z(tau)).
enum class Parity { periodic, antiperiodic };

const char* to_string(Parity p);
Parity parity_from_string(const std::string& s);

// Integer or half-integer winding number, stored as twice its value.
struct HalfInt {
    int twice = 0;
    double value() const { return 0.5 * twice; }
    friend bool operator==(const HalfInt&, const HalfInt&) = default;
};

// Uniform complex samples at tau_j = j/N. Immutable after construction;
// N must be even and at least 8 so spectral transforms are well posed.
class Loop {
public:
    Loop() = default;
    Loop(std::vector<cd> samples, Parity parity);

    int size() const { return static_cast<int>(s_.size()); }
    Parity parity() const { return p_; }
    const std::vector<cd>& samples() const { return s_; }
    cd operator[](int j) const { return s_[static_cast<size_t>(j)]; }
    double node(int j) const { return static_cast<double>(j) / size(); }

private:
    std::vector<cd> s_;
    Parity p_ = Parity::periodic;
};

Loop make_loop(std::vector<cd> samples, Parity parity);

// int_0^1 Re(a conj(b)) dtau by the uniform node rule.
double l2_inner(const Loop& a, const Loop& b);
double l2_norm_sq(const Loop& a);

// Fourier differentiation; periodic loops use integer frequencies (Nyquist
// zeroed), twisted loops half-integer frequencies.
Loop spectral_derivative(const Loop& a);

// Total turning of arg a around the origin; integer for periodic loops,
// half-integer for twisted ones. Throws WindingUndefined when a sample is
// within tol * max|a| of the origin.
HalfInt winding_number(const Loop& a, double tol = 1e-9);

Loop apply_involution(const Loop& a);

// Delta(z)(t) = z(2t): turns a twisted loop into a periodic one of the same
// resolution, doubling the winding number.
Loop double_twisted(const Loop& a);

// Band-limited resampling to m nodes; exact on the represented band for m >= N.
Loop resample(const Loop& a, int m);

// Trigonometric interpolant of a loop, for evaluation between nodes.
class LoopInterp {
public:
    explicit LoopInterp(const Loop& a);
    cd eval(double tau) const;
    cd deriv(double tau, int order = 1) const;
    Parity parity() const { return p_; }
    int size() const { return static_cast<int>(c_.size()); }

private:
    std::vector<cd> c_;  // bucket-indexed coefficients, basis e^{2pi i (m + sigma/2) tau}
    Parity p_ = Parity::periodic;
};

}  // namespace orbits
