#include "orbits/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbits/spectral.hpp"

namespace orbits {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap01(double x) { return x - std::floor(x); }

// distance on the circle R/Z
double circ_dist(double a, double b) {
    double d = std::abs(wrap01(a) - wrap01(b));
    return std::min(d, 1.0 - d);
}

}  // namespace

ReparamTable::ReparamTable(const Loop& z, double ctol) : z_(z), zi_(z) {
    norm_sq_ = l2_norm_sq(z);
    if (!(norm_sq_ > 0.0)) throw DegenerateLoop("time_map: ||z|| = 0");
    for (const cd& v : z.samples()) max_abs_ = std::max(max_abs_, std::abs(v));

    // |z|^2 has twice the bandwidth of z, so build its spectrum on a 2N grid
    // where it is alias-free.
    const int n = z.size();
    const int wn = 2 * n;
    Loop zw = resample(z, wn);
    std::vector<cd> f(static_cast<size_t>(wn));
    for (int j = 0; j < wn; ++j) f[static_cast<size_t>(j)] = std::norm(zw[j]);
    std::vector<cd> hat = spectral::dft(f);

    anti_.assign(static_cast<size_t>(wn), cd(0.0, 0.0));
    anti0_ = 0.0;
    for (int k = 1; k < wn; ++k) {
        int m = spectral::signed_freq(k, wn);
        if (2 * m == -wn) continue;
        anti_[static_cast<size_t>(k)] = hat[static_cast<size_t>(k)] / cd(0.0, two_pi * m);
    }
    for (const cd& c : anti_) anti0_ += c.real();
    // the mean of |z|^2 agrees between the N and 2N grids with no aliasing
    norm_sq_ = hat[0].real();

    cum_.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) cum_[static_cast<size_t>(j)] = t_of(z.node(j));

    detect_collisions(ctol);
}

double ReparamTable::t_of(double tau) const {
    double p = 0.0;
    const int wn = static_cast<int>(anti_.size());
    for (int k = 1; k < wn; ++k) {
        int m = spectral::signed_freq(k, wn);
        if (2 * m == -wn) continue;
        p += (anti_[static_cast<size_t>(k)] * std::polar(1.0, two_pi * m * tau)).real();
    }
    return tau + (p - anti0_) / norm_sq_;
}

double ReparamTable::speed_sq(double tau) const { return std::norm(zi_.eval(tau)); }

double ReparamTable::invert(double t) const {
    t = wrap01(t);
    if (t == 0.0) return 0.0;

    const int n = z_.size();
    // bracket using the node values (cumulative is non-decreasing)
    int lo_idx = 0;
    int hi_idx = n;  // node n means tau = 1, t = 1
    while (hi_idx - lo_idx > 1) {
        int mid = (lo_idx + hi_idx) / 2;
        double tm = mid == n ? 1.0 : cum_[static_cast<size_t>(mid)];
        (tm <= t ? lo_idx : hi_idx) = mid;
    }
    double lo = static_cast<double>(lo_idx) / n;
    double hi = static_cast<double>(hi_idx) / n;

    const double dtol = 1e-13;
    double tau = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        double g = t_of(tau) - t;
        double slope = speed_sq(tau) / norm_sq_;
        // done when the value matches and tau itself is pinned down, either
        // through the Newton error estimate or the bracket width
        if (std::abs(g) < dtol && (hi - lo < 1e-12 || std::abs(g) <= slope * 1e-12)) break;
        if (g != 0.0) (g < 0.0 ? lo : hi) = tau;
        double next = tau - g / slope;
        if (slope > 1e-14 && next > lo && next < hi)
            tau = next;
        else
            tau = 0.5 * (lo + hi);
        if (hi - lo < 1e-15) break;
    }
    return tau;
}

void ReparamTable::detect_collisions(double ctol) {
    cols_.clear();
    const double floor = ctol * max_abs_;
    const int scan = 4 * z_.size();

    std::vector<double> mag(static_cast<size_t>(scan));
    for (int j = 0; j < scan; ++j) mag[static_cast<size_t>(j)] = std::abs(zi_.eval(static_cast<double>(j) / scan));

    for (int j = 0; j < scan; ++j) {
        double prev = mag[static_cast<size_t>((j + scan - 1) % scan)];
        double next = mag[static_cast<size_t>((j + 1) % scan)];
        double cur = mag[static_cast<size_t>(j)];
        if (cur > prev || cur > next) continue;            // not a local minimum
        if (cur > 4.0 * std::numbers::pi * max_abs_ / scan) continue;  // cannot dip near 0 within a cell

        // refine the minimum of |z|^2: root of g = Re(conj(z) z') in a bracket
        double lo = static_cast<double>(j - 1) / scan;
        double hi = static_cast<double>(j + 1) / scan;
        auto g = [&](double tau) {
            return std::real(std::conj(zi_.eval(tau)) * zi_.deriv(tau));
        };
        double glo = g(lo), ghi = g(hi);
        if (glo > 0.0 || ghi < 0.0) continue;  // shallow dip, not a true minimum of the interpolant
        double tau = 0.5 * (lo + hi);
        for (int it = 0; it < 100; ++it) {
            double gm = g(tau);
            if (gm == 0.0) break;
            (gm < 0.0 ? lo : hi) = tau;
            cd zv = zi_.eval(tau);
            cd dz = zi_.deriv(tau);
            cd ddz = zi_.deriv(tau, 2);
            double slope = std::norm(dz) + std::real(std::conj(zv) * ddz);
            double next_tau = tau - gm / slope;
            if (slope > 0.0 && next_tau > lo && next_tau < hi)
                tau = next_tau;
            else
                tau = 0.5 * (lo + hi);
            if (hi - lo < 1e-15) break;
        }
        tau = wrap01(tau);
        if (std::abs(zi_.eval(tau)) >= floor) continue;

        bool dup = false;
        for (const CollisionInfo& c : cols_)
            if (circ_dist(c.tau, tau) < 1e-8) dup = true;
        if (dup) continue;

        double dz_abs = std::abs(zi_.deriv(tau));
        if (dz_abs < floor)
            throw DegenerateCollision("collision with vanishing z' (loop is degenerate)");
        cols_.push_back(CollisionInfo{tau, dz_abs, 2.0 * dz_abs * dz_abs / norm_sq_, t_of(tau)});
    }
    std::sort(cols_.begin(), cols_.end(),
              [](const CollisionInfo& a, const CollisionInfo& b) { return a.tau < b.tau; });
}

ReparamTable time_map(const Loop& z, double ctol) { return ReparamTable(z, ctol); }

double invert_time(const ReparamTable& table, double t) { return table.invert(t); }

Loop sigma_map(const Loop& z, int m) {
    const int n = z.size();
    if (m == 0) m = 4 * n;
    if (m < 8 || m % 2 != 0) throw InvalidInput("sigma_map: output resolution must be even and >= 8");

    ReparamTable table(z, kDefaultCollisionTol);
    LoopInterp zi(z);
    std::vector<cd> q(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        double tau = table.invert(static_cast<double>(j) / m);
        cd zv = zi.eval(tau);
        q[static_cast<size_t>(j)] = zv * zv;
    }
    return Loop(std::move(q), Parity::periodic);
}

std::vector<CollisionInfo> collision_report(const Loop& z, double ctol) {
    return time_map(z, ctol).collisions();
}

}  // namespace orbits
