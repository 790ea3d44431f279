#include "orbits/verify.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace orbits {

namespace {

double wrap01(double x) { return x - std::floor(x); }

double circ_dist(double a, double b) {
    double d = std::abs(wrap01(a) - wrap01(b));
    return std::min(d, 1.0 - d);
}

double min_dist_to(const std::vector<double>& times, double t) {
    double d = std::numeric_limits<double>::max();
    for (double c : times) d = std::min(d, circ_dist(t, c));
    return d;
}

cd ode_rhs_force(const FieldModel& model, cd q, cd v, double t) {
    FieldSample s = model(q, t);
    double r = std::abs(q);
    return -s.B * cd(0.0, 1.0) * v - q / (r * r * r) - s.gradE;
}

// order-8 central stencils
constexpr int kReach = 4;
constexpr double kD1[kReach] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
constexpr double kD2Center = -205.0 / 72.0;
constexpr double kD2[kReach] = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};

}  // namespace

double ode_residual(const Loop& q, const FieldModel& model,
                    const std::vector<double>& collision_times, double window) {
    const int n = q.size();
    const double h = 1.0 / n;
    double maxq = 0.0;
    for (const cd& v : q.samples()) maxq = std::max(maxq, std::abs(v));

    double sup = 0.0;
    if (collision_times.empty()) {
        Loop dq = spectral_derivative(q);
        Loop ddq = spectral_derivative(dq);
        for (int j = 0; j < n; ++j) {
            if (std::abs(q[j]) <= 1e-9 * maxq)
                throw SingularLoop("ode_residual: loop passes through the origin");
            cd r = ddq[j] - ode_rhs_force(model, q[j], dq[j], q.node(j));
            sup = std::max(sup, std::abs(r));
        }
        return sup;
    }

    if (window <= 8.0 * h)
        throw InvalidInput("ode_residual: resolution too coarse for the exclusion window");
    bool any = false;
    for (int j = 0; j < n; ++j) {
        double t = q.node(j);
        if (min_dist_to(collision_times, t) <= window) continue;
        // the whole stencil must stay clear of the collision neighborhoods
        bool clear = true;
        for (int o = -kReach; o <= kReach; ++o)
            if (min_dist_to(collision_times, t + o * h) <= 0.5 * window) clear = false;
        if (!clear) continue;
        if (std::abs(q[j]) <= 1e-9 * maxq)
            throw SingularLoop("ode_residual: loop vanishes outside the exclusion windows");

        cd d1(0.0, 0.0);
        cd d2 = kD2Center * q[j];
        for (int o = 1; o <= kReach; ++o) {
            cd plus = q[(j + o) % n];
            cd minus = q[(j - o + n) % n];
            d1 += kD1[o - 1] * (plus - minus);
            d2 += kD2[o - 1] * (plus + minus);
        }
        d1 /= h;
        d2 /= h * h;
        cd r = d2 - ode_rhs_force(model, q[j], d1, t);
        sup = std::max(sup, std::abs(r));
        any = true;
    }
    if (!any) throw InvalidInput("ode_residual: exclusion windows cover every node");
    return sup;
}

BetaMu beta_mu(const Loop& q, const FieldModel& model) {
    const int n = q.size();
    double maxq = 0.0;
    for (const cd& v : q.samples()) maxq = std::max(maxq, std::abs(v));
    for (const cd& v : q.samples())
        if (std::abs(v) <= 1e-9 * maxq)
            throw SingularLoop("beta_mu: loop passes through the origin; use mu_from_collisions");

    Loop dq = spectral_derivative(q);
    Loop ddq = spectral_derivative(dq);
    BetaMu out;
    out.beta.resize(static_cast<size_t>(n));
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        FieldSample s = model(q[j], q.node(j));
        cd beta = (ddq[j] + s.B * cd(0.0, 1.0) * dq[j] + s.gradE) / q[j];
        out.beta[static_cast<size_t>(j)] = beta.real();
        out.imag_defect = std::max(out.imag_defect, std::abs(beta.imag()));
        acc += beta.real() * std::pow(std::abs(q[j]), 3.0);
    }
    out.mu_fit = acc / n;
    return out;
}

std::vector<double> mu_from_collisions(const Loop& z, double ctol) {
    std::vector<CollisionInfo> cols = collision_report(z, ctol);
    const double w = l2_norm_sq(z);
    std::vector<double> mu;
    mu.reserve(cols.size());
    for (const CollisionInfo& c : cols)
        mu.push_back(-2.0 * w * w * c.z_prime_abs * c.z_prime_abs);
    return mu;
}

Trajectory integrate_ode(cd q0, cd v0, const FieldModel& model, double T, double h0,
                         double r_min, double tol) {
    if (!(std::abs(q0) > 0.0)) throw InvalidInput("integrate_ode: q0 = 0");
    using state = std::array<double, 4>;
    namespace ode = boost::numeric::odeint;

    auto rhs = [&](const state& x, state& dx, double t) {
        cd q(x[0], x[1]), v(x[2], x[3]);
        cd a = ode_rhs_force(model, q, v, t);
        dx[0] = x[2];
        dx[1] = x[3];
        dx[2] = a.real();
        dx[3] = a.imag();
    };

    Trajectory out;
    state x{q0.real(), q0.imag(), v0.real(), v0.imag()};
    double t = 0.0, dt = h0;
    out.t.push_back(t);
    out.q.push_back(q0);
    out.v.push_back(v0);
    if (T <= 0.0) return out;

    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<state>());
    while (t < T) {
        dt = std::min(dt, T - t);
        ode::controlled_step_result res = ode::fail;
        for (int attempt = 0; attempt < 60; ++attempt) {
            res = stepper.try_step(rhs, x, t, dt);
            if (res == ode::success) break;
        }
        if (res != ode::success) throw DegenerateFlow("integrate_ode: step size collapsed");
        cd q(x[0], x[1]);
        out.t.push_back(t);
        out.q.push_back(q);
        out.v.push_back(cd(x[2], x[3]));
        if (std::abs(q) < r_min) {
            out.aborted = true;
            out.abort_time = t;
            return out;
        }
    }
    return out;
}

EnergyAlong energy_along(const Loop& q, const FieldModel& model) {
    const int n = q.size();
    double maxq = 0.0;
    for (const cd& v : q.samples()) maxq = std::max(maxq, std::abs(v));
    for (const cd& v : q.samples())
        if (std::abs(v) <= 1e-9 * maxq) throw SingularLoop("energy_along: loop passes through the origin");

    Loop dq = spectral_derivative(q);
    EnergyAlong out;
    out.values.resize(static_cast<size_t>(n));
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (int j = 0; j < n; ++j) {
        FieldSample s = model(q[j], q.node(j));
        double H = 0.5 * std::norm(dq[j]) + s.E - 1.0 / std::abs(q[j]);
        out.values[static_cast<size_t>(j)] = H;
        lo = std::min(lo, H);
        hi = std::max(hi, H);
    }
    out.drift = hi - lo;
    return out;
}

const char* to_string(WindingParity p) { return p == WindingParity::even ? "even" : "odd"; }

WindingParity winding_mod2(const Loop& z) {
    if (!(l2_norm_sq(z) > 0.0)) throw DegenerateLoop("winding_mod2: ||z|| = 0");
    return z.parity() == Parity::antiperiodic ? WindingParity::odd : WindingParity::even;
}

}  // namespace orbits
