#include "orbits/action.hpp"

#include <algorithm>
#include <cmath>

#include "orbits/spectral.hpp"

namespace orbits {

namespace {

// Shared per-call state: pointwise field data along z^2 at the reparametrized
// times, the loop derivative, and the electric scalars.
struct Workspace {
    int n = 0;
    double h = 0.0;
    double W = 0.0;        // ||z||^2
    double dW = 0.0;       // ||z'||^2
    Loop dz;               // z'
    std::vector<double> f;     // |z|^2
    std::vector<cd> q;         // z^2
    std::vector<double> t;     // t_z at the nodes (spectral cumulative / W)
    std::vector<FieldSample> fs;
    double Ecal = 0.0;     // electric part
    double E1var = 0.0;    // plain node pairing of t * Edot |z|^2; exact partner of the gradient
    double E1mom = 0.0;    // spectrally accurate value of int t_z(s) Edot(s) |z(s)|^2 ds / W
    std::vector<double> tail;  // exact adjoint cumulative of Edot |z|^2
};

Workspace build(const Loop& z, const FieldModel& model) {
    Workspace w;
    w.n = z.size();
    w.h = 1.0 / w.n;
    w.W = l2_norm_sq(z);
    if (!(w.W > 0.0)) throw DegenerateLoop("action: ||z|| = 0");
    w.dz = spectral_derivative(z);
    w.dW = l2_norm_sq(w.dz);

    w.f.resize(static_cast<size_t>(w.n));
    w.q.resize(static_cast<size_t>(w.n));
    for (int j = 0; j < w.n; ++j) {
        w.f[static_cast<size_t>(j)] = std::norm(z[j]);
        w.q[static_cast<size_t>(j)] = z[j] * z[j];
    }

    std::vector<double> cum = spectral::cumulative(w.f);
    const double mean = w.W;  // (1/n) sum |z|^2
    w.t.resize(static_cast<size_t>(w.n));
    for (int j = 0; j < w.n; ++j) w.t[static_cast<size_t>(j)] = cum[static_cast<size_t>(j)] / mean;

    w.fs.resize(static_cast<size_t>(w.n));
    std::vector<double> v(static_cast<size_t>(w.n));  // Edot |z|^2
    for (int j = 0; j < w.n; ++j) {
        w.fs[static_cast<size_t>(j)] = model(w.q[static_cast<size_t>(j)], w.t[static_cast<size_t>(j)]);
        const FieldSample& s = w.fs[static_cast<size_t>(j)];
        w.Ecal += s.E * w.f[static_cast<size_t>(j)];
        w.E1var += w.t[static_cast<size_t>(j)] * s.dE_dt * w.f[static_cast<size_t>(j)];
        v[static_cast<size_t>(j)] = s.dE_dt * w.f[static_cast<size_t>(j)];
    }
    w.Ecal *= w.h / w.W;
    w.E1var *= w.h / w.W;

    // moment quadrature: t_z(s) = s + p(s) with p periodic, so the sawtooth
    // factor is integrated through its Fourier series
    double mom = spectral::first_moment(v);
    double pv = 0.0;
    for (int j = 0; j < w.n; ++j)
        pv += (w.t[static_cast<size_t>(j)] - z.node(j)) * v[static_cast<size_t>(j)];
    w.E1mom = (mom + pv * w.h) / w.W;

    w.tail = spectral::cumulative_adjoint(v);
    return w;
}

EpsilonFields make_epsilons(const Loop& z, const Workspace& w) {
    std::vector<cd> e1(static_cast<size_t>(w.n)), e2(static_cast<size_t>(w.n)), e3(static_cast<size_t>(w.n));
    for (int j = 0; j < w.n; ++j) {
        const FieldSample& s = w.fs[static_cast<size_t>(j)];
        e1[static_cast<size_t>(j)] = w.tail[static_cast<size_t>(j)] / w.W * z[j];
        e2[static_cast<size_t>(j)] = w.f[static_cast<size_t>(j)] * s.gradE * std::conj(z[j]);
        e3[static_cast<size_t>(j)] = s.E * z[j];
    }
    return EpsilonFields{Loop(std::move(e1), z.parity()), Loop(std::move(e2), z.parity()),
                         Loop(std::move(e3), z.parity())};
}

}  // namespace

double action_original(const Loop& q, const FieldModel& model, double ctol) {
    if (q.parity() != Parity::periodic)
        throw InvalidInput("action_original: q must be a periodic loop");
    const int n = q.size();
    double maxq = 0.0, minq = std::numeric_limits<double>::max();
    for (const cd& v : q.samples()) {
        maxq = std::max(maxq, std::abs(v));
        minq = std::min(minq, std::abs(v));
    }
    if (minq <= ctol * maxq) throw SingularLoop("action_original: loop passes through the origin");

    Loop dq = spectral_derivative(q);
    double kin = 0.5 * l2_norm_sq(dq);
    double circ = 0.0, pot = 0.0;
    for (int j = 0; j < n; ++j) {
        double t = q.node(j);
        FieldSample s = model(q[j], t);
        circ += std::real(std::conj(s.A) * dq[j]);
        pot += s.E - 1.0 / std::abs(q[j]);
    }
    return kin + circ / n - pot / n;
}

ActionBreakdown action_parts(const Loop& z, const FieldModel& model) {
    Workspace w = build(z, model);
    ActionBreakdown out;
    out.kinetic = 2.0 * w.W * w.dW;
    double circ = 0.0;  // circulation of A along z^2
    for (int j = 0; j < w.n; ++j)
        circ += std::real(std::conj(w.fs[static_cast<size_t>(j)].A) * 2.0 * z[j] * w.dz[j]);
    out.magnetic = -circ * w.h;
    out.coulomb = 1.0 / w.W;
    out.electric = w.Ecal;
    out.electric_aux = w.E1mom;
    out.total = out.kinetic - out.magnetic + out.coulomb - out.electric;
    return out;
}

EpsilonFields epsilon_fields(const Loop& z, const FieldModel& model) {
    Workspace w = build(z, model);
    return make_epsilons(z, w);
}

ActionGradients action_gradients(const Loop& z, const FieldModel& model) {
    Workspace w = build(z, model);
    EpsilonFields eps = make_epsilons(z, w);
    Loop ddz = spectral_derivative(w.dz);

    const double W = w.W;
    std::vector<cd> gk(static_cast<size_t>(w.n)), ga(static_cast<size_t>(w.n)),
        gc(static_cast<size_t>(w.n)), ge(static_cast<size_t>(w.n)), gt(static_cast<size_t>(w.n));
    for (int j = 0; j < w.n; ++j) {
        gk[static_cast<size_t>(j)] = 4.0 * w.dW * z[j] - 4.0 * W * ddz[j];
        ga[static_cast<size_t>(j)] =
            4.0 * w.f[static_cast<size_t>(j)] * w.fs[static_cast<size_t>(j)].B * cd(0.0, 1.0) * w.dz[j];
        gc[static_cast<size_t>(j)] = -2.0 * z[j] / (W * W);
        ge[static_cast<size_t>(j)] = -2.0 * (w.Ecal + w.E1var) / W * z[j] +
                                     2.0 / W * (eps.eps1[j] + eps.eps2[j] + eps.eps3[j]);
        gt[static_cast<size_t>(j)] = gk[static_cast<size_t>(j)] - ga[static_cast<size_t>(j)] +
                                     gc[static_cast<size_t>(j)] - ge[static_cast<size_t>(j)];
    }
    Parity p = z.parity();
    return ActionGradients{Loop(std::move(gk), p), Loop(std::move(ga), p), Loop(std::move(gc), p),
                           Loop(std::move(ge), p), Loop(std::move(gt), p)};
}

Loop grad_regularized(const Loop& z, const FieldModel& model) {
    return action_gradients(z, model).total;
}

Loop delay_residual(const Loop& z, const FieldModel& model) {
    Workspace w = build(z, model);
    EpsilonFields eps = make_epsilons(z, w);
    Loop ddz = spectral_derivative(w.dz);

    const double W = w.W;
    const double coef = w.dW / W + (w.Ecal + w.E1var) / (2.0 * W * W) - 1.0 / (2.0 * W * W * W);
    std::vector<cd> r(static_cast<size_t>(w.n));
    for (int j = 0; j < w.n; ++j) {
        cd e = eps.eps1[j] + eps.eps2[j] + eps.eps3[j];
        r[static_cast<size_t>(j)] =
            ddz[j] + e / (2.0 * W * W) +
            w.f[static_cast<size_t>(j)] * w.fs[static_cast<size_t>(j)].B / W * cd(0.0, 1.0) * w.dz[j] -
            coef * z[j];
    }
    return Loop(std::move(r), z.parity());
}

LinearCoefficients linear_coefficients(const Loop& z, const FieldModel& model) {
    Workspace w = build(z, model);
    const double W = w.W;
    std::vector<cd> a(static_cast<size_t>(w.n)), b(static_cast<size_t>(w.n)), c(static_cast<size_t>(w.n));
    for (int j = 0; j < w.n; ++j) {
        const FieldSample& s = w.fs[static_cast<size_t>(j)];
        double fj = w.f[static_cast<size_t>(j)];
        a[static_cast<size_t>(j)] =
            (2.0 * W * w.dW + w.Ecal + w.E1var - s.E) / (2.0 * W * W) -
            (w.tail[static_cast<size_t>(j)] + 1.0) / (2.0 * W * W * W);
        b[static_cast<size_t>(j)] = -fj / (2.0 * W * W) * s.gradE;
        c[static_cast<size_t>(j)] = -cd(0.0, 1.0) * fj * s.B / W;
    }
    return LinearCoefficients{Loop(std::move(a), Parity::periodic), Loop(std::move(b), Parity::periodic),
                              Loop(std::move(c), Parity::periodic)};
}

}  // namespace orbits
