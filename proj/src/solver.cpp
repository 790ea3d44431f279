#include "orbits/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbits/spectral.hpp"
#include "orbits/verify.hpp"

namespace orbits {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double sup_abs(const Loop& a) {
    double m = 0.0;
    for (const cd& v : a.samples()) m = std::max(m, std::abs(v));
    return m;
}

// Smoothing preconditioner (1 - d^2/dtau^2)^{-1}, diagonal in frequency.
Loop precondition(const Loop& g) {
    const int n = g.size();
    const bool twisted = g.parity() == Parity::antiperiodic;
    std::vector<cd> x(g.samples());
    if (twisted)
        for (int j = 0; j < n; ++j)
            x[static_cast<size_t>(j)] *= std::polar(1.0, -std::numbers::pi * g.node(j));
    std::vector<cd> c = spectral::dft(x);
    for (int k = 0; k < n; ++k) {
        double f = spectral::signed_freq(k, n) + (twisted ? 0.5 : 0.0);
        double w = two_pi * f;
        c[static_cast<size_t>(k)] /= 1.0 + w * w;
    }
    std::vector<cd> y = spectral::idft(c);
    if (twisted)
        for (int j = 0; j < n; ++j)
            y[static_cast<size_t>(j)] *= std::polar(1.0, std::numbers::pi * g.node(j));
    return Loop(std::move(y), g.parity());
}

Eigen::VectorXd to_vec(const Loop& a) {
    Eigen::VectorXd v(2 * a.size());
    for (int j = 0; j < a.size(); ++j) {
        v[2 * j] = a[j].real();
        v[2 * j + 1] = a[j].imag();
    }
    return v;
}

Loop to_loop(const Eigen::VectorXd& v, Parity p) {
    std::vector<cd> s(static_cast<size_t>(v.size() / 2));
    for (int j = 0; j < static_cast<int>(s.size()); ++j)
        s[static_cast<size_t>(j)] = cd(v[2 * j], v[2 * j + 1]);
    return Loop(std::move(s), p);
}

// Restarted GMRES on a matrix-free operator; returns the best iterate.
Eigen::VectorXd gmres(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                      const Eigen::VectorXd& rhs, int max_dim, double rel_tol) {
    const double bnorm = rhs.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
    if (bnorm == 0.0) return x;

    Eigen::VectorXd r = rhs;
    double beta = r.norm();
    std::vector<Eigen::VectorXd> basis;
    basis.push_back(r / beta);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(max_dim + 1, max_dim);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(max_dim + 1);
    g[0] = beta;
    std::vector<double> cs(static_cast<size_t>(max_dim)), sn(static_cast<size_t>(max_dim));

    int m = 0;
    for (int k = 0; k < max_dim; ++k) {
        Eigen::VectorXd w = apply(basis[static_cast<size_t>(k)]);
        for (int i = 0; i <= k; ++i) {
            H(i, k) = w.dot(basis[static_cast<size_t>(i)]);
            w -= H(i, k) * basis[static_cast<size_t>(i)];
        }
        H(k + 1, k) = w.norm();
        // apply stored Givens rotations
        for (int i = 0; i < k; ++i) {
            double t = cs[static_cast<size_t>(i)] * H(i, k) + sn[static_cast<size_t>(i)] * H(i + 1, k);
            H(i + 1, k) = -sn[static_cast<size_t>(i)] * H(i, k) + cs[static_cast<size_t>(i)] * H(i + 1, k);
            H(i, k) = t;
        }
        double denom = std::hypot(H(k, k), H(k + 1, k));
        if (denom == 0.0) {
            m = k;
            break;
        }
        cs[static_cast<size_t>(k)] = H(k, k) / denom;
        sn[static_cast<size_t>(k)] = H(k + 1, k) / denom;
        H(k, k) = denom;
        H(k + 1, k) = 0.0;
        g[k + 1] = -sn[static_cast<size_t>(k)] * g[k];
        g[k] = cs[static_cast<size_t>(k)] * g[k];
        m = k + 1;
        if (std::abs(g[k + 1]) <= rel_tol * bnorm) break;
        if (H(k + 1, k) == 0.0) break;
        if (k + 1 < max_dim) basis.push_back(w / H(k + 1, k));
    }
    if (m == 0) return x;
    Eigen::VectorXd y = H.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(g.head(m));
    for (int i = 0; i < m; ++i) x += y[i] * basis[static_cast<size_t>(i)];
    return x;
}

}  // namespace

void SolveOptions::validate() const {
    if (grad_tol <= 0.0 || flow_step <= 0.0 || newton_switch_tol <= 0.0)
        throw InvalidInput("solve options: tolerances must be positive");
    if (grad_tol >= newton_switch_tol)
        throw InvalidInput("solve options: grad_tol must be below newton_switch_tol");
    if (max_iters <= 0) throw InvalidInput("solve options: max_iters must be positive");
}

std::pair<Loop, SolveReport> solve_critical(const Loop& seed, const FieldModel& model,
                                            const SolveOptions& opts) {
    opts.validate();
    if (seed.parity() != opts.parity)
        throw InvalidInput("solve_critical: seed parity differs from options");
    const double seed_norm = std::sqrt(l2_norm_sq(seed));
    if (!(seed_norm > 0.0)) throw DegenerateLoop("solve_critical: ||seed|| = 0");
    const double norm_floor = opts.min_norm_factor * seed_norm;

    Loop z = seed.size() == opts.n ? seed : resample(seed, opts.n);
    SolveReport rep;

    auto value = [&](const Loop& x) { return action_parts(x, model).total; };
    auto grad = [&](const Loop& x) { return grad_regularized(x, model); };

    double fz = value(z);
    rep.f_history.push_back(fz);
    double step = opts.flow_step;
    int it = 0;

    // Phase 1: preconditioned gradient flow with backtracking
    while (it < opts.max_iters) {
        Loop g = grad(z);
        double gs = sup_abs(g);
        rep.final_grad_norm = gs;
        if (gs <= opts.grad_tol || gs < opts.newton_switch_tol) break;

        Loop d = precondition(g);
        double slope = l2_inner(g, d);  // positive: P is definite
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            std::vector<cd> s(z.samples());
            for (int j = 0; j < z.size(); ++j) s[static_cast<size_t>(j)] -= step * d[j];
            Loop cand(std::move(s), z.parity());
            if (std::sqrt(l2_norm_sq(cand)) < norm_floor) {
                step *= 0.5;
                continue;
            }
            double fc = value(cand);
            if (fc <= fz - 1e-4 * step * slope) {
                z = std::move(cand);
                fz = fc;
                rep.f_history.push_back(fz);
                step = std::min(step * 1.5, 1e3);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++it;
        if (!accepted) {
            if (step < 1e-15)
                throw DegenerateFlow("solve_critical: gradient flow cannot make progress");
            break;  // flow is stuck near the noise floor; let Newton take over
        }
    }
    rep.phase1_iters = it;

    // Phase 2: Newton-Krylov on grad F = 0, right-preconditioned by P
    auto grad_vec = [&](const Eigen::VectorXd& v) { return to_vec(grad(to_loop(v, opts.parity))); };
    Eigen::VectorXd x = to_vec(z);
    Eigen::VectorXd gx = grad_vec(x);
    auto sup = [](const Eigen::VectorXd& v) {
        double m = 0.0;
        for (int j = 0; j + 1 < v.size(); j += 2) m = std::max(m, std::hypot(v[j], v[j + 1]));
        return m;
    };
    double gs = sup(gx);
    int stagnant = 0;

    while (it < opts.max_iters && gs > opts.grad_tol && stagnant < 6) {
        ++it;
        const double xs = std::sqrt(x.squaredNorm() / x.size());
        auto jv = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
            double vn = std::sqrt(v.squaredNorm() / v.size());
            if (vn == 0.0) return Eigen::VectorXd::Zero(v.size());
            double eps = 6e-6 * (xs + 1.0) / vn;
            return (grad_vec(x + eps * v) - grad_vec(x - eps * v)) / (2.0 * eps);
        };
        auto jpv = [&](const Eigen::VectorXd& v) {
            return jv(to_vec(precondition(to_loop(v, opts.parity))));
        };
        Eigen::VectorXd u = gmres(jpv, -gx, opts.max_krylov, 0.1);
        Eigen::VectorXd dx = to_vec(precondition(to_loop(u, opts.parity)));

        bool accepted = false;
        double lambda = 1.0;
        for (int bt = 0; bt < 12; ++bt) {
            Eigen::VectorXd xc = x + lambda * dx;
            Loop cand = to_loop(xc, opts.parity);
            if (std::sqrt(l2_norm_sq(cand)) < norm_floor) {
                lambda *= 0.5;
                continue;
            }
            Eigen::VectorXd gc = grad_vec(xc);
            double gcs = sup(gc);
            if (gcs < gs) {
                x = xc;
                gx = gc;
                gs = gcs;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // fall back to a few flow steps before retrying Newton
            Loop zz = to_loop(x, opts.parity);
            double fv = value(zz);
            double st = 1e-3;
            for (int k = 0; k < 10 && it < opts.max_iters; ++k, ++it) {
                Loop g = grad(zz);
                Loop d = precondition(g);
                double slope = l2_inner(g, d);
                std::vector<cd> s(zz.samples());
                for (int j = 0; j < zz.size(); ++j) s[static_cast<size_t>(j)] -= st * d[j];
                Loop candidate(std::move(s), zz.parity());
                if (std::sqrt(l2_norm_sq(candidate)) < norm_floor) break;
                double fc = value(candidate);
                if (fc <= fv - 1e-4 * st * slope) {
                    zz = std::move(candidate);
                    fv = fc;
                    st *= 1.5;
                } else {
                    st *= 0.25;
                }
            }
            x = to_vec(zz);
            gx = grad_vec(x);
            double gs_new = sup(gx);
            if (gs_new >= gs) ++stagnant;
            gs = gs_new;
        }
    }

    z = to_loop(x, opts.parity);
    rep.iterations = it;
    rep.final_grad_norm = gs;
    rep.converged = gs <= opts.grad_tol;
    rep.action = action_parts(z, model);
    rep.residual_sup = sup_abs(delay_residual(z, model));
    rep.collisions = collision_report(z);
    rep.winding_mod2 = z.parity() == Parity::antiperiodic ? "odd" : "even";
    if (rep.collisions.empty()) {
        try {
            rep.winding = winding_number(z).value();
        } catch (const WindingUndefined&) {
            rep.winding.reset();
        }
    } else {
        rep.mu_estimates = mu_from_collisions(z);
    }
    return {std::move(z), std::move(rep)};
}

FamilyResult continue_family(const Loop& seed, const ModelFamily& family, int steps,
                             const SolveOptions& opts) {
    if (steps < 2) throw InvalidInput("continue_family: need at least 2 steps");
    FamilyResult out;

    auto try_solve = [&](const Loop& from, double s) -> std::optional<std::pair<Loop, SolveReport>> {
        try {
            auto [z, rep] = solve_critical(from, family(s), opts);
            if (!rep.converged) return std::nullopt;
            return std::make_pair(std::move(z), std::move(rep));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };

    const double ds = 1.0 / (steps - 1);
    const double s_min_step = ds / 64.0;

    auto first = try_solve(seed, 0.0);
    if (!first) throw InvalidInput("continue_family: solve failed at s = 0");
    out.steps.push_back(FamilyStep{0.0, first->first, first->second});

    Loop current = first->first;
    double s_cur = 0.0;
    for (int k = 1; k < steps; ++k) {
        double s_target = k * ds;
        while (s_cur < s_target) {
            double s_next = s_target;
            auto sol = try_solve(current, s_next);
            while (!sol && s_next - s_cur > s_min_step) {
                s_next = 0.5 * (s_cur + s_next);
                sol = try_solve(current, s_next);
            }
            if (!sol) {
                out.truncated = true;
                return out;
            }
            current = sol->first;
            s_cur = s_next;
            if (s_cur == s_target) out.steps.push_back(FamilyStep{s_cur, sol->first, sol->second});
        }
    }
    return out;
}

}  // namespace orbits
