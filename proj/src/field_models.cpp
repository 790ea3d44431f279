#include "orbits/field_models.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace orbits {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double take(std::map<std::string, double> params, const std::string& key, double fallback,
            std::map<std::string, double>* store) {
    auto it = params.find(key);
    double v = it == params.end() ? fallback : it->second;
    (*store)[key] = v;
    return v;
}

void reject_unknown(const std::map<std::string, double>& given,
                    const std::set<std::string>& known, const std::string& id) {
    for (const auto& [k, v] : given)
        if (!known.count(k)) throw InvalidInput("preset '" + id + "': unknown parameter '" + k + "'");
}

}  // namespace

FieldModel make_preset(const std::string& id, const std::map<std::string, double>& params) {
    std::map<std::string, double> kept;

    if (id == "kepler") {
        reject_unknown(params, {}, id);
        return FieldModel(id, kept, true, [](cd, double) { return FieldSample{}; });
    }

    if (id == "rotating_kepler") {
        reject_unknown(params, {"omega"}, id);
        double omega = take(params, "omega", 1.0, &kept);
        return FieldModel(id, kept, true, [omega](cd q, double) {
            FieldSample s;
            s.E = -0.5 * omega * omega * std::norm(q);
            s.gradE = -omega * omega * q;
            s.B = 2.0 * omega;
            s.A = cd(0.0, omega) * q;
            return s;
        });
    }

    if (id == "forced_stark") {
        reject_unknown(params, {"fx", "fy", "m"}, id);
        double fx = take(params, "fx", 1.0, &kept);
        double fy = take(params, "fy", 0.0, &kept);
        double md = take(params, "m", 1.0, &kept);
        int m = static_cast<int>(std::lround(md));
        if (std::abs(md - m) > 1e-12 || m < 1)
            throw InvalidInput("forced_stark: m must be a positive integer");
        cd f(fx, fy);
        return FieldModel(id, kept, false, [f, m](cd q, double t) {
            FieldSample s;
            double proj = std::real(std::conj(f) * q);
            s.E = proj * std::cos(two_pi * m * t);
            s.dE_dt = -two_pi * m * proj * std::sin(two_pi * m * t);
            s.gradE = f * std::cos(two_pi * m * t);
            return s;
        });
    }

    if (id == "bicircular") {
        reject_unknown(params, {"m_earth", "m_sun", "a_earth", "a_sun", "omega_sun", "exclusion_radius"}, id);
        double me = take(params, "m_earth", 81.3, &kept);
        double ms = take(params, "m_sun", 0.0, &kept);
        double ae = take(params, "a_earth", 1.0, &kept);
        double as = take(params, "a_sun", 389.0, &kept);
        double wd = take(params, "omega_sun", 1.0, &kept);
        double rex = take(params, "exclusion_radius", 0.05, &kept);
        if (me < 0.0 || ms < 0.0) throw InvalidInput("bicircular: masses must be nonnegative");
        if (ae <= 0.0 || as <= 0.0) throw InvalidInput("bicircular: radii must be positive");
        if (rex < 0.0) throw InvalidInput("bicircular: exclusion_radius must be nonnegative");
        int ws = static_cast<int>(std::lround(wd));
        if (std::abs(wd - ws) > 1e-12 || ws < 1)
            throw InvalidInput("bicircular: omega_sun must be a positive integer (E is 1-periodic in t)");

        cd qe(-ae, 0.0);                      // earth, moon mass normalized to 1
        cd bary = me / (me + 1.0) * qe;       // earth-moon barycenter
        double as3 = as * as * as;
        return FieldModel(id, kept, false, [me, ms, as, ws, rex, qe, bary, as3](cd q, double t) {
            cd qs = as * std::polar(1.0, -two_pi * ws * t);
            cd xe = q - qe;
            cd xs = q - qs;
            double re = std::abs(xe);
            double rs = std::abs(xs);
            if (re < rex) throw FieldDomainError("bicircular: inside earth exclusion radius");
            if (ms > 0.0 && rs < rex) throw FieldDomainError("bicircular: inside sun exclusion radius");

            cd qs_dot = cd(0.0, -two_pi * ws) * qs;
            FieldSample s;
            s.E = -0.5 * std::norm(q - bary) - me / re - ms / rs +
                  ms / as3 * std::real(std::conj(qs) * q);
            s.dE_dt = -ms * std::real(xs * std::conj(qs_dot)) / (rs * rs * rs) +
                      ms / as3 * std::real(q * std::conj(qs_dot));
            s.gradE = -(q - bary) + me * xe / (re * re * re) + ms * xs / (rs * rs * rs) +
                      ms / as3 * qs;
            s.B = 2.0;
            s.A = cd(0.0, 1.0) * q;
            return s;
        });
    }

    throw InvalidInput("unknown preset: " + id);
}

double gauge_consistency(const FieldModel& m, cd q, double h) {
    auto a1 = [&](cd p) { return m(p, 0.0).A.real(); };
    auto a2 = [&](cd p) { return m(p, 0.0).A.imag(); };
    double rot = (a2(q + h) - a2(q - h)) / (2.0 * h) -
                 (a1(q + cd(0.0, h)) - a1(q - cd(0.0, h))) / (2.0 * h);
    return std::abs(rot - m(q, 0.0).B);
}

}  // namespace orbits
