#pragma once

#include <functional>
#include <map>
#include <string>

#include "orbits/loop.hpp"

namespace orbits {

// One bundled evaluation of the physics at (q, t): electric potential, its
// time derivative and gradient, magnetic field and gauge one-form (A1, A2)
// packed as a complex number A1 + i A2.
struct FieldSample {
    double E = 0.0;
    double dE_dt = 0.0;
    cd gradE{0.0, 0.0};
    double B = 0.0;
    cd A{0.0, 0.0};
};

// Immutable model bundle. E is 1-periodic in t; the Coulomb term -1/|q| is
// never part of E and is added by consumers.
class FieldModel {
public:
    using Eval = std::function<FieldSample(cd, double)>;

    FieldModel() = default;
    FieldModel(std::string id, std::map<std::string, double> params, bool autonomous, Eval eval)
        : id_(std::move(id)), params_(std::move(params)), autonomous_(autonomous), eval_(std::move(eval)) {}

    const std::string& id() const { return id_; }
    const std::map<std::string, double>& params() const { return params_; }
    bool autonomous() const { return autonomous_; }

    FieldSample operator()(cd q, double t) const {
        t -= std::floor(t);
        return eval_(q, t);
    }

private:
    std::string id_;
    std::map<std::string, double> params_;
    bool autonomous_ = true;
    Eval eval_;
};

// Presets:
//   kepler                        pure Coulomb attraction, E = 0, B = 0
//   rotating_kepler               omega; E = -omega^2 |q|^2 / 2, B = 2 omega
//   forced_stark                  fx, fy, m; E = Re(conj(f) q) cos(2 pi m t)
//   bicircular                    m_earth, m_sun, a_earth, a_sun, omega_sun,
//                                 exclusion_radius; moon-centered rotating
//                                 frame, earth fixed on the negative real axis,
//                                 sun on a circle of radius a_sun
FieldModel make_preset(const std::string& id, const std::map<std::string, double>& params = {});

inline FieldSample eval_field(const FieldModel& m, cd q, double t) { return m(q, t); }

// |finite-difference rot A - B(q)| at step h.
double gauge_consistency(const FieldModel& m, cd q, double h);

}  // namespace orbits
