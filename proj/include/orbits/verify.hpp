#pragma once

#include <string>
#include <vector>

#include "orbits/field_models.hpp"
#include "orbits/loop.hpp"
#include "orbits/reparam.hpp"

namespace orbits {

struct VerificationReport {
    double ode_residual_sup = 0.0;
    double mu_fit = 0.0;
    std::vector<double> mu_j;
    double beta_imag_defect = 0.0;
    double energy_drift = 0.0;
    bool energy_applicable = false;   // drift is a pass/fail signal only for autonomous models
    double shooting_gap = 0.0;
    bool shooting_applicable = false; // only for collision-free orbits
    std::string winding_mod2;
    bool passed = false;
};

// Sup-norm of qddot + B(q) i qdot + q/|q|^3 + grad E_t(q) over the nodes.
// Without exclusion windows the derivatives are spectral (smooth loops only).
// With windows around collision image times, derivatives switch to order-8
// local finite-difference stencils kept clear of the windows.
double ode_residual(const Loop& q, const FieldModel& model,
                    const std::vector<double>& collision_times = {}, double window = 0.02);

struct BetaMu {
    std::vector<double> beta;   // Re beta at the nodes
    double imag_defect = 0.0;   // sup |Im beta|, should vanish on solutions
    double mu_fit = 0.0;        // least-squares constant fit of beta |q|^3
};

// beta = (qddot + B(q) i qdot + grad E_t(q)) / q for a collision-free loop;
// on solutions beta is real and beta |q|^3 is the constant mu = -1.
BetaMu beta_mu(const Loop& q, const FieldModel& model);

// mu_j = -2 ||z||^4 |z'(tau_j)|^2 at each collision, the collision-side value
// of the effective Coulomb coefficient. Empty when z has no zeros.
std::vector<double> mu_from_collisions(const Loop& z, double ctol = kDefaultCollisionTol);

struct Trajectory {
    std::vector<double> t;
    std::vector<cd> q;
    std::vector<cd> v;
    bool aborted = false;      // stopped by the |q| < r_min guard
    double abort_time = 0.0;
};

// Adaptive Runge-Kutta integration of the second order equation as a first
// order system; truncates on close approach to the origin.
Trajectory integrate_ode(cd q0, cd v0, const FieldModel& model, double T, double h0 = 1e-3,
                         double r_min = 1e-3, double tol = 1e-12);

struct EnergyAlong {
    std::vector<double> values;  // H(t) = 1/2 |qdot|^2 + E_t(q) - 1/|q| at the nodes
    double drift = 0.0;          // max - min
};

EnergyAlong energy_along(const Loop& q, const FieldModel& model);

enum class WindingParity { even, odd };

const char* to_string(WindingParity p);

// Periodic z -> even, twisted z -> odd; defined even for collisional loops.
WindingParity winding_mod2(const Loop& z);

}  // namespace orbits
