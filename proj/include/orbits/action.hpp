#pragma once

#include "orbits/field_models.hpp"
#include "orbits/loop.hpp"

namespace orbits {

// Parts of the regularized action F = K - A + C - E together with the
// auxiliary electric term E1. total is always the exact arithmetic combination
// kinetic - magnetic + coulomb - electric.
struct ActionBreakdown {
    double kinetic = 0.0;
    double magnetic = 0.0;
    double coulomb = 0.0;
    double electric = 0.0;
    double electric_aux = 0.0;
    double total = 0.0;
};

// Action of a periodic q-loop avoiding the origin:
//   1/2 ||qdot||^2 + circulation of A along q - int (E_t(q) - 1/|q|) dt.
// The gauge term enters with the orientation that makes stationary loops
// solve qddot = -B(q) i qdot - q/|q|^3 - grad E_t(q).
double action_original(const Loop& q, const FieldModel& model, double ctol = 1e-9);

// All parts of the blown-up functional for z with ||z|| > 0 (zeros allowed).
ActionBreakdown action_parts(const Loop& z, const FieldModel& model);

// The three fields whose sum drives the electric gradient:
//   eps1 = (tail of Edot |z|^2) z / ||z||^2,  eps2 = |z|^2 grad E(z^2) conj(z),
//   eps3 = E(z^2) z.
// eps1 uses the exact discrete adjoint of the cumulative time map, so the
// assembled gradient is exact for the discretized functional.
struct EpsilonFields {
    Loop eps1, eps2, eps3;
};
EpsilonFields epsilon_fields(const Loop& z, const FieldModel& model);

// L^2-gradients of the four parts and of F itself, all exact for the
// discretized functionals:
//   kinetic   4 ||z'||^2 z - 4 ||z||^2 z''
//   magnetic  4 |z|^2 B(z^2) i z'
//   coulomb   -2 z / ||z||^4
//   electric  -2 (E + E1) z / ||z||^2 + 2 eps(z) / ||z||^2
//   total     kinetic - magnetic + coulomb - electric
struct ActionGradients {
    Loop kinetic, magnetic, coulomb, electric, total;
};
ActionGradients action_gradients(const Loop& z, const FieldModel& model);

// L^2-gradient of the discretized F: l2_inner(grad, zeta) equals the
// directional derivative for every same-parity variation zeta.
Loop grad_regularized(const Loop& z, const FieldModel& model);

// Pointwise residual of the second order delay equation; algebraically equal
// to -grad_regularized / (4 ||z||^2).
Loop delay_residual(const Loop& z, const FieldModel& model);

// Coefficients of the linear ODE z'' = a z + b conj(z) + c z' satisfied by
// critical points: a real, b complex, c imaginary. Returned as periodic loops.
struct LinearCoefficients {
    Loop a, b, c;
};
LinearCoefficients linear_coefficients(const Loop& z, const FieldModel& model);

}  // namespace orbits
