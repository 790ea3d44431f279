#pragma once

#include <vector>

#include "orbits/loop.hpp"

namespace orbits {

// A parameter tau0 with z(tau0) = 0, together with |z'(tau0)| and the third
// derivative of t_z there (the first two vanish; t_z has an inflection).
struct CollisionInfo {
    double tau = 0.0;
    double z_prime_abs = 0.0;
    double t_third = 0.0;
    double t_image = 0.0;  // t_z(tau)
};

// The loop-dependent time change t_z(tau) = int_0^tau |z|^2 / ||z||^2 with
// spectral interpolation support. Strictly increasing when z has no zeros;
// at zeros it has inflection points but stays a homeomorphism of the circle.
class ReparamTable {
public:
    ReparamTable(const Loop& z, double ctol);

    const Loop& source() const { return z_; }
    double norm_sq() const { return norm_sq_; }
    const std::vector<double>& cumulative() const { return cum_; }
    const std::vector<CollisionInfo>& collisions() const { return cols_; }

    double t_of(double tau) const;       // t_z(tau), exact endpoints t_z(0)=0, t_z(1)=1
    double speed_sq(double tau) const;   // |z(tau)|^2
    double invert(double t) const;       // tau with |t_z(tau) - t| < 1e-12

private:
    Loop z_;
    LoopInterp zi_;
    double norm_sq_ = 0.0;
    double max_abs_ = 0.0;
    std::vector<double> cum_;            // t_z at the source nodes
    std::vector<cd> anti_;               // working-grid spectrum of the periodic part
    double anti0_ = 0.0;                 // its value at tau = 0
    std::vector<CollisionInfo> cols_;

    void detect_collisions(double ctol);
};

inline constexpr double kDefaultCollisionTol = 1e-7;

ReparamTable time_map(const Loop& z, double ctol = kDefaultCollisionTol);

double invert_time(const ReparamTable& table, double t);

// Sigma(z): q(t) = z(tau_z(t))^2 sampled at m uniform t-nodes (default 4N).
// Identical output for z and -z; doubles the winding number of nonvanishing z.
Loop sigma_map(const Loop& z, int m = 0);

std::vector<CollisionInfo> collision_report(const Loop& z, double ctol = kDefaultCollisionTol);

}  // namespace orbits
