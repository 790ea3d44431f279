#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbits/action.hpp"
#include "orbits/reparam.hpp"

namespace orbits {

struct SolveOptions {
    int max_iters = 5000;
    double grad_tol = 1e-9;          // sup-norm of grad F
    double flow_step = 0.1;          // initial gradient-flow step
    double newton_switch_tol = 1e-3;
    int n = 128;
    Parity parity = Parity::antiperiodic;
    int max_krylov = 80;
    double min_norm_factor = 0.1;    // reject steps with ||z|| below this times ||seed||

    void validate() const;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    int phase1_iters = 0;
    double final_grad_norm = 0.0;
    ActionBreakdown action{};
    double residual_sup = 0.0;
    std::vector<CollisionInfo> collisions;
    std::optional<double> winding;   // half-integer, only when collision-free
    std::string winding_mod2;        // "even" or "odd", from the parity of z
    std::vector<double> mu_estimates;
    std::vector<double> f_history;   // accepted functional values, phase 1
};

// Critical point search: preconditioned gradient flow with backtracking,
// then Newton-Krylov once the gradient is small. Collisions (zeros of z) are
// allowed throughout; only ||z|| -> 0 is guarded.
std::pair<Loop, SolveReport> solve_critical(const Loop& seed, const FieldModel& model,
                                            const SolveOptions& opts);

using ModelFamily = std::function<FieldModel(double)>;

struct FamilyStep {
    double s = 0.0;
    Loop z;
    SolveReport report;
};

struct FamilyResult {
    std::vector<FamilyStep> steps;
    bool truncated = false;
};

// Natural-parameter continuation over s in [0,1] at `steps` points; each
// solution seeds the next, with step bisection on failure.
FamilyResult continue_family(const Loop& seed, const ModelFamily& family, int steps,
                             const SolveOptions& opts);

}  // namespace orbits
