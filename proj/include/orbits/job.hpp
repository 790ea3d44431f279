#pragma once

#include <filesystem>
#include <string>

#include "orbits/config.hpp"
#include "orbits/orbit_io.hpp"
#include "orbits/solver.hpp"

namespace orbits {

// Exit codes for batch jobs.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitBadConfig = 3;
inline constexpr int kExitVerifyFailed = 4;

struct VerifyThresholds {
    double ode_tol = 1e-5;
    double ode_tol_collisional = 1e-4;
    double mu_tol = 1e-5;
    double mu_pairwise_tol = 1e-7;
    double beta_imag_tol = 1e-6;
    double shooting_tol = 1e-5;
    double energy_tol = 1e-6;
    double residual_tol = 1e-6;   // recomputed delay residual, verify command
    double window = 0.02;         // exclusion half-width around collision images
};

FieldModel model_from_config(const ConfigNode& model_block);

// Seed loop from its config block; parity is dictated by the winding field
// (half-integer winding means a twisted loop).
Loop build_seed(const ConfigNode& seed_block, int n);

// Full back-transformation check of a solved orbit.
VerificationReport verify_orbit(const Loop& z, const Loop& q, const FieldModel& model,
                                const SolveReport& report, const VerifyThresholds& thr);

// Run one batch job (solve | verify | continue | map) from a config file.
// Returns an exit code; diagnostics go to stderr.
int run_job(const std::filesystem::path& config_path, const std::string& command_override = "",
            const std::filesystem::path& out_override = {});

// Plot-ready exports of an orbit file: "csv" or "svg-path".
void export_orbit(const std::filesystem::path& orbit_path, const std::string& format,
                  const std::filesystem::path& out_path);

}  // namespace orbits
