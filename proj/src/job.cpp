#include "orbits/job.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace orbits {

namespace fs = std::filesystem;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Random periodic scalar field with modes 1..kmax, normalized to sup norm 1.
std::vector<cd> noise_field(int n, int kmax, uint64_t seed, bool real_only) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cd> rho(static_cast<size_t>(n), cd(0.0, 0.0));
    for (int k = 1; k <= kmax; ++k) {
        cd a(gauss(rng), gauss(rng));
        cd b(gauss(rng), gauss(rng));
        if (real_only) {
            a = cd(a.real(), 0.0);
            b = cd(b.real(), 0.0);
        }
        double decay = 1.0 / (1.0 + k);
        for (int j = 0; j < n; ++j) {
            double tau = static_cast<double>(j) / n;
            rho[static_cast<size_t>(j)] +=
                decay * (a * std::cos(two_pi * k * tau) + b * std::sin(two_pi * k * tau));
        }
    }
    double sup = 0.0;
    for (const cd& v : rho) sup = std::max(sup, std::abs(v));
    if (sup > 0.0)
        for (cd& v : rho) v /= sup;
    return rho;
}

Loop perturb_loop(const Loop& base, const ConfigNode& p) {
    double amp = p.get_double("amplitude", 0.05);
    int kmax = p.get_int("max_mode", 6);
    auto seed = static_cast<uint64_t>(p.get_int("rng_seed", 1));
    bool real_only = p.get_bool("real", false);
    std::vector<cd> rho = noise_field(base.size(), kmax, seed, real_only);
    std::vector<cd> s(base.samples());
    for (int j = 0; j < base.size(); ++j)
        s[static_cast<size_t>(j)] *= 1.0 + amp * rho[static_cast<size_t>(j)];
    return Loop(std::move(s), base.parity());
}

int winding_twice(double w) {
    int twice = static_cast<int>(std::lround(2.0 * w));
    if (std::abs(2.0 * w - twice) > 1e-12)
        throw ConfigError("winding must be an integer or half-integer");
    return twice;
}

VerifyThresholds thresholds_from_config(const ConfigNode& root) {
    VerifyThresholds thr;
    if (!root.has_child("verify")) return thr;
    const ConfigNode& v = root.child("verify");
    thr.ode_tol = v.get_double("ode_tol", thr.ode_tol);
    thr.ode_tol_collisional = v.get_double("ode_tol_collisional", thr.ode_tol_collisional);
    thr.mu_tol = v.get_double("mu_tol", thr.mu_tol);
    thr.mu_pairwise_tol = v.get_double("mu_pairwise_tol", thr.mu_pairwise_tol);
    thr.beta_imag_tol = v.get_double("beta_imag_tol", thr.beta_imag_tol);
    thr.shooting_tol = v.get_double("shooting_tol", thr.shooting_tol);
    thr.energy_tol = v.get_double("energy_tol", thr.energy_tol);
    thr.residual_tol = v.get_double("residual_tol", thr.residual_tol);
    thr.window = v.get_double("window", thr.window);
    return thr;
}

SolveOptions options_from_config(const ConfigNode& root, Parity parity) {
    SolveOptions opts;
    opts.parity = parity;
    if (!root.has_child("solver")) return opts;
    const ConfigNode& s = root.child("solver");
    opts.n = s.get_int("n", opts.n);
    opts.grad_tol = s.get_double("grad_tol", opts.grad_tol);
    opts.max_iters = s.get_int("max_iters", opts.max_iters);
    opts.flow_step = s.get_double("flow_step", opts.flow_step);
    opts.newton_switch_tol = s.get_double("newton_switch_tol", opts.newton_switch_tol);
    opts.max_krylov = s.get_int("max_krylov", opts.max_krylov);
    if (s.has_value("parity") && parity_from_string(s.get_string("parity")) != parity)
        throw ConfigError("solver.parity contradicts the seed winding");
    return opts;
}

std::vector<double> collision_images(const SolveReport& rep) {
    std::vector<double> t;
    for (const CollisionInfo& c : rep.collisions) t.push_back(c.t_image);
    return t;
}

void write_exports(const ConfigNode& root, const fs::path& orbit_path, const fs::path& dir,
                   const std::string& stem) {
    if (!root.has_value("export")) return;
    std::string spec = root.get_string("export");
    std::istringstream ss(spec);
    std::string fmt;
    while (std::getline(ss, fmt, ',')) {
        fmt.erase(std::remove_if(fmt.begin(), fmt.end(), ::isspace), fmt.end());
        if (fmt.empty()) continue;
        std::string ext = fmt == "csv" ? ".csv" : ".svg";
        export_orbit(orbit_path, fmt, dir / (stem + ext));
    }
}

}  // namespace

FieldModel model_from_config(const ConfigNode& model_block) {
    std::string preset = model_block.get_string("preset");
    std::map<std::string, double> params;
    if (model_block.has_child("params")) {
        const ConfigNode& p = model_block.child("params");
        for (const auto& [k, v] : p.values()) params[k] = p.get_double(k);
    }
    if (model_block.has_value("exclusion_radius"))
        params["exclusion_radius"] = model_block.get_double("exclusion_radius");
    return make_preset(preset, params);
}

Loop build_seed(const ConfigNode& seed_block, int n) {
    int specs = 0;
    for (const char* name : {"circle", "collision_seed", "file"})
        if (seed_block.has_child(name) || seed_block.has_value(name)) ++specs;
    if (specs != 1) throw ConfigError("seed: exactly one of circle, collision, file required");

    Loop base;
    if (seed_block.has_child("circle")) {
        const ConfigNode& c = seed_block.child("circle");
        double radius = c.get_double("radius");
        int twice = winding_twice(c.get_double("winding"));
        if (radius <= 0.0) throw ConfigError("circle seed: radius must be positive");
        Parity parity = (twice % 2 != 0) ? Parity::antiperiodic : Parity::periodic;
        std::vector<cd> s(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j)
            s[static_cast<size_t>(j)] = radius * std::polar(1.0, std::numbers::pi * twice * j / n);
        base = Loop(std::move(s), parity);
    } else if (seed_block.has_child("collision_seed")) {
        const ConfigNode& c = seed_block.child("collision_seed");
        double amplitude = c.get_double("amplitude");
        int twice = winding_twice(c.get_double("winding"));
        if (amplitude <= 0.0) throw ConfigError("collision seed: amplitude must be positive");
        Parity parity = (twice % 2 != 0) ? Parity::antiperiodic : Parity::periodic;
        std::vector<cd> s(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j)
            s[static_cast<size_t>(j)] = amplitude * std::cos(std::numbers::pi * twice * j / n);
        base = Loop(std::move(s), parity);
    } else {
        fs::path path = seed_block.get_string("file");
        base = read_loop(path);
        if (base.size() != n) base = resample(base, n);
    }

    if (seed_block.has_child("perturb")) base = perturb_loop(base, seed_block.child("perturb"));
    return base;
}

VerificationReport verify_orbit(const Loop& z, const Loop& q, const FieldModel& model,
                                const SolveReport& report, const VerifyThresholds& thr) {
    VerificationReport v;
    v.winding_mod2 = to_string(winding_mod2(z));
    bool ok = true;

    if (report.collisions.empty()) {
        v.ode_residual_sup = ode_residual(q, model);
        ok = ok && v.ode_residual_sup < thr.ode_tol;

        BetaMu bm = beta_mu(q, model);
        v.mu_fit = bm.mu_fit;
        v.beta_imag_defect = bm.imag_defect;
        ok = ok && std::abs(v.mu_fit + 1.0) < thr.mu_tol && v.beta_imag_defect < thr.beta_imag_tol;

        Loop dq = spectral_derivative(q);
        Trajectory traj = integrate_ode(q[0], dq[0], model, 1.0);
        v.shooting_applicable = true;
        if (traj.aborted) {
            v.shooting_gap = std::numeric_limits<double>::max();  // keeps the JSON finite
            ok = false;
        } else {
            v.shooting_gap = std::abs(traj.q.back() - q[0]) + std::abs(traj.v.back() - dq[0]);
            ok = ok && v.shooting_gap < thr.shooting_tol;
        }
    } else {
        v.ode_residual_sup = ode_residual(q, model, collision_images(report), thr.window);
        ok = ok && v.ode_residual_sup < thr.ode_tol_collisional;

        v.mu_j = mu_from_collisions(z);
        double mean = 0.0;
        for (double m : v.mu_j) mean += m;
        v.mu_fit = mean / static_cast<double>(v.mu_j.size());
        for (double m : v.mu_j) ok = ok && std::abs(m + 1.0) < thr.mu_tol;
        for (double m : v.mu_j)
            for (double m2 : v.mu_j) ok = ok && std::abs(m - m2) < thr.mu_pairwise_tol;
    }

    if (report.collisions.empty()) {
        EnergyAlong en = energy_along(q, model);
        v.energy_drift = en.drift;
        v.energy_applicable = model.autonomous();
        if (v.energy_applicable) ok = ok && v.energy_drift < thr.energy_tol;
    }

    v.passed = ok;
    return v;
}

namespace {

OrbitFile assemble_orbit(const Loop& z, const SolveReport& rep, const FieldModel& model,
                         const VerifyThresholds& thr, int sigma_mult) {
    OrbitFile o;
    o.model_id = model.id();
    o.model_params = model.params();
    o.z = z;
    o.q = sigma_map(z, sigma_mult * z.size());
    o.action = rep.action;
    o.report = rep;
    if (rep.converged) {
        try {
            o.verification = verify_orbit(z, o.q, model, rep, thr);
        } catch (const std::exception& e) {
            std::cerr << "verification failed to run: " << e.what() << "\n";
            o.verification = VerificationReport{};
        }
    }
    return o;
}

int cmd_solve(const ConfigNode& root, const fs::path& out_dir) {
    FieldModel model = model_from_config(root.child("model"));
    VerifyThresholds thr = thresholds_from_config(root);
    int n = root.has_child("solver") ? root.child("solver").get_int("n", 128) : 128;
    Loop seed = build_seed(root.child("seed"), n);
    SolveOptions opts = options_from_config(root, seed.parity());

    auto [z, rep] = solve_critical(seed, model, opts);
    int sigma_mult = root.get_int("sigma_multiplier", 4);
    OrbitFile orbit = assemble_orbit(z, rep, model, thr, sigma_mult);

    fs::create_directories(out_dir);
    fs::path orbit_path = out_dir / "orbit.json";
    write_orbit(orbit_path, orbit);
    write_exports(root, orbit_path, out_dir, "orbit");

    std::cerr << "solve: converged=" << (rep.converged ? "yes" : "no")
              << " iterations=" << rep.iterations << " residual=" << rep.residual_sup
              << " collisions=" << rep.collisions.size()
              << " verified=" << (orbit.verification.passed ? "yes" : "no") << "\n";
    if (!rep.converged) return kExitNotConverged;
    if (!orbit.verification.passed) return kExitVerifyFailed;
    return kExitOk;
}

int cmd_verify(const ConfigNode& root, const fs::path&) {
    fs::path input = root.get_string("input");
    OrbitFile stored = read_orbit(input);
    FieldModel model = make_preset(stored.model_id, stored.model_params);
    VerifyThresholds thr = thresholds_from_config(root);

    // recompute everything from the stored z; nothing in the file is trusted
    double residual = 0.0;
    {
        Loop r = delay_residual(stored.z, model);
        for (const cd& v : r.samples()) residual = std::max(residual, std::abs(v));
    }
    Loop q = sigma_map(stored.z, stored.q.size());
    double q_mismatch = 0.0;
    for (int j = 0; j < q.size(); ++j)
        q_mismatch = std::max(q_mismatch, std::abs(q[j] - stored.q[j]));

    SolveReport rep = stored.report;
    rep.collisions = collision_report(stored.z);
    VerificationReport fresh = verify_orbit(stored.z, q, model, rep, thr);

    std::cout << verification_to_json(fresh).dump(2) << "\n";
    std::cerr << "verify: residual=" << residual << " q_mismatch=" << q_mismatch
              << " passed=" << (fresh.passed ? "yes" : "no") << "\n";
    bool ok = fresh.passed && residual < thr.residual_tol && q_mismatch < 1e-9;
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_continue(const ConfigNode& root, const fs::path& out_dir) {
    const ConfigNode& model_block = root.child("model");
    const ConfigNode& cont = root.child("continuation");
    int steps = cont.get_int("steps");
    VerifyThresholds thr = thresholds_from_config(root);

    std::map<std::string, double> p0;
    if (model_block.has_child("params")) {
        const ConfigNode& p = model_block.child("params");
        for (const auto& [k, v] : p.values()) p0[k] = p.get_double(k);
    }
    std::map<std::string, double> p1 = p0;
    if (cont.has_child("params_end")) {
        const ConfigNode& p = cont.child("params_end");
        for (const auto& [k, v] : p.values()) p1[k] = p.get_double(k);
    }
    std::string preset = model_block.get_string("preset");
    double rex = model_block.get_double("exclusion_radius", -1.0);

    ModelFamily family = [preset, p0, p1, rex](double s) {
        std::map<std::string, double> p = p0;
        for (const auto& [k, v1] : p1) {
            double v0 = p.count(k) ? p.at(k) : 0.0;
            p[k] = v0 + s * (v1 - v0);
        }
        if (rex >= 0.0) p["exclusion_radius"] = rex;
        return make_preset(preset, p);
    };

    int n = root.has_child("solver") ? root.child("solver").get_int("n", 128) : 128;
    Loop seed = build_seed(root.child("seed"), n);
    SolveOptions opts = options_from_config(root, seed.parity());

    FamilyResult fam = continue_family(seed, family, steps, opts);

    fs::create_directories(out_dir);
    json manifest;
    manifest["truncated"] = fam.truncated;
    manifest["steps"] = json::array();
    int sigma_mult = root.get_int("sigma_multiplier", 4);
    for (size_t k = 0; k < fam.steps.size(); ++k) {
        const FamilyStep& st = fam.steps[k];
        char name[32];
        std::snprintf(name, sizeof(name), "orbit_%03zu.json", k);
        OrbitFile orbit = assemble_orbit(st.z, st.report, family(st.s), thr, sigma_mult);
        write_orbit(out_dir / name, orbit);
        manifest["steps"].push_back(json{{"s", st.s},
                                         {"file", name},
                                         {"converged", st.report.converged},
                                         {"residual_sup", st.report.residual_sup},
                                         {"action_total", st.report.action.total},
                                         {"verified", orbit.verification.passed}});
    }
    std::ofstream mf(out_dir / "manifest.json");
    mf << manifest.dump(2) << "\n";

    std::cerr << "continue: " << fam.steps.size() << "/" << steps << " steps"
              << (fam.truncated ? " (truncated)" : "") << "\n";
    return fam.truncated ? kExitNotConverged : kExitOk;
}

int cmd_map(const ConfigNode& root, const fs::path& out_dir) {
    fs::path input = root.get_string("input");
    Loop z = read_loop(input);
    int m = root.get_int("resolution", 4 * z.size());
    Loop q = sigma_map(z, m);
    fs::create_directories(out_dir);
    write_loop(out_dir / "mapped.json", q);
    return kExitOk;
}

}  // namespace

int run_job(const fs::path& config_path, const std::string& command_override,
            const fs::path& out_override) {
    try {
        ConfigNode root = parse_config_file(config_path);
        std::string command =
            command_override.empty() ? root.get_string("command") : command_override;
        if (!command_override.empty() && root.has_value("command") &&
            root.get_string("command") != command_override)
            throw ConfigError("config command '" + root.get_string("command") +
                              "' contradicts the CLI subcommand '" + command_override + "'");
        fs::path out_dir = !out_override.empty() ? out_override
                                                 : fs::path(root.get_string("out", "orbits_out"));

        if (command == "solve") return cmd_solve(root, out_dir);
        if (command == "verify") return cmd_verify(root, out_dir);
        if (command == "continue") return cmd_continue(root, out_dir);
        if (command == "map") return cmd_map(root, out_dir);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotConverged;
    }
}

void export_orbit(const fs::path& orbit_path, const std::string& format, const fs::path& out_path) {
    OrbitFile o = read_orbit(orbit_path);

    if (format == "csv") {
        ReparamTable table = time_map(o.z);
        LoopInterp zi(o.z);
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write " + out_path.string());
        out << "t,re_q,im_q,abs_q,tau,re_z,im_z\n";
        out.precision(17);
        for (int j = 0; j < o.q.size(); ++j) {
            double t = o.q.node(j);
            double tau = table.invert(t);
            cd z = zi.eval(tau);
            out << t << ',' << o.q[j].real() << ',' << o.q[j].imag() << ',' << std::abs(o.q[j])
                << ',' << tau << ',' << z.real() << ',' << z.imag() << "\n";
        }
        return;
    }

    if (format == "svg-path" || format == "svg") {
        double ext = 0.0;
        for (const cd& v : o.q.samples()) ext = std::max({ext, std::abs(v.real()), std::abs(v.imag())});
        ext = ext > 0.0 ? 1.15 * ext : 1.0;
        const double sc = 400.0 / ext;
        auto X = [&](double x) { return 440.0 + sc * x; };
        auto Y = [&](double y) { return 440.0 - sc * y; };

        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write " + out_path.string());
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 880 880\">\n";
        out << "<rect width=\"880\" height=\"880\" fill=\"white\"/>\n";
        out << "<line x1=\"430\" y1=\"440\" x2=\"450\" y2=\"440\" stroke=\"#888\"/>\n";
        out << "<line x1=\"440\" y1=\"430\" x2=\"440\" y2=\"450\" stroke=\"#888\"/>\n";
        out << "<path fill=\"none\" stroke=\"#1a55a0\" stroke-width=\"1.5\" d=\"";
        for (int j = 0; j < o.q.size(); ++j)
            out << (j == 0 ? 'M' : 'L') << X(o.q[j].real()) << ' ' << Y(o.q[j].imag()) << ' ';
        out << "Z\"/>\n";
        for (const CollisionInfo& c : o.report.collisions) {
            (void)c;
            out << "<circle cx=\"" << X(0.0) << "\" cy=\"" << Y(0.0)
                << "\" r=\"5\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
        }
        out << "</svg>\n";
        return;
    }

    throw InvalidInput("export_orbit: unknown format '" + format + "'");
}

}  // namespace orbits
