#include "orbits/orbit_io.hpp"

#include <fstream>

namespace orbits {

json loop_to_json(const Loop& a) {
    std::vector<double> re, im;
    re.reserve(static_cast<size_t>(a.size()));
    im.reserve(static_cast<size_t>(a.size()));
    for (const cd& v : a.samples()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return json{{"parity", to_string(a.parity())}, {"n", a.size()}, {"re", re}, {"im", im}};
}

Loop loop_from_json(const json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im") || !j.contains("parity"))
        throw IoError("loop JSON needs parity, n, re, im");
    auto re = j.at("re").get<std::vector<double>>();
    auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw IoError("loop JSON: re and im lengths differ");
    if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(re.size()))
        throw IoError("loop JSON: n does not match the sample count");
    std::vector<cd> s(re.size());
    for (size_t k = 0; k < re.size(); ++k) s[k] = cd(re[k], im[k]);
    return Loop(std::move(s), parity_from_string(j.at("parity").get<std::string>()));
}

json action_to_json(const ActionBreakdown& a) {
    return json{{"kinetic", a.kinetic},   {"magnetic", a.magnetic},
                {"coulomb", a.coulomb},   {"electric", a.electric},
                {"electric_aux", a.electric_aux}, {"total", a.total}};
}

ActionBreakdown action_from_json(const json& j) {
    ActionBreakdown a;
    a.kinetic = j.at("kinetic").get<double>();
    a.magnetic = j.at("magnetic").get<double>();
    a.coulomb = j.at("coulomb").get<double>();
    a.electric = j.at("electric").get<double>();
    a.electric_aux = j.at("electric_aux").get<double>();
    a.total = j.at("total").get<double>();
    return a;
}

namespace {

json collisions_to_json(const std::vector<CollisionInfo>& cols) {
    json arr = json::array();
    for (const CollisionInfo& c : cols)
        arr.push_back(json{{"tau", c.tau},
                           {"z_prime_abs", c.z_prime_abs},
                           {"t_third", c.t_third},
                           {"t_image", c.t_image}});
    return arr;
}

std::vector<CollisionInfo> collisions_from_json(const json& arr) {
    std::vector<CollisionInfo> cols;
    for (const json& c : arr)
        cols.push_back(CollisionInfo{c.at("tau").get<double>(), c.at("z_prime_abs").get<double>(),
                                     c.at("t_third").get<double>(), c.at("t_image").get<double>()});
    return cols;
}

}  // namespace

json report_to_json(const SolveReport& r) {
    json j{{"converged", r.converged},
           {"iterations", r.iterations},
           {"phase1_iters", r.phase1_iters},
           {"final_grad_norm", r.final_grad_norm},
           {"residual_sup", r.residual_sup},
           {"collisions", collisions_to_json(r.collisions)},
           {"winding_mod2", r.winding_mod2},
           {"mu_estimates", r.mu_estimates}};
    if (r.winding) j["winding"] = *r.winding;
    return j;
}

SolveReport report_from_json(const json& j) {
    SolveReport r;
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.phase1_iters = j.value("phase1_iters", 0);
    r.final_grad_norm = j.at("final_grad_norm").get<double>();
    r.residual_sup = j.at("residual_sup").get<double>();
    r.collisions = collisions_from_json(j.at("collisions"));
    r.winding_mod2 = j.at("winding_mod2").get<std::string>();
    r.mu_estimates = j.at("mu_estimates").get<std::vector<double>>();
    if (j.contains("winding")) r.winding = j.at("winding").get<double>();
    return r;
}

json verification_to_json(const VerificationReport& v) {
    return json{{"ode_residual_sup", v.ode_residual_sup},
                {"mu_fit", v.mu_fit},
                {"mu_j", v.mu_j},
                {"beta_imag_defect", v.beta_imag_defect},
                {"energy_drift", v.energy_drift},
                {"energy_applicable", v.energy_applicable},
                {"shooting_gap", v.shooting_gap},
                {"shooting_applicable", v.shooting_applicable},
                {"winding_mod2", v.winding_mod2},
                {"passed", v.passed}};
}

VerificationReport verification_from_json(const json& j) {
    VerificationReport v;
    v.ode_residual_sup = j.at("ode_residual_sup").get<double>();
    v.mu_fit = j.at("mu_fit").get<double>();
    v.mu_j = j.at("mu_j").get<std::vector<double>>();
    v.beta_imag_defect = j.value("beta_imag_defect", 0.0);
    v.energy_drift = j.at("energy_drift").get<double>();
    v.energy_applicable = j.at("energy_applicable").get<bool>();
    v.shooting_gap = j.at("shooting_gap").get<double>();
    v.shooting_applicable = j.at("shooting_applicable").get<bool>();
    v.winding_mod2 = j.at("winding_mod2").get<std::string>();
    v.passed = j.at("passed").get<bool>();
    return v;
}

void write_orbit(const std::filesystem::path& path, const OrbitFile& orbit) {
    json j{{"meta",
            {{"model", orbit.model_id},
             {"params", orbit.model_params},
             {"parity", to_string(orbit.z.parity())},
             {"n", orbit.z.size()}}},
           {"z", loop_to_json(orbit.z)},
           {"q", loop_to_json(orbit.q)},
           {"action", action_to_json(orbit.action)},
           {"report", report_to_json(orbit.report)},
           {"verification", verification_to_json(orbit.verification)}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

OrbitFile read_orbit(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed orbit file " + path.string() + ": " + e.what());
    }
    try {
        OrbitFile o;
        o.model_id = j.at("meta").at("model").get<std::string>();
        o.model_params = j.at("meta").at("params").get<std::map<std::string, double>>();
        o.z = loop_from_json(j.at("z"));
        o.q = loop_from_json(j.at("q"));
        o.action = action_from_json(j.at("action"));
        o.report = report_from_json(j.at("report"));
        o.verification = verification_from_json(j.at("verification"));
        return o;
    } catch (const json::exception& e) {
        throw IoError("incomplete orbit file " + path.string() + ": " + e.what());
    }
}

void write_loop(const std::filesystem::path& path, const Loop& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << loop_to_json(a).dump(2) << "\n";
}

Loop read_loop(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed loop file " + path.string() + ": " + e.what());
    }
    return loop_from_json(j);
}

}  // namespace orbits
