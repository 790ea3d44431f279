#pragma once

#include <filesystem>

#include <json.hpp>

#include "orbits/action.hpp"
#include "orbits/solver.hpp"
#include "orbits/verify.hpp"

// JSON schemas shared by every tool:
//   loop   {"parity": "periodic"|"antiperiodic", "n": N, "re": [...], "im": [...]}
//   orbit  {"meta": {...}, "z": loop, "q": loop, "action": {...},
//           "report": {...}, "verification": {...}}

namespace orbits {

using json = nlohmann::json;

json loop_to_json(const Loop& a);
Loop loop_from_json(const json& j);

json action_to_json(const ActionBreakdown& a);
ActionBreakdown action_from_json(const json& j);

json report_to_json(const SolveReport& r);
SolveReport report_from_json(const json& j);

json verification_to_json(const VerificationReport& v);
VerificationReport verification_from_json(const json& j);

struct OrbitFile {
    std::string model_id;
    std::map<std::string, double> model_params;
    Loop z;
    Loop q;
    ActionBreakdown action{};
    SolveReport report{};
    VerificationReport verification{};
};

void write_orbit(const std::filesystem::path& path, const OrbitFile& orbit);
OrbitFile read_orbit(const std::filesystem::path& path);

void write_loop(const std::filesystem::path& path, const Loop& a);
Loop read_loop(const std::filesystem::path& path);

}  // namespace orbits
