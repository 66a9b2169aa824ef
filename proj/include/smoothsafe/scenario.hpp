#pragma once

// Scenario files: JSON documents mapping one-to-one onto Scenario.
//
//   {
//     "system": "SingleIntegrator" | "DoubleIntegrator" | "PlanarDrone",
//     "x0": [...], "goal": [x, y],          // m, m/s, rad, rad/s
//     "duration": s, "dt": s,
//     "feedforward": bool, "start_on_field": bool,
//     "gains": {"k", "k_p", "k_v", "k_theta", "k_omega",    // 1/s, 1/s^2
//               "mass", "inertia", "gravity"},              // kg, kg m^2, m/s^2
//     "obstacles": [{"center": [x, y], "radius": m, "margin": m}],
//     "filter": {"kind", "weight": [[..], [..]],
//                "gate": {"epsilon", "delta", "shape"},
//                "classk": {"alpha0", "form"},
//                "penalty": {"delta", "mu", "psi_max", "shape"}}
//   }
//
// Omitted keys take their defaults; unknown keys are rejected.

#include "smoothsafe/sim.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace smoothsafe {

nlohmann::json scenario_to_json(const Scenario& sc);

// Strict parse: unknown keys and type mismatches raise ConfigError naming the key.
// Does not run Scenario::validate.
Scenario scenario_from_json(const nlohmann::json& doc);

// Applies "dotted.path=value" (array entries by index, e.g. obstacles.0.radius).
// The value is read as JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Parse, fill defaults, apply overrides, then validate.
Scenario parse_scenario(const std::string& text, const std::vector<std::string>& overrides = {});
Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

std::string dump_scenario(const Scenario& sc);

}  // namespace smoothsafe
