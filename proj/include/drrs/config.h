#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "drrs/harness.h"

// JSON scenario files. Every omitted field takes the reference-rig default;
// unknown keys are rejected.
//
//   {
//     "physical":   {"J1", "J2", "J3", "ell", "k_f", "k_tau", "beta_a", "beta_b"},
//     "command":    {"type": "step", "value": [rv, rh]}
//                 | {"type": "harmonic", "amplitude": a, "frequency": w},
//     "estimator":  {"gamma", "lambda", "c1", "c2", "alpha1", "alpha2",
//                    "theta_hat0": [6], "adapt": bool},
//     "controller": {"q_weight", "r_weight", "eps_det", "paper_literal_sign": bool},
//     "sim":        {"dt", "t_final", "physics_mode": "corrected" | "paper_literal",
//                    "rotor_speed_limit": number | null},
//     "outputs":    {"csv_path": str, "svg_path": str | null}
//   }
namespace drrs::config {

/// Parses and validates. `overrides` are "dotted.key=value" strings applied
/// to the document first; values are read as JSON, falling back to a string.
/// Throws ParseError (with line) or ValidationError (every violation).
harness::ScenarioConfig parse_config(std::string_view text,
                                     const std::vector<std::string>& overrides = {});

harness::ScenarioConfig load_config(const std::filesystem::path& path,
                                    const std::vector<std::string>& overrides = {});

/// Full document; parse_config(serialize_config(c)) == c.
std::string serialize_config(const harness::ScenarioConfig& cfg);

}  // namespace drrs::config
