#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "drrs/controller.h"
#include "drrs/estimator.h"
#include "drrs/types.h"

namespace drrs::harness {

struct StepCommand {
  Eigen::Vector2d value{std::numbers::pi / 4, -std::numbers::pi / 3};
  bool operator==(const StepCommand&) const = default;
};

/// r(t) = amplitude * [sin(frequency t), cos(frequency t)].
struct HarmonicCommand {
  double amplitude = std::numbers::pi / 4;
  double frequency = 0.5;  // rad/s
  bool operator==(const HarmonicCommand&) const = default;
};

using Command = std::variant<StepCommand, HarmonicCommand>;

struct Reference {
  Eigen::Vector2d r;
  Eigen::Vector2d r_dot;
  Eigen::Vector2d r_ddot;
};

/// Analytic reference and its first two derivatives.
Reference evaluate_command(const Command& command, double t);

struct ControllerSettings {
  double q_weight = 10.0;  // state weight, scaled identity
  double r_weight = 1.0;   // input weight, scaled identity
  controller::ControlConfig control;
  bool operator==(const ControllerSettings&) const = default;
};

struct SimSettings {
  double dt = 1e-3;
  double t_final = 30.0;
  PhysicsMode physics_mode = PhysicsMode::kCorrected;
  /// |omega| clamp in rad/s; disabled when empty.
  std::optional<double> rotor_speed_limit;
  bool operator==(const SimSettings&) const = default;
};

struct OutputSettings {
  std::string csv_path = "trace.csv";
  std::optional<std::string> svg_path;
  bool operator==(const OutputSettings&) const = default;
};

struct ScenarioConfig {
  PhysicalParams params;
  Command command = StepCommand{};
  estimator::EstimatorConfig estimator;
  ControllerSettings controller;
  SimSettings sim;
  OutputSettings outputs;

  /// Every violated invariant; empty when valid.
  std::vector<std::string> validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

struct TraceRow {
  double t = 0.0;
  PlantState state;
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  double omega_a = 0.0;
  double omega_b = 0.0;
  Eigen::Vector2d moments = Eigen::Vector2d::Zero();  // M_v, M_h
  ThetaVec theta_hat;
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
};

using Trace = std::vector<TraceRow>;

struct RunMetrics {
  Eigen::Vector2d final_error = Eigen::Vector2d::Zero();    // r - y at the last row, rad
  Eigen::Vector2d rms_error_tail = Eigen::Vector2d::Zero(); // over the last 20 % of the run
  double max_rotor_speed = 0.0;                             // rad/s
  ThetaVec estimator_final;
  bool singularity_hit = false;
  double singularity_time = 0.0;
  /// Steps in which the control authority guard fired and control was held.
  std::vector<double> authority_event_times;
  /// max |xi2_dot - v| over every derivative evaluation.
  double max_linearization_residual = 0.0;
  /// max |xi2_dot - F1 - Phi Theta_true| over every derivative evaluation.
  double max_regressor_residual = 0.0;
  double min_excitation_final = 0.0;
};

struct RunResult {
  Trace trace;
  RunMetrics metrics;
};

/// Runs the closed loop plant + estimator + outer loop + adaptive IOL law as
/// one ODE integrated by fixed-step RK4, with every block evaluated at each
/// stage. A singularity aborts with a truncated trace; a control authority
/// loss holds the last valid command and is logged.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Angle difference sup-norm between two traces over their common grid.
double max_angle_deviation(const Trace& a, const Trace& b);

/// RMS of (omega - omega_ref) over both rotors divided by RMS of omega_ref.
double relative_rotor_rms_difference(const Trace& trace, const Trace& reference);

enum class SweepKind { kInertia, kRotorCoefficients, kRotorAxis };

std::string_view to_string(SweepKind kind);
SweepKind sweep_kind_from_string(std::string_view name);

/// The swept values: inertia and rotor sweeps scale by alpha, the axis sweep
/// sets beta_a with beta_b = -beta_a.
std::vector<double> sweep_values(SweepKind kind);

/// Parameters used for one sweep point, derived from `base`.
PhysicalParams sweep_params(SweepKind kind, const PhysicalParams& base, double value);

struct SweepPoint {
  double value = 0.0;
  RunResult run;
  double max_angle_deviation = 0.0;      // against the nominal run
  double rotor_rms_difference = 0.0;     // relative, against the nominal run
};

struct SweepReport {
  SweepKind kind;
  RunResult nominal;
  std::vector<SweepPoint> points;  // in sweep_values order
};

/// Integration step used by the sweeps. The rotor-coefficient sweep reaches
/// input gains ~2000x the estimate, whose closed-loop poles leave the RK4
/// stability region at dt = 1e-3.
inline constexpr double kSweepDt = 1e-4;

/// Runs the nominal configuration plus every sweep point with controller and
/// estimator settings unchanged. Points run concurrently; results keep input
/// order.
SweepReport run_sweep(SweepKind kind, const ScenarioConfig& base);

}  // namespace drrs::harness
