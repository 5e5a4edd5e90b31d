#include "drrs/harness.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "drrs/dynamics.h"

namespace drrs::harness {
namespace {

constexpr double kPi = std::numbers::pi;

ScenarioConfig short_step(double t_final = 5.0) {
  ScenarioConfig cfg;
  cfg.sim.t_final = t_final;
  return cfg;
}

TEST(Commands, StepIsConstant) {
  const Reference ref = evaluate_command(StepCommand{}, 3.0);
  EXPECT_EQ(ref.r, Eigen::Vector2d(kPi / 4, -kPi / 3));
  EXPECT_TRUE(ref.r_dot.isZero(0));
  EXPECT_TRUE(ref.r_ddot.isZero(0));
}

TEST(Commands, HarmonicDerivatives) {
  const HarmonicCommand h;
  for (double t : {0.0, 0.9, 4.2, 29.0}) {
    const Reference ref = evaluate_command(h, t);
    EXPECT_NEAR(ref.r(0), kPi / 4 * std::sin(t / 2), 1e-15);
    EXPECT_NEAR(ref.r(1), kPi / 4 * std::cos(t / 2), 1e-15);
    EXPECT_NEAR(ref.r_dot(0), kPi / 8 * std::cos(t / 2), 1e-15);
    EXPECT_NEAR(ref.r_dot(1), -kPi / 8 * std::sin(t / 2), 1e-15);
    EXPECT_LT((ref.r_ddot + ref.r / 4).norm(), 1e-15);
  }
}

TEST(Validate, CollectsEveryProblem) {
  ScenarioConfig cfg;
  EXPECT_TRUE(cfg.validate().empty());
  cfg.sim.dt = -1;
  cfg.params.J1 = 0;
  cfg.estimator.lambda = -2;
  EXPECT_GE(cfg.validate().size(), 3u);
}

TEST(RunScenario, ZeroCommandStaysAtRest) {
  ScenarioConfig cfg = short_step(2.0);
  cfg.command = StepCommand{Eigen::Vector2d::Zero()};
  const RunResult run = run_scenario(cfg);
  ASSERT_EQ(run.trace.size(), 2001u);
  for (const auto& row : run.trace) {
    EXPECT_TRUE(row.state.to_vector().isZero(0));
    EXPECT_EQ(row.omega_a, 0.0);
    EXPECT_EQ(row.omega_b, 0.0);
    EXPECT_TRUE(row.q.isZero(0));
  }
  EXPECT_FALSE(run.metrics.singularity_hit);
}

TEST(RunScenario, StepTracking) {
  const RunResult run = run_scenario(ScenarioConfig{});
  EXPECT_EQ(run.trace.size(), static_cast<std::size_t>(std::lround(30.0 / 1e-3)) + 1);
  EXPECT_LT(run.metrics.final_error.norm(), 1e-2);
  EXPECT_FALSE(run.metrics.singularity_hit);
  EXPECT_NEAR(run.trace.back().t, 30.0, 1e-9);
  EXPECT_LT(run.metrics.max_regressor_residual, 1e-10);
  EXPECT_GT(run.metrics.max_rotor_speed, 0.0);
  EXPECT_EQ(run.trace.back().theta_hat, run.metrics.estimator_final);
}

TEST(RunScenario, TraceRowsAreConsistent) {
  const RunResult run = run_scenario(short_step(1.0));
  const PhysicalParams p;
  for (std::size_t k = 0; k < run.trace.size(); k += 97) {
    const TraceRow& row = run.trace[k];
    EXPECT_NEAR(row.t, k * 1e-3, 1e-12);
    EXPECT_LT((row.moments - dynamics::moments(p, row.omega_a, row.omega_b)).norm(), 1e-15);
    EXPECT_EQ(row.r, Eigen::Vector2d(kPi / 4, -kPi / 3));
  }
}

TEST(RunScenario, ExactLinearizationWithTrueParameters) {
  for (auto mode : {PhysicsMode::kCorrected, PhysicsMode::kPaperLiteral}) {
    for (bool harmonic : {false, true}) {
      ScenarioConfig cfg = short_step(3.0);
      cfg.sim.physics_mode = mode;
      if (harmonic) cfg.command = HarmonicCommand{};
      cfg.estimator.theta_hat0 = dynamics::theta_true(cfg.params);
      cfg.estimator.adapt = false;
      const RunResult run = run_scenario(cfg);
      EXPECT_LT(run.metrics.max_linearization_residual, 1e-10);
      EXPECT_LT(run.metrics.max_regressor_residual, 1e-10);
    }
  }
}

TEST(RunScenario, Deterministic) {
  const ScenarioConfig cfg = short_step(2.0);
  const RunResult a = run_scenario(cfg), b = run_scenario(cfg);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    EXPECT_EQ(a.trace[k].state.to_vector(), b.trace[k].state.to_vector());
    EXPECT_EQ(a.trace[k].theta_hat, b.trace[k].theta_hat);
  }
}

TEST(RunScenario, SingularityAbortsWithTruncatedTrace) {
  ScenarioConfig cfg = short_step(10.0);
  cfg.command = StepCommand{Eigen::Vector2d(1.6, 0.0)};
  const RunResult run = run_scenario(cfg);
  ASSERT_TRUE(run.metrics.singularity_hit);
  EXPECT_LT(run.trace.size(), 10001u);
  EXPECT_GT(run.metrics.singularity_time, 0.0);
  EXPECT_LE(run.trace.back().t, run.metrics.singularity_time + 1e-12);
  for (const auto& row : run.trace) EXPECT_LT(std::abs(row.state.phi_v), kPi / 2 - kSingularityMargin);
}

TEST(RunScenario, AuthorityLossHoldsCommand) {
  ScenarioConfig cfg = short_step(0.5);
  cfg.estimator.theta_hat0 = ThetaVec{1, -1, 1e-5, 0, 0, 1e-5};
  cfg.estimator.adapt = false;
  const RunResult run = run_scenario(cfg);
  EXPECT_FALSE(run.metrics.singularity_hit);
  EXPECT_EQ(run.metrics.authority_event_times.size(), run.trace.size());
  for (const auto& row : run.trace) {
    EXPECT_EQ(row.omega_a, 0.0);
    EXPECT_EQ(row.omega_b, 0.0);
  }
}

TEST(RunScenario, RotorSpeedLimitClamps) {
  ScenarioConfig cfg = short_step(2.0);
  cfg.sim.rotor_speed_limit = 3.0;
  const RunResult run = run_scenario(cfg);
  EXPECT_LE(run.metrics.max_rotor_speed, 3.0);
  for (const auto& row : run.trace) EXPECT_LE(std::max(std::abs(row.omega_a), std::abs(row.omega_b)), 3.0);
}

TEST(Metrics, TraceComparisons) {
  const RunResult run = run_scenario(short_step(1.0));
  EXPECT_EQ(max_angle_deviation(run.trace, run.trace), 0.0);
  EXPECT_EQ(relative_rotor_rms_difference(run.trace, run.trace), 0.0);
  Trace shifted = run.trace;
  for (auto& row : shifted) {
    row.state.phi_h += 0.25;
    row.omega_a *= 1.5;
    row.omega_b *= 1.5;
  }
  EXPECT_NEAR(max_angle_deviation(shifted, run.trace), 0.25, 1e-12);
  EXPECT_NEAR(relative_rotor_rms_difference(shifted, run.trace), 0.5, 1e-12);
}

TEST(Sweeps, ValuesAndParameters) {
  EXPECT_EQ(sweep_values(SweepKind::kInertia), (std::vector<double>{0.1, 0.5, 1.5, 2.0}));
  EXPECT_EQ(sweep_values(SweepKind::kRotorCoefficients), (std::vector<double>{0.5, 10, 100, 1000}));
  EXPECT_EQ(sweep_values(SweepKind::kRotorAxis), (std::vector<double>{kPi / 8, kPi / 6, kPi / 4, kPi / 3}));

  const PhysicalParams base;
  const PhysicalParams a = sweep_params(SweepKind::kInertia, base, 0.5);
  EXPECT_EQ(a.J1, 0.5 * base.J1);
  EXPECT_EQ(a.J3, 0.5 * base.J3);
  EXPECT_EQ(a.k_f, base.k_f);
  const PhysicalParams b = sweep_params(SweepKind::kRotorCoefficients, base, 10);
  EXPECT_EQ(b.k_f, 10 * base.k_f);
  EXPECT_EQ(b.k_tau, 10 * base.k_tau);
  EXPECT_EQ(b.J2, base.J2);
  for (double beta : sweep_values(SweepKind::kRotorAxis)) {
    const PhysicalParams c = sweep_params(SweepKind::kRotorAxis, base, beta);
    EXPECT_EQ(c.beta_a, beta);
    EXPECT_EQ(c.beta_b, -beta);
    EXPECT_GT(std::abs(dynamics::allocation_determinant(c)), 1e-6);
  }
  EXPECT_EQ(sweep_kind_from_string("rotor"), SweepKind::kRotorCoefficients);
  EXPECT_EQ(to_string(SweepKind::kRotorAxis), "axis");
  EXPECT_THROW(sweep_kind_from_string("mass"), std::invalid_argument);
}

TEST(Sweeps, ShortAxisSweepKeepsOrder) {
  ScenarioConfig base = short_step(1.0);
  const SweepReport report = run_sweep(SweepKind::kRotorAxis, base);
  ASSERT_EQ(report.points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(report.points[i].value, sweep_values(SweepKind::kRotorAxis)[i]);
    EXPECT_FALSE(report.points[i].run.metrics.singularity_hit);
  }
  // beta_a = pi/4 reproduces the nominal rig.
  EXPECT_EQ(report.points[2].max_angle_deviation, 0.0);
}

TEST(Sweeps, RotorSpeedFallsWithCoefficientScale) {
  ScenarioConfig base;
  base.sim.dt = kSweepDt;
  const SweepReport report = run_sweep(SweepKind::kRotorCoefficients, base);
  double prev = report.points.front().run.metrics.max_rotor_speed;
  for (std::size_t i = 1; i < report.points.size(); ++i) {
    EXPECT_FALSE(report.points[i].run.metrics.singularity_hit);
    const double now = report.points[i].run.metrics.max_rotor_speed;
    EXPECT_LT(now, prev) << "alpha = " << report.points[i].value;
    prev = now;
  }
}

}  // namespace
}  // namespace drrs::harness
