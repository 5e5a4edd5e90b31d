#include "drrs/config.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "drrs/errors.h"

namespace drrs::config {
namespace {

using harness::ScenarioConfig;

TEST(ParseConfig, EmptyDocumentGivesDefaults) {
  const ScenarioConfig cfg = parse_config("");
  EXPECT_EQ(cfg, ScenarioConfig{});
  EXPECT_EQ(cfg.params, PhysicalParams::table1());
  EXPECT_EQ(cfg.estimator.gamma, 1e3);
  EXPECT_EQ(cfg.estimator.lambda, 0.8);
  EXPECT_EQ(parse_config("{}"), ScenarioConfig{});
  EXPECT_EQ(parse_config("  \n"), ScenarioConfig{});
}

TEST(ParseConfig, NegativeStepIsInvalid) {
  EXPECT_THROW(parse_config(R"({"sim": {"dt": -1}})"), ValidationError);
}

TEST(ParseConfig, ValidationListsEveryProblem) {
  try {
    parse_config(R"({"sim": {"dt": -1, "t_final": -5}, "physical": {"J2": -3}})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_GE(e.problems().size(), 3u);
  }
}

TEST(ParseConfig, Overrides) {
  const ScenarioConfig cfg = parse_config("", {"physical.beta_a=0.3926991"});
  EXPECT_NEAR(cfg.params.beta_a, std::numbers::pi / 8, 5e-8);
  const ScenarioConfig b = parse_config(R"({"sim": {"dt": 0.01}})", {"sim.dt=0.002", "sim.physics_mode=paper_literal",
                                                                      "estimator.theta_hat0=[1,2,3,4,5,6]"});
  EXPECT_EQ(b.sim.dt, 0.002);
  EXPECT_EQ(b.sim.physics_mode, PhysicsMode::kPaperLiteral);
  EXPECT_EQ(b.estimator.theta_hat0, (ThetaVec{1, 2, 3, 4, 5, 6}));
  EXPECT_THROW(parse_config("", {"sim.dt"}), ValidationError);
  EXPECT_THROW(parse_config("", {"sim.bogus=1"}), ValidationError);
}

TEST(ParseConfig, UnknownKeysRejected) {
  EXPECT_THROW(parse_config(R"({"physics": {}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"sim": {"step": 0.1}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"command": {"type": "ramp"}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"command": {"type": "step", "amplitude": 1}})"), ValidationError);
}

TEST(ParseConfig, SyntaxErrorCarriesLine) {
  try {
    parse_config("{\n  \"sim\": {\n    \"dt\": ,\n  }\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ParseConfig, WrongTypesRejected) {
  EXPECT_THROW(parse_config(R"({"sim": {"dt": "fast"}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"estimator": {"theta_hat0": [1, 2]}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"sim": {"physics_mode": "exact"}})"), ValidationError);
  EXPECT_THROW(parse_config("[1, 2]"), ValidationError);
}

TEST(ParseConfig, Harmonic) {
  const ScenarioConfig cfg = parse_config(R"({"command": {"type": "harmonic", "amplitude": 0.5, "frequency": 2}})");
  const auto& h = std::get<harness::HarmonicCommand>(cfg.command);
  EXPECT_EQ(h.amplitude, 0.5);
  EXPECT_EQ(h.frequency, 2.0);
  const auto& d = std::get<harness::HarmonicCommand>(parse_config(R"({"command": {"type": "harmonic"}})").command);
  EXPECT_EQ(d, harness::HarmonicCommand{});
}

ScenarioConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0), ang(-1.5, 1.5), unit(0.0, 1.0);
  ScenarioConfig c;
  c.params.J1 *= u(rng);
  c.params.J2 *= u(rng);
  c.params.J3 *= u(rng);
  c.params.ell *= u(rng);
  c.params.k_f *= u(rng);
  c.params.k_tau *= u(rng);
  c.params.beta_a = ang(rng);
  c.params.beta_b = ang(rng);
  if (unit(rng) < 0.5) {
    c.command = harness::StepCommand{Eigen::Vector2d(ang(rng), ang(rng))};
  } else {
    c.command = harness::HarmonicCommand{u(rng), u(rng)};
  }
  c.estimator.gamma *= u(rng);
  c.estimator.lambda *= u(rng);
  c.estimator.c1 *= u(rng);
  c.estimator.c2 *= u(rng);
  c.estimator.alpha1 = 0.1 + 0.8 * unit(rng);
  c.estimator.alpha2 = 0.1 + 2.0 * unit(rng);
  for (int i = 0; i < 6; ++i) c.estimator.theta_hat0[i] = ang(rng) / 3.0;
  c.estimator.adapt = unit(rng) < 0.8;
  c.controller.q_weight *= u(rng);
  c.controller.r_weight *= u(rng);
  c.controller.control.eps_det *= u(rng);
  c.controller.control.paper_literal_sign = unit(rng) < 0.3;
  c.sim.dt *= u(rng);
  c.sim.t_final *= u(rng);
  c.sim.physics_mode = unit(rng) < 0.5 ? PhysicsMode::kCorrected : PhysicsMode::kPaperLiteral;
  if (unit(rng) < 0.3) c.sim.rotor_speed_limit = 100 * u(rng);
  c.outputs.csv_path = "run_" + std::to_string(static_cast<int>(1000 * unit(rng))) + ".csv";
  if (unit(rng) < 0.5) c.outputs.svg_path = "plots";
  return c;
}

TEST(SerializeConfig, RoundTrip) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const ScenarioConfig c = random_config(rng);
    ASSERT_TRUE(c.validate().empty());
    EXPECT_EQ(parse_config(serialize_config(c)), c) << serialize_config(c);
  }
}

TEST(LoadConfig, FromFile) {
  const auto path = std::filesystem::temp_directory_path() / "drrs_config_test.json";
  std::ofstream(path) << R"({"sim": {"t_final": 4}})";
  EXPECT_EQ(load_config(path).sim.t_final, 4.0);
  EXPECT_EQ(load_config(path, {"sim.t_final=5"}).sim.t_final, 5.0);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), std::runtime_error);
}

}  // namespace
}  // namespace drrs::config
