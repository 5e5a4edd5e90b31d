#include "drrs/estimator.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "drrs/dynamics.h"
#include "drrs/model.h"
#include "drrs/numerics.h"
#include "test_util.h"

namespace drrs::estimator {
namespace {

using Packed = EstimatorState::Packed;

TEST(EstimatorState, PackRoundTrip) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  EstimatorState s;
  s.lpf_xi2 = {n(rng), n(rng)};
  s.lpf_f1 = {n(rng), n(rng)};
  for (int i = 0; i < 12; ++i) s.lpf_phi(i / 6, i % 6) = n(rng);
  for (int i = 0; i < 6; ++i) s.xi_bar(i) = n(rng);
  for (int i = 0; i < 36; ++i) s.phi_bar(i / 6, i % 6) = n(rng);
  for (int i = 0; i < 6; ++i) s.theta_hat[i] = n(rng);
  const EstimatorState back = EstimatorState::unpack(s.pack());
  EXPECT_EQ(back.lpf_xi2, s.lpf_xi2);
  EXPECT_EQ(back.lpf_f1, s.lpf_f1);
  EXPECT_EQ(back.lpf_phi, s.lpf_phi);
  EXPECT_EQ(back.xi_bar, s.xi_bar);
  EXPECT_EQ(back.phi_bar, s.phi_bar);
  EXPECT_EQ(back.theta_hat, s.theta_hat);
}

TEST(EstimatorState, InitialFromConfig) {
  const EstimatorConfig cfg;
  const EstimatorState s = EstimatorState::initial(cfg);
  EXPECT_EQ(s.theta_hat, (ThetaVec{1, -1, 0.1, 0, 0, 0.1}));
  EXPECT_TRUE(s.phi_bar.isZero(0));
  EXPECT_TRUE(s.theta_hat.theta2().isApprox(0.1 * Eigen::Matrix2d::Identity()));
}

TEST(EstimatorConfig, ValidationAndWarnings) {
  EstimatorConfig cfg;
  EXPECT_TRUE(cfg.validate().empty());
  EXPECT_EQ(cfg.warnings().size(), 1u);  // alpha2 = 0.5
  cfg.alpha2 = 1.5;
  EXPECT_TRUE(cfg.warnings().empty());
  cfg.gamma = 0;
  cfg.alpha1 = 1.2;
  EXPECT_EQ(cfg.validate().size(), 2u);
}

// Integrates the filters alone for a plant frozen at `state` under `Omega`.
EstimatorState settle_filters(const PlantState& state, const Eigen::Vector2d& Omega, double gamma, double t_end) {
  EstimatorConfig cfg;
  cfg.gamma = gamma;
  cfg.adapt = false;
  const double dt = 0.1 / gamma;
  Packed z = EstimatorState::initial(cfg).pack();
  const int n = static_cast<int>(t_end / dt);
  for (int k = 0; k < n; ++k) {
    z = numerics::rk4_step(
        [&](double, const Packed& y) {
          return estimator_derivative(EstimatorState::unpack(y), state, Omega, cfg).pack();
        },
        z, k * dt, dt);
  }
  return EstimatorState::unpack(z);
}

TEST(Filters, DcGainIsInverseGamma) {
  const PlantState s{0.4, 0.2, 0.0, 0.0};
  const Eigen::Vector2d Om(2.0, -1.0);
  const double gamma = 50.0;
  const EstimatorState e = settle_filters(s, Om, gamma, 40.0 / gamma);
  EXPECT_LT((filtered_signals(e, s, gamma).phi_f - model::regressor(s, Om) / gamma).norm(), 1e-12);
}

TEST(Filters, ConstantRateIsRejected) {
  const PlantState s{0.0, 0.0, 0.3, 0.0};  // F1 = 0 on the level beam
  const double gamma = 50.0;
  const EstimatorState e = settle_filters(s, {0, 0}, gamma, 40.0 / gamma);
  EXPECT_LT(filtered_signals(e, s, gamma).xi_f.norm(), 1e-12);
}

TEST(Filters, Superposition) {
  std::mt19937_64 rng(9);
  const double gamma = 1e3;
  for (int trial = 0; trial < 50; ++trial) {
    const PlantState s = test::random_state(rng);
    const Eigen::Vector2d Om = test::random_omega(rng);
    EstimatorState a, b, sum;
    a.lpf_xi2 = test::random_omega(rng);
    a.lpf_f1 = test::random_omega(rng);
    b.lpf_xi2 = test::random_omega(rng);
    b.lpf_f1 = test::random_omega(rng);
    a.lpf_phi.setRandom();
    b.lpf_phi.setRandom();
    sum.lpf_xi2 = a.lpf_xi2 + b.lpf_xi2;
    sum.lpf_f1 = a.lpf_f1 + b.lpf_f1;
    sum.lpf_phi = a.lpf_phi + b.lpf_phi;
    // Filter state is linear; the input-free part superposes exactly.
    const FilterDerivative da = filter_derivative(a, s, Om, gamma);
    const FilterDerivative db = filter_derivative(b, s, Om, gamma);
    const FilterDerivative ds = filter_derivative(sum, s, Om, gamma);
    const FilterDerivative d0 = filter_derivative(EstimatorState{}, s, Om, gamma);
    EXPECT_LT((ds.lpf_xi2 + d0.lpf_xi2 - da.lpf_xi2 - db.lpf_xi2).norm(), 1e-9);
    EXPECT_LT((ds.lpf_f1 + d0.lpf_f1 - da.lpf_f1 - db.lpf_f1).norm(), 1e-9);
    EXPECT_LT((ds.lpf_phi + d0.lpf_phi - da.lpf_phi - db.lpf_phi).norm(), 1e-9);
    const FilteredSignals fa = filtered_signals(a, s, gamma), fb = filtered_signals(b, s, gamma),
                          fs = filtered_signals(sum, s, gamma), f0 = filtered_signals(EstimatorState{}, s, gamma);
    EXPECT_LT((fs.xi_f + f0.xi_f - fa.xi_f - fb.xi_f).norm(), 1e-9);
    EXPECT_LT((fs.phi_f - fa.phi_f - fb.phi_f).norm(), 1e-12);
  }
}

TEST(Filters, RegressorIdentityAlongTrueTrajectory) {
  const PhysicalParams p;
  const ThetaVec theta = dynamics::theta_true(p);
  EstimatorConfig cfg;
  cfg.adapt = false;
  using Z = Eigen::Matrix<double, 4 + EstimatorState::kPackedSize, 1>;
  auto omega_of = [](double t) { return Eigen::Vector2d(6 * std::sin(3 * t), 5 * std::cos(2 * t) - 1); };
  for (auto mode : {PhysicsMode::kCorrected, PhysicsMode::kPaperLiteral}) {
    Z z = Z::Zero();
    z.tail<EstimatorState::kPackedSize>() = EstimatorState::initial(cfg).pack();
    auto f = [&](double t, const Z& y) -> Z {
      const PlantState s = PlantState::from_vector(y.head<4>());
      const Eigen::Vector2d w = omega_of(t);
      Z d;
      d.head<4>() = dynamics::plant_derivative(p, s, w(0), w(1), mode);
      d.tail<EstimatorState::kPackedSize>() =
          estimator_derivative(EstimatorState::unpack(y.tail<EstimatorState::kPackedSize>()), s,
                               dynamics::rotor_map(w), cfg, mode)
              .pack();
      return d;
    };
    const double dt = 1e-4;
    double worst = 0.0;
    for (int k = 0; k < 5000; ++k) {
      z = numerics::rk4_step(f, z, k * dt, dt);
      if ((k + 1) * dt >= 10.0 / cfg.gamma) {
        const PlantState s = PlantState::from_vector(z.head<4>());
        const FilteredSignals sig =
            filtered_signals(EstimatorState::unpack(z.tail<EstimatorState::kPackedSize>()), s, cfg.gamma);
        worst = std::max(worst, (sig.xi_f - sig.phi_f * theta.values()).cwiseAbs().maxCoeff());
      }
    }
    EXPECT_LT(worst, 1e-6) << to_string(mode);
  }
}

TEST(DataMatrices, DecayWithoutExcitation) {
  DataMatrices d{Vector6d::Constant(2.0), 3.0 * Matrix6d::Identity()};
  const FilteredSignals zero{Eigen::Vector2d::Zero(), RegressorMatrix::Zero()};
  const double lambda = 0.8, dt = 1e-3;
  for (int k = 0; k < 1000; ++k) d = data_matrix_step(d, zero, lambda, dt);
  EXPECT_NEAR(d.xi_bar(0), 2.0 * std::exp(-lambda), 1e-12);
  EXPECT_NEAR(d.phi_bar(3, 3), 3.0 * std::exp(-lambda), 1e-12);
}

TEST(DataMatrices, SteadyState) {
  std::mt19937_64 rng(2);
  RegressorMatrix pc = RegressorMatrix::Random();
  const Vector6d theta = dynamics::theta_true({}).values();
  const FilteredSignals sig{pc * theta, pc};
  DataMatrices d{Vector6d::Zero(), Matrix6d::Zero()};
  const double lambda = 0.8;
  for (int k = 0; k < 4000; ++k) d = data_matrix_step(d, sig, lambda, 1e-2);
  const Matrix6d expected = pc.transpose() * pc / lambda;
  EXPECT_LT((d.phi_bar - expected).norm(), 1e-9);
  EXPECT_LT((d.xi_bar - expected * theta).norm(), 1e-9);
}

TEST(DataMatrices, StaySymmetricPsd) {
  std::mt19937_64 rng(4);
  DataMatrices d{Vector6d::Zero(), Matrix6d::Zero()};
  for (int k = 0; k < 5000; ++k) {
    const PlantState s = test::random_state(rng);
    const RegressorMatrix phi = model::regressor(s, test::random_omega(rng)) / 1e3;
    d = data_matrix_step(d, {phi * Vector6d::Ones(), phi}, 0.8, 1e-3);
    if (k % 1000 == 999) {
      EXPECT_LT((d.phi_bar - d.phi_bar.transpose()).norm(), 1e-15);
      EXPECT_GE(min_excitation(d.phi_bar), -1e-15);
    }
  }
}

TEST(ThetaUpdate, ZeroAtEquilibrium) {
  const EstimatorConfig cfg;
  const Matrix6d I = Matrix6d::Identity();
  const ThetaVec theta = dynamics::theta_true({});
  EXPECT_TRUE(theta_update(I, theta.values(), theta, cfg).isZero(0));
  ThetaVec near = theta;
  near[0] += 1e-13;
  EXPECT_TRUE(theta_update(I, theta.values(), near, cfg).isZero(0));
}

TEST(ThetaUpdate, UnitNormError) {
  EstimatorConfig cfg;
  cfg.alpha2 = 1.7;
  const Vector6d xi = Vector6d::Zero();
  Vector6d e = Vector6d::Zero();
  e << 0.6, 0, 0.8, 0, 0, 0;
  const Vector6d upd = theta_update(Matrix6d::Identity(), xi, ThetaVec(e), cfg);
  EXPECT_LT((upd + (cfg.c1 + cfg.c2) * e).norm(), 1e-15);
}

TEST(ThetaUpdate, TwoPowerLaw) {
  EstimatorConfig cfg;
  cfg.c1 = 0.3;
  cfg.c2 = 0.05;
  cfg.alpha1 = 0.25;
  cfg.alpha2 = 2.0;
  const Vector6d e = (Vector6d() << 3, 0, 0, 4, 0, 0).finished();  // |e| = 5
  const Vector6d upd = theta_update(Matrix6d::Identity(), Vector6d::Zero(), ThetaVec(e), cfg);
  const Vector6d expected = -0.3 * e / std::pow(5.0, 0.75) - 0.05 * e * 5.0;
  EXPECT_LT((upd - expected).norm(), 1e-13);
}

// Phi_bar = I, xi_bar = Theta*: |Xi| obeys d|Xi|/dt = -0.2 sqrt(|Xi|).
TEST(ThetaUpdate, FiniteTimeConvergence) {
  const EstimatorConfig cfg;
  const ThetaVec target = dynamics::theta_true({});
  const Matrix6d I = Matrix6d::Identity();
  ThetaVec theta = cfg.theta_hat0;
  const double e0 = (theta.values() - target.values()).norm();
  const double t_pred = std::pow(e0, 1 - cfg.alpha1) / ((cfg.c1 + cfg.c2) * (1 - cfg.alpha1));
  EXPECT_NEAR(t_pred, 10 * std::sqrt(e0), 1e-12);
  const double dt = 1e-4;
  double prev = e0;
  for (int k = 1; k * dt <= 1.2 * t_pred; ++k) {
    theta.values() = numerics::rk4_step(
        [&](double, const Vector6d& th) { return theta_update(I, target.values(), ThetaVec(th), cfg); },
        theta.values(), 0.0, dt);
    ASSERT_TRUE(theta.values().allFinite());
    const double e = (theta.values() - target.values()).norm();
    EXPECT_LE(e, prev + 1e-9 * dt);
    prev = e;
    const double t = k * dt;
    if (t < 0.9 * t_pred && k % 1000 == 0) {
      const double closed = std::pow(std::sqrt(e0) - 0.1 * t, 2);
      EXPECT_NEAR(e, closed, 1e-6) << "t = " << t;
    }
    if (t >= 1.05 * t_pred) EXPECT_LT(e, 1e-3);
  }
}

TEST(ThetaUpdate, ErrorNormNonIncreasingWithFrozenPsdData) {
  std::mt19937_64 rng(8);
  const EstimatorConfig cfg;
  Eigen::Matrix<double, 6, 3> M = Eigen::Matrix<double, 6, 3>::Random();
  const Matrix6d phi_bar = M * M.transpose();  // rank deficient, PSD
  const Vector6d xi_bar = phi_bar * dynamics::theta_true({}).values();
  Vector6d th = cfg.theta_hat0.values();
  double prev = estimation_error(phi_bar, xi_bar, ThetaVec(th)).norm();
  const double dt = 1e-3;
  for (int k = 0; k < 20000; ++k) {
    th = numerics::rk4_step([&](double, const Vector6d& x) { return theta_update(phi_bar, xi_bar, ThetaVec(x), cfg); },
                            th, 0.0, dt);
    ASSERT_TRUE(th.allFinite());
    const double e = estimation_error(phi_bar, xi_bar, ThetaVec(th)).norm();
    EXPECT_LE(e, prev + 1e-9 * dt) << k;
    prev = e;
  }
}

TEST(EstimatorDerivative, FrozenWhenAdaptationOff) {
  EstimatorConfig cfg;
  cfg.adapt = false;
  EstimatorState s = EstimatorState::initial(cfg);
  s.phi_bar = Matrix6d::Identity();
  const EstimatorState d = estimator_derivative(s, {0.1, 0.2, 0.3, 0.4}, {1, 2}, cfg);
  EXPECT_TRUE(d.theta_hat.values().isZero(0));
  cfg.adapt = true;
  EXPECT_FALSE(estimator_derivative(s, {0.1, 0.2, 0.3, 0.4}, {1, 2}, cfg).theta_hat.values().isZero(0));
}

}  // namespace
}  // namespace drrs::estimator
