#pragma once

#include <Eigen/Dense>

#include "drrs/numerics.h"
#include "drrs/types.h"

namespace drrs::controller {

using Matrix24d = Eigen::Matrix<double, 2, 4>;
using Matrix42d = Eigen::Matrix<double, 4, 2>;

/// Chain of integrators obtained by input-output linearization:
/// x' = A_c x + B_c v, y = C_c x with x = [xi1; xi2].
struct BrunovskyModel {
  Eigen::Matrix4d A_c;
  Matrix42d B_c;
  Matrix24d C_c;

  static BrunovskyModel standard();
};

/// v = k_x x + k_q q with q' = r - y.
struct ServoGains {
  Matrix24d k_x = Matrix24d::Zero();
  Eigen::Matrix2d k_q = Eigen::Matrix2d::Zero();
  numerics::CareSolution care;
};

/// LQR on the integrator-augmented model
///   A_aug = [[A_c, 0], [-C_c, 0]], B_aug = [B_c; 0],
/// storing [k_x, k_q] = -K_lqr so the law carries plus signs.
/// q_weight is 6x6, r_weight 2x2.
ServoGains design_servo_gains(const Matrix6d& q_weight, const Eigen::Matrix2d& r_weight);

/// LQR-augmented closed-loop matrix A_aug + B_aug [k_x, k_q].
Matrix6d servo_closed_loop(const ServoGains& gains);

Eigen::Vector2d servo_v(const ServoGains& gains, const Eigen::Vector4d& x, const Eigen::Vector2d& q);

struct ServoStep {
  Eigen::Vector2d v;
  Eigen::Vector2d q_next;
};

/// Evaluates v and advances q with r and y held over the step (RK4 of a
/// constant integrand).
ServoStep servo_step(const ServoGains& gains, const Eigen::Vector4d& x, const Eigen::Vector2d& q,
                     const Eigen::Vector2d& r, const Eigen::Vector2d& y, double dt);

/// Gain K with A_c + B_c K Hurwitz (K = -K_lqr for weights on (A_c, B_c)).
struct TrackingGain {
  Matrix24d K = Matrix24d::Zero();
  numerics::CareSolution care;
};

TrackingGain design_tracking_gain(const Eigen::Matrix4d& q_weight, const Eigen::Matrix2d& r_weight);

/// v = K (x - x_d) + B_c^T x_d_dot.
Eigen::Vector2d tracking_v(const Matrix24d& K, const Eigen::Vector4d& x, const Eigen::Vector4d& x_d,
                           const Eigen::Vector4d& x_d_dot);

struct ControlConfig {
  double eps_det = 1e-8;
  /// Use the alternative sign arrangement -(G Theta2)^-1 (F1 + F2 Theta1 + v)
  /// instead of (G Theta2)^-1 (-F1 - F2 Theta1 + v).
  bool paper_literal_sign = false;

  bool operator==(const ControlConfig&) const = default;
};

struct RotorCommand {
  double omega_a = 0.0;
  double omega_b = 0.0;
  Eigen::Vector2d Omega = Eigen::Vector2d::Zero();  // [p(omega_a), p(omega_b)]
};

/// Adaptive input-output linearizing law. Throws SingularControlAuthority
/// when |det(G Theta2_hat)| < eps_det, SingularityError outside the guard.
RotorCommand adaptive_iol_control(const PlantState& state, const ThetaVec& theta_hat,
                                  const Eigen::Vector2d& v, PhysicsMode mode = PhysicsMode::kCorrected,
                                  const ControlConfig& cfg = {});

}  // namespace drrs::controller
