#include "drrs/controller.h"

#include <cmath>

#include "drrs/dynamics.h"
#include "drrs/errors.h"
#include "drrs/model.h"

namespace drrs::controller {

BrunovskyModel BrunovskyModel::standard() {
  BrunovskyModel m;
  m.A_c.setZero();
  m.A_c.topRightCorner<2, 2>().setIdentity();
  m.B_c.setZero();
  m.B_c.bottomRows<2>().setIdentity();
  m.C_c.setZero();
  m.C_c.leftCols<2>().setIdentity();
  return m;
}

ServoGains design_servo_gains(const Matrix6d& q_weight, const Eigen::Matrix2d& r_weight) {
  const BrunovskyModel bm = BrunovskyModel::standard();
  numerics::LqrProblem prob;
  prob.A = Eigen::MatrixXd::Zero(6, 6);
  prob.A.topLeftCorner<4, 4>() = bm.A_c;
  prob.A.bottomLeftCorner<2, 4>() = -bm.C_c;
  prob.B = Eigen::MatrixXd::Zero(6, 2);
  prob.B.topRows<4>() = bm.B_c;
  prob.Q = q_weight;
  prob.R = r_weight;

  ServoGains gains;
  gains.care = numerics::care_solve(prob);
  gains.k_x = -gains.care.K.leftCols<4>();
  gains.k_q = -gains.care.K.rightCols<2>();
  return gains;
}

Matrix6d servo_closed_loop(const ServoGains& gains) {
  const BrunovskyModel bm = BrunovskyModel::standard();
  Matrix6d a = Matrix6d::Zero();
  a.topLeftCorner<4, 4>() = bm.A_c + bm.B_c * gains.k_x;
  a.topRightCorner<4, 2>() = bm.B_c * gains.k_q;
  a.bottomLeftCorner<2, 4>() = -bm.C_c;
  return a;
}

Eigen::Vector2d servo_v(const ServoGains& gains, const Eigen::Vector4d& x, const Eigen::Vector2d& q) {
  return gains.k_x * x + gains.k_q * q;
}

ServoStep servo_step(const ServoGains& gains, const Eigen::Vector4d& x, const Eigen::Vector2d& q,
                     const Eigen::Vector2d& r, const Eigen::Vector2d& y, double dt) {
  return {servo_v(gains, x, q), q + dt * (r - y)};
}

TrackingGain design_tracking_gain(const Eigen::Matrix4d& q_weight, const Eigen::Matrix2d& r_weight) {
  const BrunovskyModel bm = BrunovskyModel::standard();
  TrackingGain gain;
  gain.care = numerics::care_solve({bm.A_c, bm.B_c, q_weight, r_weight});
  gain.K = -gain.care.K;
  return gain;
}

Eigen::Vector2d tracking_v(const Matrix24d& K, const Eigen::Vector4d& x, const Eigen::Vector4d& x_d,
                           const Eigen::Vector4d& x_d_dot) {
  return K * (x - x_d) + BrunovskyModel::standard().B_c.transpose() * x_d_dot;
}

RotorCommand adaptive_iol_control(const PlantState& state, const ThetaVec& theta_hat,
                                  const Eigen::Vector2d& v, PhysicsMode mode, const ControlConfig& cfg) {
  const Eigen::Matrix2d beta = model::g_matrix(state) * theta_hat.theta2();
  const double det = beta.determinant();
  if (!(std::abs(det) >= cfg.eps_det)) throw SingularControlAuthority(det);

  const Eigen::Vector2d alpha = model::f1(state, mode) + model::f2(state) * theta_hat.theta1();
  const Eigen::Vector2d rhs = cfg.paper_literal_sign ? Eigen::Vector2d(-(alpha + v))
                                                     : Eigen::Vector2d(-alpha + v);
  RotorCommand cmd;
  cmd.Omega = beta.partialPivLu().solve(rhs);
  cmd.omega_a = dynamics::rotor_map_inverse(cmd.Omega(0));
  cmd.omega_b = dynamics::rotor_map_inverse(cmd.Omega(1));
  return cmd;
}

}  // namespace drrs::controller
