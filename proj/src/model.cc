#include "drrs/model.h"

#include <cmath>

namespace drrs::model {

Eigen::Vector2d f1(const PlantState& x, PhysicsMode mode) {
  check_singularity_guard(x.phi_v);
  const double t = std::tan(x.phi_v);
  if (mode == PhysicsMode::kCorrected) return {0.0, t * x.phi_v_dot * x.phi_h_dot};
  return {0.0, t * x.phi_h_dot};
}

Eigen::Matrix2d f2(const PlantState& x) {
  check_singularity_guard(x.phi_v);
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = std::sin(x.phi_v) * std::cos(x.phi_v) * x.phi_h_dot * x.phi_h_dot;
  m(1, 1) = std::tan(x.phi_v) * x.phi_v_dot * x.phi_h_dot;
  return m;
}

Eigen::Matrix2d g_matrix(const PlantState& x) {
  check_singularity_guard(x.phi_v);
  Eigen::Matrix2d g = Eigen::Matrix2d::Identity();
  g(1, 1) = 1.0 / std::cos(x.phi_v);
  return g;
}

RegressorMatrix regressor(const PlantState& x, const Eigen::Vector2d& Omega) {
  const Eigen::Matrix2d f = f2(x);
  const double sec = 1.0 / std::cos(x.phi_v);
  RegressorMatrix phi = RegressorMatrix::Zero();
  phi(0, 0) = f(0, 0);
  phi(0, 2) = Omega(0);
  phi(0, 3) = Omega(1);
  phi(1, 1) = f(1, 1);
  phi(1, 4) = Omega(0) * sec;
  phi(1, 5) = Omega(1) * sec;
  return phi;
}

Eigen::Vector2d xi2_dot(const PlantState& x, const ThetaVec& theta, const Eigen::Vector2d& Omega,
                        PhysicsMode mode) {
  return f1(x, mode) + f2(x) * theta.theta1() + g_matrix(x) * theta.theta2() * Omega;
}

}  // namespace drrs::model
