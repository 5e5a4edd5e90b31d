#include "drrs/dynamics.h"

#include <cmath>

namespace drrs {

namespace dynamics {

double rotor_map(double omega) { return omega * std::abs(omega); }

double rotor_map_inverse(double signed_square) {
  return std::copysign(std::sqrt(std::abs(signed_square)), signed_square);
}

Eigen::Vector2d rotor_map(const Eigen::Vector2d& omega) {
  return {rotor_map(omega(0)), rotor_map(omega(1))};
}

Eigen::Vector2d rotor_map_inverse(const Eigen::Vector2d& signed_square) {
  return {rotor_map_inverse(signed_square(0)), rotor_map_inverse(signed_square(1))};
}

Eigen::Matrix2d allocation_matrix(const PhysicalParams& p) {
  const double fl = p.k_f * p.ell;
  Eigen::Matrix2d c;
  c << fl * std::cos(p.beta_a) - p.k_tau * std::sin(p.beta_a),
      -fl * std::cos(p.beta_b) + p.k_tau * std::sin(p.beta_b),
      fl * std::sin(p.beta_a) + p.k_tau * std::cos(p.beta_a),
      -fl * std::sin(p.beta_b) - p.k_tau * std::cos(p.beta_b);
  return c;
}

double allocation_determinant(const PhysicalParams& p) {
  return (p.ell * p.ell * p.k_f * p.k_f + p.k_tau * p.k_tau) * std::sin(p.beta_a - p.beta_b);
}

Eigen::Vector2d moments(const PhysicalParams& params, double omega_a, double omega_b) {
  return allocation_matrix(params) * Eigen::Vector2d(rotor_map(omega_a), rotor_map(omega_b));
}

Eigen::Vector4d plant_derivative(const PhysicalParams& p, const PlantState& x, double omega_a,
                                 double omega_b, PhysicsMode mode) {
  check_singularity_guard(x.phi_v);
  const Eigen::Vector2d m = moments(p, omega_a, omega_b);
  const double s = std::sin(x.phi_v);
  const double c = std::cos(x.phi_v);

  // J2 phi_v_ddot + (J3 - J1) s c phi_h_dot^2 = M_v
  const double phi_v_ddot = (m(0) - (p.J3 - p.J1) * s * c * x.phi_h_dot * x.phi_h_dot) / p.J2;

  // J3 (c phi_h_ddot - k_term) + (J1 - J2) s phi_v_dot phi_h_dot = M_h
  const double k_term = mode == PhysicsMode::kCorrected ? s * x.phi_v_dot * x.phi_h_dot
                                                        : s * x.phi_h_dot;
  const double phi_h_ddot =
      (m(1) + p.J3 * k_term - (p.J1 - p.J2) * s * x.phi_v_dot * x.phi_h_dot) / (p.J3 * c);

  return {x.phi_v_dot, x.phi_h_dot, phi_v_ddot, phi_h_ddot};
}

ThetaVec theta_true(const PhysicalParams& p) {
  const Eigen::Matrix2d c = allocation_matrix(p);
  return ThetaVec{(p.J1 - p.J3) / p.J2, (p.J2 - p.J1) / p.J3, c(0, 0) / p.J2, c(0, 1) / p.J2,
                  c(1, 0) / p.J3,       c(1, 1) / p.J3};
}

}  // namespace dynamics
}  // namespace drrs
