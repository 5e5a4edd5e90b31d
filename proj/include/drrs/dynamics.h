#pragma once

#include <Eigen/Dense>

#include "drrs/types.h"

// Ground-truth dual-rotor plant: rotor thrust/torque model, control
// allocation, and the Euler equations for phi_v and phi_h. Gravity, friction
// and drag are absent from the model.
namespace drrs::dynamics {

/// p(omega) = omega * |omega|.
double rotor_map(double omega);

/// sign(Omega) * sqrt(|Omega|).
double rotor_map_inverse(double signed_square);

Eigen::Vector2d rotor_map(const Eigen::Vector2d& omega);
Eigen::Vector2d rotor_map_inverse(const Eigen::Vector2d& signed_square);

/// Maps [p(omega_a), p(omega_b)] to [M_v, M_h].
Eigen::Matrix2d allocation_matrix(const PhysicalParams& params);

/// Closed form (ell^2 k_f^2 + k_tau^2) sin(beta_a - beta_b).
double allocation_determinant(const PhysicalParams& params);

/// [M_v, M_h] in N m.
Eigen::Vector2d moments(const PhysicalParams& params, double omega_a, double omega_b);

/// d/dt [phi_v, phi_h, phi_v_dot, phi_h_dot] from the Euler equations.
/// Throws SingularityError outside the guard.
Eigen::Vector4d plant_derivative(const PhysicalParams& params, const PlantState& state,
                                 double omega_a, double omega_b,
                                 PhysicsMode mode = PhysicsMode::kCorrected);

ThetaVec theta_true(const PhysicalParams& params);

}  // namespace drrs::dynamics
