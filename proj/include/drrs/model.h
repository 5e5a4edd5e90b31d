#pragma once

#include <Eigen/Dense>

#include "drrs/types.h"

// Strict-feedback form xi2_dot = F1 + F2 Theta1 + G Theta2 Omega and the
// linear regressor xi2_dot - F1 = Phi(xi, Omega) Theta. All functions refuse
// states outside the singularity guard.
namespace drrs::model {

Eigen::Vector2d f1(const PlantState& state, PhysicsMode mode = PhysicsMode::kCorrected);

/// diag(sin cos phi_h_dot^2, tan phi_v_dot phi_h_dot); identical in both modes.
Eigen::Matrix2d f2(const PlantState& state);

Eigen::Matrix2d g_matrix(const PlantState& state);

/// 2x6; column j multiplies Theta entry j.
RegressorMatrix regressor(const PlantState& state, const Eigen::Vector2d& Omega);

/// F1 + F2 Theta1 + G Theta2 Omega.
Eigen::Vector2d xi2_dot(const PlantState& state, const ThetaVec& theta,
                        const Eigen::Vector2d& Omega, PhysicsMode mode = PhysicsMode::kCorrected);

}  // namespace drrs::model
