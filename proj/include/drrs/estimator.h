#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drrs/types.h"

// Online identification of Theta: first-order filters that remove the need
// for measured accelerations, exponentially forgetting data matrices, and a
// finite-time two-power update law.
namespace drrs::estimator {

/// Below this norm of Xi the update returns zero (its continuous completion).
inline constexpr double kXiDeadZone = 1e-12;

struct EstimatorConfig {
  double gamma = 1e3;   // filter pole, 1/s
  double lambda = 0.8;  // forgetting factor, 1/s
  double c1 = 0.1;
  double c2 = 0.1;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  ThetaVec theta_hat0{1.0, -1.0, 0.1, 0.0, 0.0, 0.1};
  /// When false Theta_hat stays at theta_hat0; filters and data matrices still run.
  bool adapt = true;

  std::vector<std::string> validate() const;
  /// Non-fatal notes, e.g. alpha2 <= 1 although the update law asks for alpha2 > 1.
  std::vector<std::string> warnings() const;

  bool operator==(const EstimatorConfig&) const = default;
};

struct EstimatorState {
  Eigen::Vector2d lpf_xi2 = Eigen::Vector2d::Zero();  // 1/(s+gamma) xi2
  Eigen::Vector2d lpf_f1 = Eigen::Vector2d::Zero();   // 1/(s+gamma) F1
  RegressorMatrix lpf_phi = RegressorMatrix::Zero();  // 1/(s+gamma) Phi
  Vector6d xi_bar = Vector6d::Zero();
  Matrix6d phi_bar = Matrix6d::Zero();
  ThetaVec theta_hat;

  static constexpr int kPackedSize = 2 + 2 + 12 + 6 + 36 + 6;
  using Packed = Eigen::Matrix<double, kPackedSize, 1>;

  static EstimatorState initial(const EstimatorConfig& cfg);
  Packed pack() const;
  static EstimatorState unpack(const Eigen::Ref<const Packed>& packed);
};

struct FilteredSignals {
  Eigen::Vector2d xi_f;
  RegressorMatrix phi_f;
};

/// xi_f = xi2 - gamma * lpf_xi2 - lpf_f1 (s/(s+gamma) realized as 1 - gamma/(s+gamma)),
/// Phi_f = lpf_phi.
FilteredSignals filtered_signals(const EstimatorState& est, const PlantState& state, double gamma);

struct FilterDerivative {
  Eigen::Vector2d lpf_xi2;
  Eigen::Vector2d lpf_f1;
  RegressorMatrix lpf_phi;
};

/// Filter-state derivatives driven by xi2, F1(state) and Phi(state, Omega).
FilterDerivative filter_derivative(const EstimatorState& est, const PlantState& state,
                                   const Eigen::Vector2d& Omega, double gamma,
                                   PhysicsMode mode = PhysicsMode::kCorrected);

struct DataMatrices {
  Vector6d xi_bar;
  Matrix6d phi_bar;
};

/// xi_bar' = -lambda xi_bar + Phi_f^T xi_f, phi_bar' = -lambda phi_bar + Phi_f^T Phi_f.
DataMatrices data_matrix_derivative(const DataMatrices& current, const FilteredSignals& signals,
                                    double lambda);

/// One RK4 step of the data-matrix flow with the filtered signals held.
DataMatrices data_matrix_step(const DataMatrices& current, const FilteredSignals& signals,
                              double lambda, double dt);

/// Xi = phi_bar theta_hat - xi_bar.
Vector6d estimation_error(const Matrix6d& phi_bar, const Vector6d& xi_bar, const ThetaVec& theta_hat);

/// -c1 Xi / |Xi|^(1-alpha1) - c2 Xi / |Xi|^(1-alpha2); zero inside the dead zone.
Vector6d theta_update(const Matrix6d& phi_bar, const Vector6d& xi_bar, const ThetaVec& theta_hat,
                      const EstimatorConfig& cfg);

/// Full estimator flow as a derivative with the same layout as EstimatorState.
EstimatorState estimator_derivative(const EstimatorState& est, const PlantState& state,
                                    const Eigen::Vector2d& Omega, const EstimatorConfig& cfg,
                                    PhysicsMode mode = PhysicsMode::kCorrected);

/// Smallest eigenvalue of the (symmetrized) phi_bar; excitation monitor.
double min_excitation(const Matrix6d& phi_bar);

}  // namespace drrs::estimator
