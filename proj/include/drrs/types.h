#pragma once

#include <array>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace drrs {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using RegressorMatrix = Eigen::Matrix<double, 2, 6>;

/// Distance from phi_v = pi/2 below which model evaluation is refused.
inline constexpr double kSingularityMargin = 0.01;

/// Selects how the phi_h equation treats the sin(phi_v) term coming from the
/// derivative of cos(phi_v) * phi_h_dot.
///   kCorrected:    sin(phi_v) * phi_v_dot * phi_h_dot
///   kPaperLiteral: sin(phi_v) * phi_h_dot
enum class PhysicsMode { kCorrected, kPaperLiteral };

std::string_view to_string(PhysicsMode mode);
PhysicsMode physics_mode_from_string(std::string_view name);

struct PhysicalParams {
  double J1 = 6.25e-4;  // kg m^2
  double J2 = 0.02;
  double J3 = 0.02;
  double ell = 1.0;      // m
  double k_f = 4e-3;     // N s^2 / rad^2
  double k_tau = 7.5e-4; // N m s^2 / rad^2
  double beta_a = std::numbers::pi / 4;
  double beta_b = -std::numbers::pi / 4;

  /// Reference rig used throughout the experiments.
  static PhysicalParams table1() { return {}; }

  /// Empty when valid.
  std::vector<std::string> validate() const;

  bool operator==(const PhysicalParams&) const = default;
};

/// xi1 = (phi_v, phi_h), xi2 = (phi_v_dot, phi_h_dot).
struct PlantState {
  double phi_v = 0.0;
  double phi_h = 0.0;
  double phi_v_dot = 0.0;
  double phi_h_dot = 0.0;

  Eigen::Vector2d xi1() const { return {phi_v, phi_h}; }
  Eigen::Vector2d xi2() const { return {phi_v_dot, phi_h_dot}; }
  Eigen::Vector4d to_vector() const { return {phi_v, phi_h, phi_v_dot, phi_h_dot}; }
  static PlantState from_vector(const Eigen::Ref<const Eigen::Vector4d>& x) {
    return {x(0), x(1), x(2), x(3)};
  }
};

/// Throws SingularityError unless |phi_v| < pi/2 - kSingularityMargin.
void check_singularity_guard(double phi_v);

/// Lumped parameter vector, ordered
/// [Theta1(1), Theta1(2), Theta2(1,1), Theta2(1,2), Theta2(2,1), Theta2(2,2)].
class ThetaVec {
 public:
  ThetaVec() : values_(Vector6d::Zero()) {}
  explicit ThetaVec(const Vector6d& values) : values_(values) {}
  ThetaVec(std::initializer_list<double> values);

  static ThetaVec from_blocks(const Eigen::Vector2d& theta1, const Eigen::Matrix2d& theta2);

  Eigen::Vector2d theta1() const { return values_.head<2>(); }
  /// Entries 3..6 reshaped row-major.
  Eigen::Matrix2d theta2() const;

  const Vector6d& values() const { return values_; }
  Vector6d& values() { return values_; }
  double operator[](int i) const { return values_(i); }
  double& operator[](int i) { return values_(i); }

  bool operator==(const ThetaVec& other) const { return values_ == other.values_; }

 private:
  Vector6d values_;
};

}  // namespace drrs
