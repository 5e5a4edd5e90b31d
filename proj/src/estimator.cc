#include "drrs/estimator.h"

#include <cmath>

#include "drrs/model.h"
#include "drrs/numerics.h"

namespace drrs::estimator {

std::vector<std::string> EstimatorConfig::validate() const {
  std::vector<std::string> problems;
  auto positive = [&problems](const char* name, double v) {
    if (!(std::isfinite(v) && v > 0.0)) {
      problems.push_back(std::string("estimator.") + name + " must be finite and > 0");
    }
  };
  positive("gamma", gamma);
  positive("lambda", lambda);
  positive("c1", c1);
  positive("c2", c2);
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) problems.emplace_back("estimator.alpha1 must lie in (0, 1)");
  positive("alpha2", alpha2);
  if (!theta_hat0.values().allFinite()) problems.emplace_back("estimator.theta_hat0 must be finite");
  return problems;
}

std::vector<std::string> EstimatorConfig::warnings() const {
  std::vector<std::string> notes;
  if (alpha2 <= 1.0) {
    notes.push_back("estimator.alpha2 = " + std::to_string(alpha2) +
                    " <= 1; the two-power update law is stated for alpha2 > 1");
  }
  return notes;
}

EstimatorState EstimatorState::initial(const EstimatorConfig& cfg) {
  EstimatorState est;
  est.theta_hat = cfg.theta_hat0;
  return est;
}

EstimatorState::Packed EstimatorState::pack() const {
  Packed p;
  p.segment<2>(0) = lpf_xi2;
  p.segment<2>(2) = lpf_f1;
  p.segment<12>(4) = Eigen::Map<const Eigen::Matrix<double, 12, 1>>(lpf_phi.data());
  p.segment<6>(16) = xi_bar;
  p.segment<36>(22) = Eigen::Map<const Eigen::Matrix<double, 36, 1>>(phi_bar.data());
  p.segment<6>(58) = theta_hat.values();
  return p;
}

EstimatorState EstimatorState::unpack(const Eigen::Ref<const Packed>& p) {
  EstimatorState est;
  est.lpf_xi2 = p.segment<2>(0);
  est.lpf_f1 = p.segment<2>(2);
  est.lpf_phi = Eigen::Map<const RegressorMatrix>(p.segment<12>(4).data());
  est.xi_bar = p.segment<6>(16);
  est.phi_bar = Eigen::Map<const Matrix6d>(p.segment<36>(22).data());
  est.theta_hat = ThetaVec(p.segment<6>(58));
  return est;
}

FilteredSignals filtered_signals(const EstimatorState& est, const PlantState& state, double gamma) {
  return {state.xi2() - gamma * est.lpf_xi2 - est.lpf_f1, est.lpf_phi};
}

FilterDerivative filter_derivative(const EstimatorState& est, const PlantState& state,
                                   const Eigen::Vector2d& Omega, double gamma, PhysicsMode mode) {
  return {-gamma * est.lpf_xi2 + state.xi2(),
          -gamma * est.lpf_f1 + model::f1(state, mode),
          -gamma * est.lpf_phi + model::regressor(state, Omega)};
}

DataMatrices data_matrix_derivative(const DataMatrices& current, const FilteredSignals& s,
                                    double lambda) {
  return {-lambda * current.xi_bar + s.phi_f.transpose() * s.xi_f,
          -lambda * current.phi_bar + s.phi_f.transpose() * s.phi_f};
}

DataMatrices data_matrix_step(const DataMatrices& current, const FilteredSignals& signals,
                              double lambda, double dt) {
  using Flat = Eigen::Matrix<double, 42, 1>;
  auto pack = [](const DataMatrices& d) {
    Flat f;
    f.head<6>() = d.xi_bar;
    f.tail<36>() = Eigen::Map<const Eigen::Matrix<double, 36, 1>>(d.phi_bar.data());
    return f;
  };
  auto unpack = [](const Flat& f) {
    return DataMatrices{f.head<6>(), Eigen::Map<const Matrix6d>(f.tail<36>().data())};
  };
  const Flat next = numerics::rk4_step(
      [&](double, const Flat& x) { return pack(data_matrix_derivative(unpack(x), signals, lambda)); },
      pack(current), 0.0, dt);
  return unpack(next);
}

Vector6d estimation_error(const Matrix6d& phi_bar, const Vector6d& xi_bar, const ThetaVec& theta_hat) {
  return phi_bar * theta_hat.values() - xi_bar;
}

Vector6d theta_update(const Matrix6d& phi_bar, const Vector6d& xi_bar, const ThetaVec& theta_hat,
                      const EstimatorConfig& cfg) {
  const Vector6d xi = estimation_error(phi_bar, xi_bar, theta_hat);
  const double norm = xi.norm();
  if (norm < kXiDeadZone) return Vector6d::Zero();
  return -cfg.c1 * xi / std::pow(norm, 1.0 - cfg.alpha1) - cfg.c2 * xi / std::pow(norm, 1.0 - cfg.alpha2);
}

EstimatorState estimator_derivative(const EstimatorState& est, const PlantState& state,
                                    const Eigen::Vector2d& Omega, const EstimatorConfig& cfg,
                                    PhysicsMode mode) {
  const FilterDerivative fd = filter_derivative(est, state, Omega, cfg.gamma, mode);
  const DataMatrices dd =
      data_matrix_derivative({est.xi_bar, est.phi_bar}, filtered_signals(est, state, cfg.gamma), cfg.lambda);

  EstimatorState d;
  d.lpf_xi2 = fd.lpf_xi2;
  d.lpf_f1 = fd.lpf_f1;
  d.lpf_phi = fd.lpf_phi;
  d.xi_bar = dd.xi_bar;
  d.phi_bar = dd.phi_bar;
  d.theta_hat = cfg.adapt ? ThetaVec(theta_update(est.phi_bar, est.xi_bar, est.theta_hat, cfg)) : ThetaVec();
  return d;
}

double min_excitation(const Matrix6d& phi_bar) {
  const Matrix6d sym = 0.5 * (phi_bar + phi_bar.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix6d>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace drrs::estimator
