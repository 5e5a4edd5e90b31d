#pragma once

#include <vector>

#include <Eigen/Dense>

namespace drrs::numerics {

/// One classical fourth-order Runge-Kutta step of x' = f(t, x).
/// Exceptions thrown by f propagate unchanged.
template <typename Vector, typename Derivative>
Vector rk4_step(Derivative&& f, const Vector& x, double t, double dt) {
  const Vector k1 = f(t, x);
  const Vector k2 = f(t + 0.5 * dt, Vector(x + (0.5 * dt) * k1));
  const Vector k3 = f(t + 0.5 * dt, Vector(x + (0.5 * dt) * k2));
  const Vector k4 = f(t + dt, Vector(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Largest real part of the eigenvalues of a square matrix.
double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& A);

/// True when every eigenvalue has real part below -tolerance.
bool is_hurwitz(const Eigen::Ref<const Eigen::MatrixXd>& A, double tolerance = 1e-9);

/// Solves A^T P + P A + Q = 0 for symmetric P through the Kronecker form
/// (I (x) A^T + A^T (x) I) vec(P) = -vec(Q). Sized for n <= ~10.
/// Throws NotHurwitz when A is not Hurwitz.
Eigen::MatrixXd lyapunov_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::MatrixXd>& Q);

struct LqrProblem {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  Eigen::MatrixXd Q;  // n x n, symmetric PSD
  Eigen::MatrixXd R;  // m x m, symmetric PD
};

struct CareOptions {
  int max_iterations = 100;
  /// Stop when ||P_k - P_{k-1}||_F <= tolerance * max(1, ||P_k||_F).
  double tolerance = 1e-13;
  double hurwitz_tolerance = 1e-9;
};

struct CareSolution {
  Eigen::MatrixXd P;  // stabilizing solution
  Eigen::MatrixXd K;  // R^-1 B^T P; u = -K x stabilizes
  int iterations = 0;
  /// trace(P_k) for each Newton iterate, starting from the first solve.
  std::vector<double> trace_history;
  double residual = 0.0;  // Frobenius norm of the Riccati residual
};

/// A^T P + P A - P B R^-1 B^T P + Q.
Eigen::MatrixXd care_residual(const LqrProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& P);

/// Gain K with A - B K Hurwitz, from the shifted Lyapunov construction
/// (A + s I) Z + Z (A + s I)^T = 2 B B^T, K = B^T Z^-1 with s above the
/// spectral abscissa of A. Throws NoStabilizingGain when (A, B) is not
/// controllable enough for Z to be positive definite.
Eigen::MatrixXd stabilizing_gain(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                 const Eigen::Ref<const Eigen::MatrixXd>& B);

/// Continuous algebraic Riccati equation by Kleinman-Newton iteration.
/// Throws std::invalid_argument for malformed problems, NoStabilizingGain,
/// or NonConvergence (including non-detectable (Q, A) where the limit is not
/// stabilizing).
CareSolution care_solve(const LqrProblem& problem, const CareOptions& options = {});

}  // namespace drrs::numerics
