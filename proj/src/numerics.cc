#include "drrs/numerics.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "drrs/errors.h"

namespace drrs::numerics {
namespace {

void require(bool condition, const char* what) {
  if (!condition) throw std::invalid_argument(std::string("care_solve: ") + what);
}

bool is_symmetric(const Eigen::MatrixXd& M, double tol) {
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, M.cwiseAbs().maxCoeff());
}

}  // namespace

double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("spectral_abscissa: matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectral_abscissa: eigensolver failed");
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Eigen::Ref<const Eigen::MatrixXd>& A, double tolerance) {
  return spectral_abscissa(A) < -tolerance;
}

Eigen::MatrixXd lyapunov_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::MatrixXd>& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw std::invalid_argument("lyapunov_solve: dimension mismatch");
  }
  const double abscissa = spectral_abscissa(A);
  if (!(abscissa < 0.0)) {
    std::ostringstream os;
    os << "lyapunov_solve: A is not Hurwitz (spectral abscissa " << abscissa << ")";
    throw NotHurwitz(os.str());
  }

  // Column-major vec: vec(A^T P) = (I (x) A^T) vec(P), vec(P A) = (A^T (x) I) vec(P).
  const Eigen::MatrixXd At = A.transpose();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    L.block(j * n, j * n, n, n) += At;
    for (Eigen::Index i = 0; i < n; ++i) {
      L.block(j * n, i * n, n, n).diagonal().array() += At(j, i);
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Eigen::MatrixXd(Q).data(), n * n);
  const Eigen::VectorXd p = L.fullPivLu().solve(rhs);
  Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(p.data(), n, n);
  return 0.5 * (P + P.transpose());
}

Eigen::MatrixXd care_residual(const LqrProblem& prob, const Eigen::Ref<const Eigen::MatrixXd>& P) {
  const Eigen::MatrixXd BtP = prob.B.transpose() * P;
  return prob.A.transpose() * P + P * prob.A - BtP.transpose() * prob.R.llt().solve(BtP) + prob.Q;
}

Eigen::MatrixXd stabilizing_gain(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                 const Eigen::Ref<const Eigen::MatrixXd>& B) {
  const Eigen::Index n = A.rows();
  const double shift = std::max(0.0, spectral_abscissa(A)) + 1.0;
  // (-(A + sI)) Z + Z (-(A + sI))^T + 2 B B^T = 0, written for lyapunov_solve
  // (which takes the transposed operator).
  const Eigen::MatrixXd shifted = -(A + shift * Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd Z = lyapunov_solve(shifted.transpose(), 2.0 * B * B.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(Z);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Z).eigenvalues().minCoeff();
  if (llt.info() != Eigen::Success || !(min_eig > 1e-12 * Z.norm())) {
    throw NoStabilizingGain("stabilizing_gain: (A, B) is not controllable");
  }
  Eigen::MatrixXd K = B.transpose() * llt.solve(Eigen::MatrixXd::Identity(n, n));
  if (!is_hurwitz(A - B * K)) {
    throw NoStabilizingGain("stabilizing_gain: initial gain failed the Hurwitz check");
  }
  return K;
}

CareSolution care_solve(const LqrProblem& prob, const CareOptions& options) {
  const Eigen::Index n = prob.A.rows();
  const Eigen::Index m = prob.B.cols();
  require(prob.A.cols() == n, "A must be square");
  require(prob.B.rows() == n, "B must have as many rows as A");
  require(prob.Q.rows() == n && prob.Q.cols() == n, "Q must be n x n");
  require(prob.R.rows() == m && prob.R.cols() == m, "R must be m x m");
  require(is_symmetric(prob.Q, 1e-12), "Q must be symmetric");
  require(is_symmetric(prob.R, 1e-12), "R must be symmetric");
  require(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(prob.Q).eigenvalues().minCoeff() >=
              -1e-12 * std::max(1.0, prob.Q.norm()),
          "Q must be positive semidefinite");
  Eigen::LLT<Eigen::MatrixXd> r_llt(prob.R);
  require(r_llt.info() == Eigen::Success, "R must be positive definite");

  CareSolution sol;
  Eigen::MatrixXd K = stabilizing_gain(prob.A, prob.B);
  Eigen::MatrixXd P_prev;
  bool converged = false;

  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd closed = prob.A - prob.B * K;
    Eigen::MatrixXd P;
    try {
      P = lyapunov_solve(closed, prob.Q + K.transpose() * prob.R * K);
    } catch (const NotHurwitz& e) {
      throw NonConvergence(std::string("care_solve: Newton iterate lost stability: ") + e.what());
    }
    sol.trace_history.push_back(P.trace());
    K = r_llt.solve(prob.B.transpose() * P);
    sol.iterations = it;

    const bool settled =
        it > 1 && (P - P_prev).norm() <= options.tolerance * std::max(1.0, P.norm());
    P_prev = std::move(P);
    if (settled) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    throw NonConvergence("care_solve: no convergence within " +
                         std::to_string(options.max_iterations) + " Kleinman iterations");
  }
  sol.P = P_prev;
  sol.K = K;
  sol.residual = care_residual(prob, sol.P).norm();
  const double abscissa = spectral_abscissa(prob.A - prob.B * sol.K);
  if (!(abscissa < -options.hurwitz_tolerance)) {
    std::ostringstream os;
    os << "care_solve: limit is not stabilizing (closed-loop spectral abscissa " << abscissa
       << "); (Q, A) is likely not detectable";
    throw NonConvergence(os.str());
  }
  return sol;
}

}  // namespace drrs::numerics
