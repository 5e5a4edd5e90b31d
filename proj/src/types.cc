#include "drrs/types.h"

#include <cmath>
#include <sstream>

#include "drrs/errors.h"

namespace drrs {

SingularityError::SingularityError(double phi_v)
    : std::runtime_error([phi_v] {
        std::ostringstream os;
        os << "phi_v = " << phi_v << " rad is within " << kSingularityMargin
           << " rad of the Euler-angle singularity";
        return os.str();
      }()),
      phi_v_(phi_v) {}

SingularControlAuthority::SingularControlAuthority(double determinant)
    : std::runtime_error([determinant] {
        std::ostringstream os;
        os << "det(G * Theta2_hat) = " << determinant << " is below the control authority threshold";
        return os.str();
      }()),
      determinant_(determinant) {}

ParseError::ParseError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error([&problems] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  - " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

std::string_view to_string(PhysicsMode mode) {
  return mode == PhysicsMode::kCorrected ? "corrected" : "paper_literal";
}

PhysicsMode physics_mode_from_string(std::string_view name) {
  if (name == "corrected") return PhysicsMode::kCorrected;
  if (name == "paper_literal") return PhysicsMode::kPaperLiteral;
  throw std::invalid_argument("unknown physics mode '" + std::string(name) +
                              "' (expected corrected | paper_literal)");
}

std::vector<std::string> PhysicalParams::validate() const {
  std::vector<std::string> problems;
  auto positive = [&problems](const char* name, double value) {
    if (!(std::isfinite(value) && value > 0.0)) {
      problems.push_back(std::string("physical.") + name + " must be finite and > 0");
    }
  };
  positive("J1", J1);
  positive("J2", J2);
  positive("J3", J3);
  positive("ell", ell);
  positive("k_f", k_f);
  positive("k_tau", k_tau);
  if (!std::isfinite(beta_a)) problems.emplace_back("physical.beta_a must be finite");
  if (!std::isfinite(beta_b)) problems.emplace_back("physical.beta_b must be finite");
  return problems;
}

void check_singularity_guard(double phi_v) {
  if (!(std::abs(phi_v) < std::numbers::pi / 2 - kSingularityMargin)) {
    throw SingularityError(phi_v);
  }
}

ThetaVec::ThetaVec(std::initializer_list<double> values) : values_(Vector6d::Zero()) {
  if (values.size() != 6) throw std::invalid_argument("ThetaVec needs exactly 6 entries");
  int i = 0;
  for (double v : values) values_(i++) = v;
}

ThetaVec ThetaVec::from_blocks(const Eigen::Vector2d& theta1, const Eigen::Matrix2d& theta2) {
  Vector6d v;
  v << theta1(0), theta1(1), theta2(0, 0), theta2(0, 1), theta2(1, 0), theta2(1, 1);
  return ThetaVec(v);
}

Eigen::Matrix2d ThetaVec::theta2() const {
  Eigen::Matrix2d m;
  m << values_(2), values_(3), values_(4), values_(5);
  return m;
}

}  // namespace drrs
