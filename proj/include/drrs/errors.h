#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace drrs {

/// The Euler-angle parameterization is undefined at phi_v = +-pi/2; raised
/// when a state comes within the guard margin of it.
class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(double phi_v);
  double phi_v() const { return phi_v_; }

 private:
  double phi_v_;
};

/// |det(G * Theta2_hat)| fell below the configured threshold.
class SingularControlAuthority : public std::runtime_error {
 public:
  explicit SingularControlAuthority(double determinant);
  double determinant() const { return determinant_; }

 private:
  double determinant_;
};

class NotHurwitz : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoStabilizingGain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed config text. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

/// Every violated invariant of a config, collected rather than first-only.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace drrs
