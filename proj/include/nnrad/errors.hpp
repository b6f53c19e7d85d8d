#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nnrad {

/// Argument outside the domain of an elementary operation (sqrt of a negative, division by zero, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Vector/matrix/bundle sizes that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t pivot, double magnitude)
      : std::runtime_error("singular matrix: pivot " + std::to_string(pivot) +
                           " has magnitude " + std::to_string(magnitude)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class SingularJacobianError : public std::runtime_error {
 public:
  SingularJacobianError(std::size_t step, std::size_t pivot)
      : std::runtime_error("Jacobian singular at step " + std::to_string(step) +
                           " (pivot " + std::to_string(pivot) + ")"),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::size_t step, int iterations, double dx_norm, double residual_norm)
      : std::runtime_error("Newton iteration did not converge at step " + std::to_string(step) +
                           " after " + std::to_string(iterations) + " iterations (|dx| = " +
                           std::to_string(dx_norm) + ", |R| = " + std::to_string(residual_norm) +
                           ")"),
        step_(step),
        iterations_(iterations),
        dx_norm_(dx_norm),
        residual_norm_(residual_norm) {}

  std::size_t step() const noexcept { return step_; }
  int iterations() const noexcept { return iterations_; }
  double dx_norm() const noexcept { return dx_norm_; }
  double residual_norm() const noexcept { return residual_norm_; }

 private:
  std::size_t step_;
  int iterations_;
  double dx_norm_;
  double residual_norm_;
};

/// Explicit integrator produced a non-finite state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, double t)
      : std::runtime_error("non-finite state at step " + std::to_string(step) +
                           " (t = " + std::to_string(t) + ")"),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Squeeze-film journal touched the outer ring (dimensionless eccentricity >= 1).
class FilmRuptureError : public DomainError {
 public:
  explicit FilmRuptureError(double r)
      : DomainError("squeeze film rupture: dimensionless eccentricity " + std::to_string(r) +
                    " >= 1"),
        eccentricity_(r) {}

  double eccentricity() const noexcept { return eccentricity_; }

 private:
  double eccentricity_;
};

/// Malformed configuration or model file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nnrad
