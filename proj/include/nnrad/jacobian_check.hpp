#pragma once

/// AD-versus-finite-difference checks of the step residual Jacobian.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

#include "nnrad/linalg.hpp"
#include "nnrad/newmark.hpp"
#include "nnrad/system.hpp"

namespace nnrad {

inline constexpr double kFdRelativeStep = 1e-6;
inline constexpr double kJacobianErrorFloor = 1e-12;

/// Central differences with per-column steps h_j.
template <class F>
Matrix central_difference_jacobian(F&& f, std::span<const double> x0, std::span<const double> h) {
  const std::size_t n = x0.size();
  if (h.size() != n) throw DimensionError("central_difference_jacobian: step count mismatch");
  Vector x(x0.begin(), x0.end());
  Matrix jac;
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = x0[j] + h[j];
    const Vector fp = f(std::span<const double>(x));
    x[j] = x0[j] - h[j];
    const Vector fm = f(std::span<const double>(x));
    x[j] = x0[j];
    if (j == 0) jac = Matrix(fp.size(), n);
    if (fp.size() != jac.rows() || fm.size() != jac.rows())
      throw DimensionError("central_difference_jacobian: output width varies");
    for (std::size_t i = 0; i < fp.size(); ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h[j]);
  }
  return jac;
}

/// h_j = 1e-6 · max(|x_j|, scale)
inline Vector fd_steps(std::span<const double> x, double scale) {
  Vector h(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    h[j] = kFdRelativeStep * std::max(std::abs(x[j]), scale);
  return h;
}

/// max|A − B| / max(max|B|, 1e-12)
inline double jacobian_relative_error(const Matrix& ad, const Matrix& reference) {
  if (ad.rows() != reference.rows() || ad.cols() != reference.cols())
    throw DimensionError("jacobian_relative_error: shape mismatch");
  double diff = 0.0;
  for (std::size_t i = 0; i < ad.rows(); ++i)
    for (std::size_t j = 0; j < ad.cols(); ++j)
      diff = std::max(diff, std::abs(ad(i, j) - reference(i, j)));
  return diff / std::max(reference.max_abs(), kJacobianErrorFloor);
}

struct JacobianCheckReport {
  std::string system;
  std::size_t states = 0;
  std::size_t rejected = 0;  ///< samples discarded as too close to a kink or guard
  double max_error = 0.0;
  double mean_error = 0.0;
  /// Linear systems only: AD Jacobian versus M/(βΔt²) + γC/(βΔt) + K.
  std::optional<double> analytic_error;

  bool passed(double tol) const noexcept { return max_error < tol; }
};

/// Step Jacobian of the linear part: M/(βΔt²) + γC/(βΔt) + K.
inline Matrix linear_step_jacobian(const DynamicSystem& sys, const NewmarkConfig& cfg) {
  const double c0 = 1.0 / (cfg.beta * cfg.dt * cfg.dt);
  const double c1 = cfg.gamma / (cfg.beta * cfg.dt);
  return sys.mass * c0 + sys.damping * c1 + sys.stiffness;
}

/// One randomized step configuration: previous state plus the trial x_{n+1}.
struct ResidualSample {
  State previous;
  Vector x1;
  double t1 = 0.0;
};

/// Draws a state whose FD stencil stays clear of non-smooth points.
/// Displacements are spread over the system's length scale; the trial
/// increment is a tenth of that, so velocities stay of order scale/dt.
inline ResidualSample random_residual_sample(const DynamicSystem& sys, const NewmarkConfig& cfg,
                                             std::mt19937_64& rng, std::size_t* rejected = nullptr) {
  const std::size_t n = sys.n_dof();
  const double ls = sys.length_scale;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    ResidualSample s;
    s.previous.t = time(rng);
    s.t1 = s.previous.t + cfg.dt;
    s.previous.x.resize(n);
    s.previous.v.resize(n);
    s.previous.a.resize(n);
    s.x1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.previous.x[i] = ls * u(rng);
      s.previous.v[i] = ls * u(rng);
      s.previous.a[i] = ls * u(rng);
      s.x1[i] = s.previous.x[i] + 0.1 * ls * u(rng);
    }
    const Vector h = fd_steps(s.x1, ls);
    const double hmax = *std::max_element(h.begin(), h.end());
    const Vector v1 = predict_velocity<double>(std::span<const double>(s.x1), s.previous, cfg);
    if (sys.margin(s.x1, v1, s.t1) >= 10.0 * hmax) return s;
    if (rejected != nullptr) ++*rejected;
  }
  throw std::runtime_error(sys.name + ": could not draw a smooth sample state");
}

/// Compares the AD residual Jacobian with central differences at `count` random samples.
inline JacobianCheckReport check_residual_jacobian(const DynamicSystem& sys, const NewmarkConfig& cfg,
                                                   std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("check_residual_jacobian: need at least one state");
  std::mt19937_64 rng(seed);
  JacobianCheckReport rep;
  rep.system = sys.name;
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const ResidualSample s = random_residual_sample(sys, cfg, rng, &rep.rejected);
    const Matrix ad = residual_and_jacobian(s.x1, s.previous, s.t1, sys, cfg).jacobian;
    const Matrix fd = central_difference_jacobian(
        [&](std::span<const double> x) { return residual<double>(x, s.previous, s.t1, sys, cfg); },
        s.x1, fd_steps(s.x1, sys.length_scale));
    const double err = jacobian_relative_error(ad, fd);
    if (!sys.nonlinear) {
      const double exact = jacobian_relative_error(ad, linear_step_jacobian(sys, cfg));
      rep.analytic_error = std::max(rep.analytic_error.value_or(0.0), exact);
    }
    rep.max_error = std::max(rep.max_error, err);
    total += err;
  }
  rep.states = count;
  rep.mean_error = total / static_cast<double>(count);
  return rep;
}

}  // namespace nnrad
