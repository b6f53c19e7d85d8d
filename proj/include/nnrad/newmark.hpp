#pragma once

/// Newmark time integration with Newton-Raphson iterations whose Jacobians
/// come from forward-mode automatic differentiation of the step residual.
///
/// One step solves R(x1) = 0 for the displacement x1 at t1 = t + dt, where
///
///   a1 = (x1 − x)/(β dt²) − v/(β dt) − (1/(2β) − 1) a
///   v1 = γ (x1 − x)/(β dt) + (1 − γ/β) v + (1 − γ/(2β)) dt a
///   R  = M a1 + C v1 + K x1 + F(x1, v1, a1, t1) − Q(t1)
///
/// and J = dR/dx1 is obtained by evaluating R once over ADScalar.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnrad/ad.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/linalg.hpp"
#include "nnrad/system.hpp"
#include "nnrad/trajectory.hpp"

namespace nnrad {

enum class IterationStrategy {
  FullNewton,        ///< fresh AD Jacobian every iteration
  SimplifiedNewton,  ///< one AD Jacobian per step
  BroydenRank1,      ///< one AD Jacobian per step, then rank-1 secant updates
};

inline std::string_view to_string(IterationStrategy s) {
  switch (s) {
    case IterationStrategy::FullNewton: return "full";
    case IterationStrategy::SimplifiedNewton: return "simplified";
    case IterationStrategy::BroydenRank1: return "broyden";
  }
  return "unknown";
}

inline std::optional<IterationStrategy> parse_strategy(std::string_view s) {
  if (s == "full") return IterationStrategy::FullNewton;
  if (s == "simplified") return IterationStrategy::SimplifiedNewton;
  if (s == "broyden") return IterationStrategy::BroydenRank1;
  return std::nullopt;
}

struct NewmarkConfig {
  double beta = 0.25;   ///< displacement weight (average acceleration: 1/4)
  double gamma = 0.5;   ///< velocity weight (no numerical damping: 1/2)
  double dt = 1e-3;     ///< time step [s]
  double tol_dx = 1e-10;
  double tol_res = 1e-8;
  int max_iter = 50;
  IterationStrategy strategy = IterationStrategy::FullNewton;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("Newmark beta must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (!(tol_dx >= 0.0) || !(tol_res >= 0.0))
      throw std::invalid_argument("tolerances must be non-negative");
  }

  bool unconditionally_stable() const noexcept { return gamma >= 0.5 && beta >= 0.5 * gamma; }

  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (gamma < 0.5) w.emplace_back("gamma < 1/2: scheme is not unconditionally stable");
    if (beta < 0.5 * gamma) w.emplace_back("beta < gamma/2: scheme is not unconditionally stable");
    return w;
  }
};

namespace detail {
inline void require_state(const State& s, std::size_t n) {
  if (s.x.size() != n || s.v.size() != n || s.a.size() != n)
    throw DimensionError("state dimension does not match the displacement vector");
}
}  // namespace detail

template <class T>
std::vector<T> predict_acceleration(std::span<const T> x1, const State& s, const NewmarkConfig& cfg) {
  detail::require_state(s, x1.size());
  const double c0 = 1.0 / (cfg.beta * cfg.dt * cfg.dt);
  const double c1 = 1.0 / (cfg.beta * cfg.dt);
  const double c2 = 1.0 / (2.0 * cfg.beta) - 1.0;
  std::vector<T> out;
  out.reserve(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i)
    out.push_back((x1[i] - s.x[i]) * c0 - (c1 * s.v[i] + c2 * s.a[i]));
  return out;
}

template <class T>
std::vector<T> predict_velocity(std::span<const T> x1, const State& s, const NewmarkConfig& cfg) {
  detail::require_state(s, x1.size());
  const double c0 = cfg.gamma / (cfg.beta * cfg.dt);
  const double c1 = 1.0 - cfg.gamma / cfg.beta;
  const double c2 = (1.0 - cfg.gamma / (2.0 * cfg.beta)) * cfg.dt;
  std::vector<T> out;
  out.reserve(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i)
    out.push_back((x1[i] - s.x[i]) * c0 + (c1 * s.v[i] + c2 * s.a[i]));
  return out;
}

/// Step residual R(x1) for T in {double, ADScalar}.
template <class T>
std::vector<T> residual(std::span<const T> x1, const State& s, double t1, const DynamicSystem& sys,
                        const NewmarkConfig& cfg) {
  if (x1.size() != sys.n_dof()) throw DimensionError("residual: x1 has wrong length");
  const std::vector<T> a1 = predict_acceleration(x1, s, cfg);
  const std::vector<T> v1 = predict_velocity(x1, s, cfg);
  return equation_residual<T>(sys, x1, v1, a1, t1);
}

inline ValueAndJacobian residual_and_jacobian(std::span<const double> x1, const State& s, double t1,
                                              const DynamicSystem& sys, const NewmarkConfig& cfg) {
  return evaluate_with_jacobian(
      [&](std::span<const ADScalar> x) { return residual<ADScalar>(x, s, t1, sys, cfg); }, x1);
}

/// Acceleration consistent with the equation of motion at (x0, v0, t0).
inline Vector initial_acceleration(const DynamicSystem& sys, std::span<const double> x0,
                                   std::span<const double> v0, double t0) {
  sys.validate();
  const std::size_t n = sys.n_dof();
  if (x0.size() != n || v0.size() != n)
    throw DimensionError("initial_acceleration: initial conditions have wrong length");
  const Vector zero(n, 0.0);

  if (!sys.nonlinear.acceleration_dependent) {
    // M a = Q − C v − K x − F(x, v, 0, t)
    Vector rhs = equation_residual<double>(sys, x0, v0, zero, t0);
    for (double& r : rhs) r = -r;
    return LuFactorization(sys.mass).solve(rhs);
  }

  Vector a = zero;
  const std::vector<ADScalar> x_c = lift_constants(x0, n);
  const std::vector<ADScalar> v_c = lift_constants(v0, n);
  constexpr int kMaxIter = 50;
  for (int it = 0; it < kMaxIter; ++it) {
    auto [g, jac] = evaluate_with_jacobian(
        [&](std::span<const ADScalar> acc) {
          return equation_residual<ADScalar>(sys, x_c, v_c, acc, t0);
        },
        a);
    const Vector da = LuFactorization(std::move(jac)).solve(g);
    for (std::size_t i = 0; i < n; ++i) a[i] -= da[i];
    if (norm2(da) <= 1e-12 * (1.0 + norm2(a))) return a;
  }
  throw NonConvergenceError(0, kMaxIter, 0.0, norm2(equation_residual<double>(sys, x0, v0, a, t0)));
}

struct StepResult {
  State state;
  StepStats stats;
};

/// Advances `s` to time t1 (normally s.t + cfg.dt). `step_index` only labels errors.
inline StepResult step(const DynamicSystem& sys, const State& s, double t1, const NewmarkConfig& cfg,
                       std::size_t step_index = 0) {
  const std::size_t n = sys.n_dof();
  detail::require_state(s, n);

  Vector x = s.x;  // predictor: x1 starts at x_n
  Vector r;
  Vector last_dx;
  Matrix jac;
  LuFactorization lu;
  bool have_jacobian = false;
  bool broyden_refreshed = false;
  StepStats stats;

  bool factored = false;
  // Factorization is deferred until a solve is needed, so a residual that is
  // already converged never requires a nonsingular Jacobian.
  auto set_jacobian = [&](Matrix j) {
    jac = std::move(j);
    have_jacobian = true;
    factored = false;
  };
  auto ensure_factored = [&]() {
    if (factored) return;
    try {
      lu = LuFactorization(jac);
    } catch (const SingularMatrixError& e) {
      throw SingularJacobianError(step_index, e.pivot());
    }
    factored = true;
  };

  auto evaluate_with_ad = [&]() {
    auto [value, j] = residual_and_jacobian(x, s, t1, sys, cfg);
    ++stats.jacobian_evaluations;
    r = std::move(value);
    set_jacobian(std::move(j));
  };

  for (int iter = 0;; ++iter) {
    bool need_ad = !have_jacobian;
    switch (cfg.strategy) {
      case IterationStrategy::FullNewton: need_ad = true; break;
      case IterationStrategy::SimplifiedNewton: break;
      case IterationStrategy::BroydenRank1:
        if (!broyden_refreshed && iter > 0 && iter >= cfg.max_iter / 2) {
          need_ad = true;
          broyden_refreshed = true;
        }
        break;
    }

    if (need_ad) {
      evaluate_with_ad();
    } else {
      r = residual<double>(x, s, t1, sys, cfg);
      if (cfg.strategy == IterationStrategy::BroydenRank1 && !last_dx.empty()) {
        // Secant update with step s = −dx: J += (ΔR − J s) sᵀ / (sᵀ s).
        // Since J dx = R_prev, ΔR − J s collapses to R_new.
        const double ss = dot(last_dx, last_dx);
        if (ss > 0.0) {
          Matrix updated = jac;
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) updated(i, j) -= r[i] * last_dx[j] / ss;
          set_jacobian(std::move(updated));
        }
      }
    }

    stats.residual_norm = norm2(r);
    if (!std::isfinite(stats.residual_norm))
      throw NonConvergenceError(step_index, stats.iterations, stats.dx_norm, stats.residual_norm);
    if (stats.residual_norm < cfg.tol_res) break;
    if (iter >= cfg.max_iter)
      throw NonConvergenceError(step_index, stats.iterations, stats.dx_norm, stats.residual_norm);

    ensure_factored();
    Vector dx = lu.solve(r);
    for (std::size_t i = 0; i < n; ++i) x[i] -= dx[i];
    stats.dx_norm = norm2(dx);
    ++stats.iterations;
    last_dx = std::move(dx);

    if (stats.dx_norm < cfg.tol_dx * (1.0 + norm2(x))) {
      stats.residual_norm = norm2(residual<double>(x, s, t1, sys, cfg));
      break;
    }
  }

  StepResult out;
  out.state.t = t1;
  out.state.a = predict_acceleration<double>(x, s, cfg);
  out.state.v = predict_velocity<double>(x, s, cfg);
  out.state.x = std::move(x);
  out.stats = stats;
  return out;
}

inline StepResult step(const DynamicSystem& sys, const State& s, const NewmarkConfig& cfg,
                       std::size_t step_index = 0) {
  return step(sys, s, s.t + cfg.dt, cfg, step_index);
}

/// Integrates from (x0, v0) at t0 over a uniform grid reaching t_end.
/// The initial acceleration is solved from the equation of motion.
inline Trajectory integrate(const DynamicSystem& sys, std::span<const double> x0,
                            std::span<const double> v0, double t0, double t_end,
                            const NewmarkConfig& cfg) {
  cfg.validate();
  sys.validate();
  const std::size_t steps = step_count(t0, t_end, cfg.dt);

  Trajectory traj;
  traj.dt = cfg.dt;
  traj.states.reserve(steps + 1);
  traj.stats.reserve(steps);

  State s;
  s.t = t0;
  s.x.assign(x0.begin(), x0.end());
  s.v.assign(v0.begin(), v0.end());
  s.a = initial_acceleration(sys, x0, v0, t0);
  traj.states.push_back(s);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t1 = t0 + static_cast<double>(k + 1) * cfg.dt;
    StepResult r = step(sys, traj.states.back(), t1, cfg, k + 1);
    traj.states.push_back(std::move(r.state));
    traj.stats.push_back(r.stats);
  }
  return traj;
}

}  // namespace nnrad
