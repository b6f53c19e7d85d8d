#pragma once

/// Classical fixed-step fourth-order Runge-Kutta on the first-order reduction
/// y = [x; v], used as the reference solution for the Newmark integrator.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nnrad/errors.hpp"
#include "nnrad/linalg.hpp"
#include "nnrad/system.hpp"
#include "nnrad/trajectory.hpp"

namespace nnrad {

/// dy/dt = f(t, y) for y = [x; v] of length 2·n_dof.
struct FirstOrderField {
  std::size_t n_dof = 0;
  std::function<Vector(double t, std::span<const double> y)> eval;

  Vector operator()(double t, std::span<const double> y) const { return eval(t, y); }
};

/// f(t, [x; v]) = [v; M⁻¹(Q(t) − C v − K x − F(x, v, 0, t))]. M is factored once.
inline FirstOrderField to_first_order(const DynamicSystem& sys) {
  sys.validate();
  if (sys.nonlinear.acceleration_dependent)
    throw std::invalid_argument(sys.name +
                                ": first-order reduction needs an acceleration-free F(x, v, t)");
  const std::size_t n = sys.n_dof();
  auto lu = std::make_shared<const LuFactorization>(sys.mass);
  auto system = std::make_shared<const DynamicSystem>(sys);
  FirstOrderField field;
  field.n_dof = n;
  field.eval = [n, lu, system](double t, std::span<const double> y) {
    if (y.size() != 2 * n) throw DimensionError("first-order field: state has wrong length");
    const auto x = y.first(n);
    const auto v = y.subspan(n, n);
    const Vector zero(n, 0.0);
    Vector rhs = equation_residual<double>(*system, x, v, zero, t);
    for (double& r : rhs) r = -r;
    const Vector acc = lu->solve(rhs);
    Vector dy(2 * n);
    std::copy(v.begin(), v.end(), dy.begin());
    std::copy(acc.begin(), acc.end(), dy.begin() + static_cast<std::ptrdiff_t>(n));
    return dy;
  };
  return field;
}

/// One classical RK4 step of size h.
template <class F>
Vector rk4_step(F&& f, double t, std::span<const double> y, double h) {
  const std::size_t m = y.size();
  Vector tmp(m);
  const Vector k1 = f(t, y);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  const Vector k2 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  const Vector k3 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
  const Vector k4 = f(t + h, tmp);
  Vector out(m);
  for (std::size_t i = 0; i < m; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

struct OdeSolution {
  Vector t;
  std::vector<Vector> y;
};

/// Fixed-step RK4 for a general first-order system f(t, y).
template <class F>
OdeSolution rk4_solve(F&& f, std::span<const double> y0, double t0, double t_end, double dt) {
  const std::size_t steps = step_count(t0, t_end, dt);
  OdeSolution sol;
  sol.t.reserve(steps + 1);
  sol.y.reserve(steps + 1);
  sol.t.push_back(t0);
  sol.y.emplace_back(y0.begin(), y0.end());
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    Vector next = rk4_step(f, t, sol.y.back(), dt);
    for (double v : next)
      if (!std::isfinite(v)) throw DivergenceError(k + 1, t + dt);
    sol.t.push_back(t0 + static_cast<double>(k + 1) * dt);
    sol.y.push_back(std::move(next));
  }
  return sol;
}

/// RK4 trajectory in the same layout as the Newmark integrator; accelerations
/// are re-evaluated from the field at every stored state.
inline Trajectory rk4_integrate(const FirstOrderField& field, std::span<const double> y0, double t0,
                                double t_end, double dt) {
  const std::size_t n = field.n_dof;
  if (y0.size() != 2 * n) throw DimensionError("rk4_integrate: y0 must have length 2·n_dof");
  const std::size_t steps = step_count(t0, t_end, dt);

  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(steps + 1);
  Vector y(y0.begin(), y0.end());
  auto record = [&](double t, const Vector& yk) {
    const Vector dy = field(t, yk);
    State s;
    s.t = t;
    s.x.assign(yk.begin(), yk.begin() + static_cast<std::ptrdiff_t>(n));
    s.v.assign(yk.begin() + static_cast<std::ptrdiff_t>(n), yk.end());
    s.a.assign(dy.begin() + static_cast<std::ptrdiff_t>(n), dy.end());
    traj.states.push_back(std::move(s));
  };
  record(t0, y);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    y = rk4_step(field, t, y, dt);
    for (double v : y)
      if (!std::isfinite(v)) throw DivergenceError(k + 1, t + dt);
    record(t0 + static_cast<double>(k + 1) * dt, y);
  }
  return traj;
}

inline Trajectory rk4_integrate(const DynamicSystem& sys, std::span<const double> x0,
                                std::span<const double> v0, double t0, double t_end, double dt) {
  Vector y0(x0.begin(), x0.end());
  y0.insert(y0.end(), v0.begin(), v0.end());
  return rk4_integrate(to_first_order(sys), y0, t0, t_end, dt);
}

}  // namespace nnrad
