#pragma once

/// Second-order dynamic systems  M·a + C·v + K·x + F(x, v, a, t) = Q(t).

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nnrad/ad.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/linalg.hpp"

namespace nnrad {

/// Response of the system at one time instant.
struct State {
  double t = 0.0;
  Vector x;  ///< displacement
  Vector v;  ///< velocity
  Vector a;  ///< acceleration

  std::size_t dim() const noexcept { return x.size(); }
};

template <class T>
using NonlinearFn = std::function<std::vector<T>(std::span<const T> x, std::span<const T> v,
                                                 std::span<const T> a, double t)>;

/// The nonlinear force term, held in two instantiations of one generic callable.
struct NonlinearForce {
  NonlinearFn<double> values;
  NonlinearFn<ADScalar> dual;
  /// True when F depends on the acceleration (nonlinear mass effects).
  bool acceleration_dependent = false;

  explicit operator bool() const noexcept { return static_cast<bool>(values); }
};

/// Wraps a generic callable `fn(x, v, a, t)` taking `std::span<const T>` for
/// T in {double, ADScalar} and returning `std::vector<T>`.
template <class Fn>
NonlinearForce make_nonlinear_force(Fn fn, bool acceleration_dependent = false) {
  NonlinearForce f;
  f.values = [fn](std::span<const double> x, std::span<const double> v,
                  std::span<const double> a, double t) { return fn(x, v, a, t); };
  f.dual = [fn](std::span<const ADScalar> x, std::span<const ADScalar> v,
                std::span<const ADScalar> a, double t) { return fn(x, v, a, t); };
  f.acceleration_dependent = acceleration_dependent;
  return f;
}

struct DynamicSystem {
  std::string name;
  Matrix mass;
  Matrix damping;
  Matrix stiffness;
  /// External excitation Q(t); empty means zero.
  std::function<Vector(double)> excitation;
  /// Nonlinear force F(x, v, a, t); empty means none.
  NonlinearForce nonlinear;

  /// Typical displacement magnitude, used to scale finite-difference steps and
  /// random states in derivative checks.
  double length_scale = 1.0;
  /// Optional distance from (x, v) to the nearest surface where F is not smooth
  /// (contact onset, guard switch). Derivative checks reject states closer than
  /// their finite-difference step.
  std::function<double(std::span<const double> x, std::span<const double> v, double t)>
      smoothness_margin;

  std::size_t n_dof() const noexcept { return mass.rows(); }

  void validate() const {
    const std::size_t n = n_dof();
    if (n == 0) throw DimensionError(name + ": system has no degrees of freedom");
    for (const Matrix* m : {&mass, &damping, &stiffness})
      if (m->rows() != n || m->cols() != n)
        throw DimensionError(name + ": M, C and K must all be " + std::to_string(n) + "x" +
                             std::to_string(n));
  }

  Vector external_force(double t) const {
    if (!excitation) return Vector(n_dof(), 0.0);
    Vector q = excitation(t);
    if (q.size() != n_dof()) throw DimensionError(name + ": Q(t) has wrong length");
    return q;
  }

  template <class T>
  std::vector<T> nonlinear_force(std::span<const T> x, std::span<const T> v,
                                 std::span<const T> a, double t) const {
    if (!nonlinear) {
      std::vector<T> z;
      z.reserve(x.size());
      for (const auto& xi : x) z.push_back(zero_like(xi));
      return z;
    }
    std::vector<T> f;
    if constexpr (std::is_same_v<T, double>)
      f = nonlinear.values(x, v, a, t);
    else
      f = nonlinear.dual(x, v, a, t);
    if (f.size() != n_dof()) throw DimensionError(name + ": F(x, v, a, t) has wrong length");
    return f;
  }

  double margin(std::span<const double> x, std::span<const double> v, double t) const {
    return smoothness_margin ? smoothness_margin(x, v, t) : std::numeric_limits<double>::infinity();
  }
};

/// out += A·x for T in {double, ADScalar}; zero entries of A are skipped.
template <class T>
void accumulate_matvec(std::vector<T>& out, const Matrix& a, std::span<const T> x) {
  if (a.cols() != x.size() || a.rows() != out.size())
    throw DimensionError("accumulate_matvec: size mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] != 0.0) add_scaled(out[i], row[j], x[j]);
  }
}

/// M·a + C·v + K·x + F(x, v, a, t) − Q(t), the equation of motion residual.
template <class T>
std::vector<T> equation_residual(const DynamicSystem& sys, std::span<const T> x,
                                 std::span<const T> v, std::span<const T> a, double t) {
  std::vector<T> r = sys.nonlinear_force<T>(x, v, a, t);
  accumulate_matvec(r, sys.mass, a);
  accumulate_matvec(r, sys.damping, v);
  accumulate_matvec(r, sys.stiffness, x);
  const Vector q = sys.external_force(t);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= q[i];
  return r;
}

}  // namespace nnrad
