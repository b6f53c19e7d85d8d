#pragma once

/// Single-degree-of-freedom benchmark oscillators.

#include <cmath>
#include <numbers>
#include <type_traits>
#include <span>
#include <vector>

#include "nnrad/ad.hpp"
#include "nnrad/system.hpp"

namespace nnrad::models {

/// ẍ + ε(x² − 1)ẋ + x = 0
inline DynamicSystem van_der_pol(double epsilon) {
  DynamicSystem sys;
  sys.name = "van_der_pol";
  sys.mass = Matrix{{1.0}};
  sys.damping = Matrix{{0.0}};
  sys.stiffness = Matrix{{1.0}};
  sys.nonlinear = make_nonlinear_force([epsilon](auto x, auto v, auto, double) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    return std::vector<T>{epsilon * (x[0] * x[0] - 1.0) * v[0]};
  });
  return sys;
}

struct DuffingParams {
  double damping = 1.0;      ///< δ
  double linear = 1.0;       ///< α
  double cubic = 3.0;        ///< β
  double amplitude = 10.0;   ///< γ
  double frequency = 1.0;    ///< ω [rad/s]
};

/// ẍ + δẋ + αx + βx³ = γ cos(ωt)
inline DynamicSystem duffing(const DuffingParams& p = {}) {
  DynamicSystem sys;
  sys.name = "duffing";
  sys.mass = Matrix{{1.0}};
  sys.damping = Matrix{{p.damping}};
  sys.stiffness = Matrix{{p.linear}};
  sys.excitation = [p](double t) { return Vector{p.amplitude * std::cos(p.frequency * t)}; };
  const double cubic = p.cubic;
  sys.nonlinear = make_nonlinear_force([cubic](auto x, auto, auto, double) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    return std::vector<T>{cubic * x[0] * x[0] * x[0]};
  });
  return sys;
}

/// ẍ + sin x = 0
inline DynamicSystem pendulum() {
  DynamicSystem sys;
  sys.name = "pendulum";
  sys.mass = Matrix{{1.0}};
  sys.damping = Matrix{{0.0}};
  sys.stiffness = Matrix{{0.0}};
  sys.nonlinear = make_nonlinear_force([](auto x, auto, auto, double) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    using std::sin;
    return std::vector<T>{sin(x[0])};
  });
  return sys;
}

/// m ẍ + c ẋ + k x = 0, no nonlinear term.
inline DynamicSystem linear_sdof(double mass = 1.0, double damping = 0.0, double stiffness = 1.0) {
  DynamicSystem sys;
  sys.name = "linear_sdof";
  sys.mass = Matrix{{mass}};
  sys.damping = Matrix{{damping}};
  sys.stiffness = Matrix{{stiffness}};
  return sys;
}

}  // namespace nnrad::models
