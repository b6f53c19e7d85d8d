#pragma once

/// Rigid rotor on a squeeze-film damper (left) and a linear support (right).
///
/// The oil-film force uses the short-bearing π-film model: radial and
/// tangential forces are Sommerfeld integrals over the positive-pressure half
/// [θ1, θ1 + π], evaluated with 15-point Gauss-Legendre panels so that the
/// whole force pipeline stays differentiable.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnrad/ad.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/linalg.hpp"
#include "nnrad/quadrature.hpp"
#include "nnrad/system.hpp"

namespace nnrad::models {

struct SFDParams {
  double viscosity = 6.76e-3;       ///< μ [Pa·s]
  double journal_radius = 3.915e-2; ///< R [m]
  double land_length = 0.015;       ///< L [m]
  double clearance = 2.5e-4;        ///< C [m]

  void validate() const {
    if (!(clearance > 0)) throw std::invalid_argument("film clearance must be positive");
    if (!(viscosity > 0 && journal_radius > 0 && land_length > 0))
      throw std::invalid_argument("SFD viscosity, radius and length must be positive");
  }

  /// The short-bearing model assumes L/D < 0.25.
  bool short_bearing_valid() const noexcept { return land_length / (2.0 * journal_radius) < 0.25; }

  /// μ R L³ / C²
  double force_coefficient() const noexcept {
    return viscosity * journal_radius * land_length * land_length * land_length /
           (clearance * clearance);
  }
};

/// Below this journal eccentricity [m] the film force is taken as zero.
inline constexpr double kConcentricityFloor = 1e-12;
/// Below this whirl rate [rad/s] the film start angle takes its atan2 limit.
inline constexpr double kWhirlFloor = 1e-12;

namespace detail {
inline void check_film(double r) {
  if (!(r >= 0.0)) throw DomainError("sommerfeld: negative dimensionless eccentricity");
  if (r >= 1.0) throw FilmRuptureError(r);
}
}  // namespace detail

/// Panels for the composite rule. The integrand has poles at θ = π ± i·acosh(1/r);
/// keeping each panel's half width below acosh(1/r)/1.2 holds the 15-node error
/// near 1e-13. Small r gets a single panel, i.e. the plain 15-node rule.
inline int sommerfeld_panels(double r) {
  if (r <= 0.0) return 1;
  const double reach = std::acosh(1.0 / r);
  return std::max(1, static_cast<int>(std::ceil(1.2 * (std::numbers::pi / 2.0) / reach)));
}

/// ∫_{θ1}^{θ1+π} sin^l θ cos^m θ / (1 + r cos θ)³ dθ by composite 15-point Gauss-Legendre.
template <class T>
T sommerfeld_integral(int l, int m, const T& r, const T& theta1) {
  if (l < 0 || l > 2 || m < 0 || m > 2)
    throw std::invalid_argument("sommerfeld: exponents must lie in 0..2");
  detail::check_film(value_of(r));
  using std::cos;
  using std::sin;
  const int panels = sommerfeld_panels(value_of(r));
  const double width = std::numbers::pi / panels;
  T sum = zero_like(theta1);
  for (int k = 0; k < panels; ++k) {
    const T a = theta1 + k * width;
    const T b = theta1 + (k + 1) * width;
    sum += integrate(gauss_legendre_15(), a, b, [&](const T& th) {
      const T c = cos(th);
      const T s = sin(th);
      T num = constant_like(th, 1.0);
      for (int i = 0; i < l; ++i) num *= s;
      for (int i = 0; i < m; ++i) num *= c;
      const T d = 1.0 + r * c;
      return num / (d * d * d);
    });
  }
  return sum;
}

template <class T>
struct SommerfeldSet {
  T i11;
  T i02;
  T i20;
};

/// The three integrals the film force needs, sharing one pass over the nodes.
template <class T>
SommerfeldSet<T> sommerfeld_set(const T& r, const T& theta1) {
  detail::check_film(value_of(r));
  using std::cos;
  using std::sin;
  const auto& rule = gauss_legendre_15();
  const int panels = sommerfeld_panels(value_of(r));
  const double half = std::numbers::pi / (2.0 * panels);
  SommerfeldSet<T> out{zero_like(theta1), zero_like(theta1), zero_like(theta1)};
  for (int k = 0; k < panels; ++k) {
    const T mid = theta1 + (2 * k + 1) * half;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const T th = mid + half * rule.nodes[i];
      const T c = cos(th);
      const T s = sin(th);
      const T d = 1.0 + r * c;
      const T w = rule.weights[i] / (d * d * d);
      out.i11 += w * s * c;
      out.i02 += w * c * c;
      out.i20 += w * s * s;
    }
  }
  out.i11 *= half;
  out.i02 *= half;
  out.i20 *= half;
  return out;
}

/// Journal kinematics: rotor-center displacements and rates.
template <class T>
struct JournalState {
  T x, y, theta_x, theta_y;
  T dx, dy, dtheta_x, dtheta_y;
};

/// Oil-film force (F_x, F_y) on the journal located at arm l1 from the disk.
template <class T>
std::array<T, 2> sfd_force(const JournalState<T>& s, const SFDParams& p, double l1) {
  using std::atan2;
  using std::sqrt;
  // Journal centre relative to the damper centre.
  T u = s.x;
  add_scaled(u, l1, s.theta_y);
  T w = s.y;
  add_scaled(w, -l1, s.theta_x);
  T du = s.dx;
  add_scaled(du, l1, s.dtheta_y);
  T dw = s.dy;
  add_scaled(dw, -l1, s.dtheta_x);

  const T e2 = u * u + w * w;
  if (value_of(e2) < kConcentricityFloor * kConcentricityFloor) return {zero_like(u), zero_like(u)};
  const T e = sqrt(e2);
  const T e_dot = (u * du + w * dw) / e;
  const T psi_dot = (u * dw - w * du) / e2;
  const T r = e / p.clearance;
  const T r_dot = e_dot / p.clearance;
  detail::check_film(value_of(r));

  T theta1 = zero_like(u);
  if (std::abs(value_of(psi_dot)) < kWhirlFloor) {
    const double rd = value_of(r_dot);
    const double sign = rd > 0.0 ? -1.0 : (rd < 0.0 ? 1.0 : 0.0);
    theta1 = constant_like(u, sign * std::numbers::pi / 2.0);
  } else {
    theta1 = atan2(-r_dot, r * psi_dot);
  }

  const SommerfeldSet<T> I = sommerfeld_set(r, theta1);
  const double coef = p.force_coefficient();
  const T whirl = psi_dot * r;
  const T f_r = (I.i11 * whirl + I.i02 * r_dot) * coef;
  const T f_t = (I.i20 * whirl + I.i11 * r_dot) * coef;
  return {(f_r * u - f_t * w) / e, (f_r * w + f_t * u) / e};
}

struct SfdRotorParams {
  double mass = 37.62;         ///< m [kg]
  double stiffness = 5.4e6;    ///< k [N/m]
  double j_d = 0.8;            ///< J_d [kg·m²]
  double j_p = 1.6;            ///< J_p [kg·m²]
  double l1 = 0.894;           ///< disk to damper [m]
  double l2 = 1.038;           ///< disk to linear support [m]
  double damping = 265.0;      ///< c [N·s/m]
  double unbalance = 6.508e-4; ///< δ [kg·m]
  double omega = 600.0;        ///< spin speed [rad/s]
  SFDParams film;

  void validate() const {
    if (!(mass > 0 && j_d > 0 && j_p > 0))
      throw std::invalid_argument("SFD rotor mass and inertias must be positive");
    film.validate();
  }
};

/// 4-DOF rotor (x, y, θx, θy) with the squeeze-film damper force.
inline DynamicSystem sfd_rotor_system(const SfdRotorParams& p) {
  p.validate();
  const double m = p.mass;
  const double k = p.stiffness;
  const double c = p.damping;
  const double l1 = p.l1;
  const double l2 = p.l2;
  const double ls = l1 * l1 + l2 * l2;
  const double gyro = p.j_p * p.omega;

  DynamicSystem sys;
  sys.name = "sfd_rotor";
  sys.mass = Matrix::diagonal(std::array{m, m, p.j_d, p.j_d});
  sys.damping = Matrix{{2.0 * c, 0.0, 0.0, c * (l1 - l2)},
                       {0.0, 2.0 * c, c * (l2 - l1), 0.0},
                       {0.0, c * (l2 - l1), c * ls, gyro},
                       {c * (l1 - l2), 0.0, -gyro, c * ls}};
  sys.stiffness = Matrix{{k, 0.0, 0.0, k * (l1 - l2) / 2.0},
                         {0.0, k, k * (l2 - l1) / 2.0, 0.0},
                         {0.0, k * (l2 - l1) / 2.0, k * ls / 2.0, 0.0},
                         {k * (l1 - l2) / 2.0, 0.0, 0.0, k * ls / 2.0}};
  const double f0 = p.unbalance * p.omega * p.omega;
  const double omega = p.omega;
  sys.excitation = [f0, omega](double t) {
    return Vector{f0 * std::cos(omega * t), f0 * std::sin(omega * t), 0.0, 0.0};
  };
  const SFDParams film = p.film;
  sys.nonlinear = make_nonlinear_force([film, l1](auto x, auto v, auto, double) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    const JournalState<T> js{x[0], x[1], x[2], x[3], v[0], v[1], v[2], v[3]};
    const auto f = sfd_force(js, film, l1);
    T mx = f[1] * (-l1);
    T my = f[0] * l1;
    return std::vector<T>{f[0], f[1], std::move(mx), std::move(my)};
  });
  sys.length_scale = p.film.clearance;
  sys.smoothness_margin = [film, l1](std::span<const double> x, std::span<const double>, double) {
    const double u = x[0] + l1 * x[3];
    const double w = x[1] - l1 * x[2];
    const double e = std::hypot(u, w);
    return std::min(e, film.clearance - e);
  };
  return sys;
}

}  // namespace nnrad::models
