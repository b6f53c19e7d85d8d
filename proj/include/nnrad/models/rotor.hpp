#pragma once

/// Finite-element dual-rotor model: Timoshenko shaft elements, rigid disks with
/// unbalance, and rolling-element bearings with Hertz contact.
///
/// Every node carries four DOFs (x, y, θx, θy). Element matrices act on the two
/// bending planes U1 = [x, −θy] and U2 = [y, θx]; the spin couples them through
/// the antisymmetric gyroscopic term  −Ω J U̇2  /  +Ω J U̇1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nnrad/ad.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/linalg.hpp"
#include "nnrad/system.hpp"

namespace nnrad::models {

inline constexpr std::size_t kDofsPerNode = 4;
inline constexpr double kHertzExponent = 10.0 / 9.0;

// ---------------------------------------------------------------------------
// Shaft element

struct ShaftElementProps {
  double density = 7850.0;     ///< μ [kg/m³]
  double length = 0.0;         ///< l [m]
  double area = 0.0;           ///< A [m²]
  double young = 2.1e11;       ///< E [Pa]
  double i_z = 0.0;            ///< I_z [m⁴]
  double shear_factor = 0.886; ///< κ
  double shear_modulus = 8.1e10; ///< G [Pa]

  void validate() const {
    if (!(density > 0 && length > 0 && area > 0 && young > 0 && i_z > 0 && shear_factor > 0 &&
          shear_modulus > 0))
      throw std::invalid_argument("shaft element properties must all be strictly positive");
  }

  /// Shear deformation parameter φ = 12 E I / (κ G A l²).
  double shear_parameter() const {
    return 12.0 * young * i_z / (shear_factor * shear_modulus * area * length * length);
  }
};

struct ShaftElementMatrices {
  Matrix mass;       ///< M_s, translational plus rotary inertia
  Matrix gyroscopic; ///< J_s
  Matrix stiffness;  ///< K_s
};

/// 4×4 element matrices on one bending plane, DOF order [w1, ϑ1, w2, ϑ2].
inline ShaftElementMatrices shaft_element_matrices(const ShaftElementProps& p) {
  p.validate();
  const double l = p.length;
  const double phi = p.shear_parameter();
  const double phi2 = phi * phi;
  const double l2 = l * l;

  const double m1 = 312.0 + 588.0 * phi + 280.0 * phi2;
  const double m2 = (44.0 + 77.0 * phi + 35.0 * phi2) * l;
  const double m3 = 108.0 + 252.0 * phi + 140.0 * phi2;
  const double m4 = -(26.0 + 63.0 * phi + 35.0 * phi2) * l;
  const double m5 = (8.0 + 14.0 * phi + 7.0 * phi2) * l2;
  const double m6 = -(6.0 + 14.0 * phi + 7.0 * phi2) * l2;
  const double m7 = 36.0;
  const double m8 = (3.0 - 15.0 * phi) * l;
  const double m9 = (4.0 + 5.0 * phi + 10.0 * phi2) * l2;
  const double m10 = (-1.0 + 5.0 * phi + 5.0 * phi2) * l2;

  const Matrix translational{{m1, m2, m3, m4},
                             {m2, m5, -m4, m6},
                             {m3, -m4, m1, -m2},
                             {m4, m6, -m2, m5}};
  const Matrix rotary{{m7, m8, -m7, m8},
                      {m8, m9, -m8, m10},
                      {-m7, -m8, m7, -m8},
                      {m8, m10, -m8, m9}};
  const double opp2 = (1.0 + phi) * (1.0 + phi);

  ShaftElementMatrices out;
  out.mass = (p.density * p.area * l / (840.0 * opp2)) * translational +
             (p.density * p.i_z / (30.0 * l * opp2)) * rotary;
  out.gyroscopic = (p.density * p.i_z / (15.0 * l * opp2)) * rotary;
  out.stiffness = (p.young * p.i_z / (l * l2 * (1.0 + phi))) *
                  Matrix{{12.0, 6.0 * l, -12.0, 6.0 * l},
                         {6.0 * l, (4.0 + phi) * l2, -6.0 * l, (2.0 - phi) * l2},
                         {-12.0, -6.0 * l, 12.0, -6.0 * l},
                         {6.0 * l, (2.0 - phi) * l2, -6.0 * l, (4.0 + phi) * l2}};
  return out;
}

// ---------------------------------------------------------------------------
// Disk

struct DiskProps {
  double mass = 0.0;         ///< m [kg]
  double j_d = 0.0;          ///< diametral moment of inertia [kg·m²]
  double j_p = 0.0;          ///< polar moment of inertia [kg·m²]
  double eccentricity = 0.0; ///< e [m]
  double phase = 0.0;        ///< φ [rad]

  void validate() const {
    if (!(mass > 0 && j_d > 0 && j_p > 0))
      throw std::invalid_argument("disk mass and inertias must be strictly positive");
    if (!std::isfinite(eccentricity) || !std::isfinite(phase))
      throw std::invalid_argument("disk eccentricity and phase must be finite");
  }
};

struct DiskMatrices {
  Matrix mass;       ///< diag(m, J_d) on one plane
  Matrix gyroscopic; ///< Ω·diag(0, J_p)
  double m = 0.0;
  double eccentricity = 0.0;
  double phase = 0.0;
  double speed = 0.0;

  /// Unbalance force (x, y) = mΩ²e (sin(Ωt + φ), cos(Ωt + φ)).
  std::array<double, 2> unbalance(double t) const {
    const double f = m * speed * speed * eccentricity;
    const double arg = speed * t + phase;
    return {f * std::sin(arg), f * std::cos(arg)};
  }
};

inline DiskMatrices disk_matrices(const DiskProps& p, double speed) {
  p.validate();
  DiskMatrices d;
  d.mass = Matrix{{p.mass, 0.0}, {0.0, p.j_d}};
  d.gyroscopic = Matrix{{0.0, 0.0}, {0.0, speed * p.j_p}};
  d.m = p.mass;
  d.eccentricity = p.eccentricity;
  d.phase = p.phase;
  d.speed = speed;
  return d;
}

// ---------------------------------------------------------------------------
// Rolling-element bearing

struct BearingParams {
  int n_balls = 8;            ///< N_b
  double k_hertz = 0.0;       ///< K_b [N/m^(10/9)]
  double clearance = 0.0;     ///< δ0 [m]
  double r_inner = 0.0;       ///< inner race radius [m]
  double r_outer = 0.0;       ///< outer race radius [m]
  double omega_inner = 0.0;   ///< inner ring speed [rad/s]
  double omega_outer = 0.0;   ///< outer ring speed [rad/s]

  void validate() const {
    if (n_balls < 1) throw std::invalid_argument("bearing needs at least one rolling element");
    if (!(k_hertz > 0 && r_inner > 0 && r_outer > 0))
      throw std::invalid_argument("bearing stiffness and race radii must be positive");
    if (!(clearance >= 0)) throw std::invalid_argument("bearing clearance must be non-negative");
  }

  /// ω_c = (r_i·ω_outer + r_o·ω_inner) / (r_i + r_o).
  double cage_speed() const noexcept {
    return (r_inner * omega_outer + r_outer * omega_inner) / (r_inner + r_outer);
  }

  double ball_angle(int k, double t) const noexcept {
    return 2.0 * std::numbers::pi * k / n_balls + cage_speed() * t;
  }
};

/// Hertz-contact bearing force (F_x, F_y) on the inner race for relative
/// race displacement (x_i − x_o, y_i − y_o). Balls out of contact contribute nothing.
template <class T>
std::array<T, 2> bearing_force(const T& x_i, const T& y_i, const T& x_o, const T& y_o, double t,
                               const BearingParams& p) {
  const T dx = x_i - x_o;
  const T dy = y_i - y_o;
  T fx = zero_like(dx);
  T fy = zero_like(dx);
  for (int k = 0; k < p.n_balls; ++k) {
    const double theta = p.ball_angle(k, t);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    T delta = dx * c;
    add_scaled(delta, s, dy);
    delta -= p.clearance;
    if (value_of(delta) <= 0.0) continue;
    const T f = relu_pow(delta, kHertzExponent) * p.k_hertz;
    add_scaled(fx, c, f);
    add_scaled(fy, s, f);
  }
  return {fx, fy};
}

/// Smallest |δ_k| over all rolling elements, i.e. distance to the nearest contact switch.
inline double bearing_contact_margin(double x_i, double y_i, double x_o, double y_o, double t,
                                     const BearingParams& p) {
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < p.n_balls; ++k) {
    const double theta = p.ball_angle(k, t);
    const double delta =
        (x_i - x_o) * std::cos(theta) + (y_i - y_o) * std::sin(theta) - p.clearance;
    margin = std::min(margin, std::abs(delta));
  }
  return margin;
}

// ---------------------------------------------------------------------------
// Layout and assembly

enum class Spool { Low, High };
enum class RaceDrive { Stationary, Low, High };

struct RotorNode {
  int id = 0;
  double z = 0.0;  ///< axial coordinate [m]
  Spool spool = Spool::Low;
};

struct ShaftElement {
  int node_a = 0;
  int node_b = 0;
  ShaftElementProps props;  ///< length is taken from the node coordinates
};

struct DiskPlacement {
  int node = 0;
  DiskProps props;
};

/// A support bearing has no outer node (outer race grounded); an inter-shaft
/// bearing rides on two nodes of different spools.
struct BearingPlacement {
  std::string name;
  int inner_node = 0;
  std::optional<int> outer_node;
  BearingParams params;  ///< ring speeds are filled in from the drives at assembly
  RaceDrive inner_drive = RaceDrive::Low;
  RaceDrive outer_drive = RaceDrive::Stationary;
};

struct RotorLayout {
  std::vector<RotorNode> nodes;
  std::vector<ShaftElement> elements;
  std::vector<DiskPlacement> disks;
  std::vector<BearingPlacement> bearings;
  double omega_low = 0.0;   ///< ω1 [rad/s]
  double omega_high = 0.0;  ///< ω2 [rad/s]
  double rayleigh_mass = 0.0;       ///< a0 in C = a0 M + a1 K
  double rayleigh_stiffness = 0.0;  ///< a1
  bool gravity = false;
  double g = 9.81;
  double length_scale = 1e-5;  ///< typical displacement [m]

  std::size_t n_dof() const noexcept { return kDofsPerNode * nodes.size(); }

  std::size_t node_index(int id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == id) return i;
    throw ConfigError("rotor layout: unknown node id " + std::to_string(id));
  }

  /// Global DOF of component c (0 = x, 1 = y, 2 = θx, 3 = θy) at node `id`.
  std::size_t dof(int id, std::size_t component) const {
    return kDofsPerNode * node_index(id) + component;
  }

  double spool_speed(Spool s) const noexcept { return s == Spool::Low ? omega_low : omega_high; }

  double drive_speed(RaceDrive d) const noexcept {
    switch (d) {
      case RaceDrive::Stationary: return 0.0;
      case RaceDrive::Low: return omega_low;
      case RaceDrive::High: return omega_high;
    }
    return 0.0;
  }

  void validate() const {
    if (nodes.empty()) throw ConfigError("rotor layout has no nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (nodes[i].id == nodes[j].id)
          throw ConfigError("rotor layout: duplicate node id " + std::to_string(nodes[i].id));
    for (const auto& e : elements) {
      const auto& a = nodes[node_index(e.node_a)];
      const auto& b = nodes[node_index(e.node_b)];
      if (a.spool != b.spool) throw ConfigError("shaft element spans two spools");
      if (!(std::abs(b.z - a.z) > 0)) throw ConfigError("shaft element has zero length");
    }
    for (const auto& d : disks) {
      node_index(d.node);
      d.props.validate();
    }
    for (const auto& b : bearings) {
      b.params.validate();
      const auto& inner = nodes[node_index(b.inner_node)];
      if (b.outer_node) {
        const auto& outer = nodes[node_index(*b.outer_node)];
        if (inner.spool == outer.spool)
          throw ConfigError("inter-shaft bearing '" + b.name +
                            "' must couple a low-pressure and a high-pressure node");
      }
    }
  }
};

namespace detail {

/// Maps a plane-local 4×4 element matrix onto the 8 node DOFs
/// [x1, y1, θx1, θy1, x2, y2, θx2, θy2] of a two-node element.
inline Matrix expand_planes(const Matrix& local) {
  // Plane U1 = [x, −θy]: local index -> (node DOF, sign)
  constexpr std::array<std::size_t, 4> plane1_dof{0, 3, 4, 7};
  constexpr std::array<double, 4> plane1_sign{1.0, -1.0, 1.0, -1.0};
  constexpr std::array<std::size_t, 4> plane2_dof{1, 2, 5, 6};
  Matrix out(8, 8);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      out(plane1_dof[a], plane1_dof[b]) += plane1_sign[a] * plane1_sign[b] * local(a, b);
      out(plane2_dof[a], plane2_dof[b]) += local(a, b);
    }
  return out;
}

/// Gyroscopic coupling Ω·(T2ᵀ J T1 − T1ᵀ J T2) over the 8 node DOFs; antisymmetric.
inline Matrix expand_gyroscopic(const Matrix& local, double speed) {
  constexpr std::array<std::size_t, 4> plane1_dof{0, 3, 4, 7};
  constexpr std::array<double, 4> plane1_sign{1.0, -1.0, 1.0, -1.0};
  constexpr std::array<std::size_t, 4> plane2_dof{1, 2, 5, 6};
  Matrix out(8, 8);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      out(plane1_dof[a], plane2_dof[b]) -= speed * plane1_sign[a] * local(a, b);
      out(plane2_dof[a], plane1_dof[b]) += speed * plane1_sign[b] * local(a, b);
    }
  return out;
}

}  // namespace detail

/// Element matrices in node-DOF ordering, before scattering.
inline ShaftElementMatrices shaft_element_global(const ShaftElementProps& p) {
  const ShaftElementMatrices local = shaft_element_matrices(p);
  return {detail::expand_planes(local.mass), detail::expand_planes(local.gyroscopic),
          detail::expand_planes(local.stiffness)};
}

struct RotorMatrices {
  Matrix mass;
  Matrix stiffness;
  Matrix gyroscopic;  ///< speed-dependent part of C, antisymmetric
  Matrix damping;     ///< full C = a0 M + a1 K + gyroscopic
};

inline RotorMatrices assemble_rotor_matrices(const RotorLayout& layout) {
  layout.validate();
  const std::size_t n = layout.n_dof();
  RotorMatrices out{Matrix(n, n), Matrix(n, n), Matrix(n, n), Matrix(n, n)};

  for (const auto& e : layout.elements) {
    const std::size_t ia = layout.node_index(e.node_a);
    const std::size_t ib = layout.node_index(e.node_b);
    ShaftElementProps props = e.props;
    props.length = std::abs(layout.nodes[ib].z - layout.nodes[ia].z);
    const ShaftElementMatrices local = shaft_element_matrices(props);
    const double speed = layout.spool_speed(layout.nodes[ia].spool);
    std::array<std::size_t, 8> map{};
    for (std::size_t c = 0; c < kDofsPerNode; ++c) {
      map[c] = kDofsPerNode * ia + c;
      map[kDofsPerNode + c] = kDofsPerNode * ib + c;
    }
    scatter_add(out.mass, detail::expand_planes(local.mass), map);
    scatter_add(out.stiffness, detail::expand_planes(local.stiffness), map);
    scatter_add(out.gyroscopic, detail::expand_gyroscopic(local.gyroscopic, speed), map);
  }

  for (const auto& d : layout.disks) {
    const std::size_t i = layout.node_index(d.node);
    const double speed = layout.spool_speed(layout.nodes[i].spool);
    const DiskMatrices dm = disk_matrices(d.props, speed);
    const std::size_t base = kDofsPerNode * i;
    out.mass(base + 0, base + 0) += d.props.mass;
    out.mass(base + 1, base + 1) += d.props.mass;
    out.mass(base + 2, base + 2) += d.props.j_d;
    out.mass(base + 3, base + 3) += d.props.j_d;
    // U1 = [x, −θy], U2 = [y, θx]: −ΩJ U̇2 in the −θy row, +ΩJ U̇1 in the θx row.
    const double g = dm.gyroscopic(1, 1);
    out.gyroscopic(base + 3, base + 2) += g;
    out.gyroscopic(base + 2, base + 3) -= g;
  }

  out.damping = layout.rayleigh_mass * out.mass + layout.rayleigh_stiffness * out.stiffness;
  out.damping += out.gyroscopic;
  return out;
}

namespace detail {

struct ResolvedBearing {
  std::size_t inner_base = 0;
  std::optional<std::size_t> outer_base;
  BearingParams params;
};

inline std::vector<ResolvedBearing> resolve_bearings(const RotorLayout& layout) {
  std::vector<ResolvedBearing> out;
  for (const auto& b : layout.bearings) {
    ResolvedBearing r;
    r.inner_base = kDofsPerNode * layout.node_index(b.inner_node);
    if (b.outer_node) r.outer_base = kDofsPerNode * layout.node_index(*b.outer_node);
    r.params = b.params;
    r.params.omega_inner = layout.drive_speed(b.inner_drive);
    r.params.omega_outer = layout.drive_speed(b.outer_drive);
    out.push_back(r);
  }
  return out;
}

}  // namespace detail

/// Assembles M Ẍ + C Ẋ + K X + F_bearings(X, t) = Q_unbalance(t) (+ gravity).
inline DynamicSystem assemble_dual_rotor(const RotorLayout& layout) {
  RotorMatrices mats = assemble_rotor_matrices(layout);
  const std::size_t n = layout.n_dof();
  const auto bearings = detail::resolve_bearings(layout);

  struct Unbalance {
    std::size_t base;
    DiskMatrices disk;
  };
  std::vector<Unbalance> unbalance;
  for (const auto& d : layout.disks) {
    const std::size_t i = layout.node_index(d.node);
    unbalance.push_back({kDofsPerNode * i,
                         disk_matrices(d.props, layout.spool_speed(layout.nodes[i].spool))});
  }
  Vector gravity(n, 0.0);
  if (layout.gravity) {
    Vector ey(n, 0.0);
    for (std::size_t i = 1; i < n; i += kDofsPerNode) ey[i] = 1.0;
    gravity = matvec(mats.mass, ey);
    for (double& v : gravity) v *= -layout.g;
  }

  DynamicSystem sys;
  sys.name = "dual_rotor";
  sys.mass = std::move(mats.mass);
  sys.damping = std::move(mats.damping);
  sys.stiffness = std::move(mats.stiffness);
  sys.length_scale = layout.length_scale;
  sys.excitation = [unbalance, gravity](double t) {
    Vector q = gravity;
    for (const auto& u : unbalance) {
      const auto f = u.disk.unbalance(t);
      q[u.base + 0] += f[0];
      q[u.base + 1] += f[1];
    }
    return q;
  };
  sys.nonlinear = make_nonlinear_force([bearings, n](auto x, auto, auto, double t) {
    using T = std::remove_cv_t<typename decltype(x)::element_type>;
    std::vector<T> f;
    f.reserve(n);
    for (const auto& xi : x) f.push_back(zero_like(xi));
    for (const auto& b : bearings) {
      const T& xi = x[b.inner_base];
      const T& yi = x[b.inner_base + 1];
      std::array<T, 2> force;
      if (b.outer_base) {
        force = bearing_force(xi, yi, x[*b.outer_base], x[*b.outer_base + 1], t, b.params);
        f[*b.outer_base] -= force[0];
        f[*b.outer_base + 1] -= force[1];
      } else {
        const T ground = zero_like(xi);
        force = bearing_force(xi, yi, ground, ground, t, b.params);
      }
      f[b.inner_base] += force[0];
      f[b.inner_base + 1] += force[1];
    }
    return f;
  });
  sys.smoothness_margin = [bearings](std::span<const double> x, std::span<const double>,
                                     double t) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& b : bearings) {
      const double xo = b.outer_base ? x[*b.outer_base] : 0.0;
      const double yo = b.outer_base ? x[*b.outer_base + 1] : 0.0;
      margin = std::min(margin, bearing_contact_margin(x[b.inner_base], x[b.inner_base + 1], xo,
                                                       yo, t, b.params));
    }
    return margin;
  };
  return sys;
}

}  // namespace nnrad::models
