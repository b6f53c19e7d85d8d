#pragma once

/// JSON run configurations and model parameter files (schema_version 1).
///
/// All quantities are SI; angles in rad, speeds in rad/s. Unknown keys are
/// rejected so that typos surface as schema errors instead of silent defaults.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nnrad/analysis.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/models/oscillators.hpp"
#include "nnrad/models/rotor.hpp"
#include "nnrad/models/sfd.hpp"
#include "nnrad/newmark.hpp"
#include "nnrad/system.hpp"

namespace nnrad::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                       const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

inline double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline double required_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  return number(j, key, 0.0, where);
}

inline int integer(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

inline bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
  return v.get<bool>();
}

inline std::string string(const json& j, const char* key, std::string fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline Vector number_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vector out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline void check_schema(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": top level must be an object");
  if (!j.contains("schema_version")) throw ConfigError(where + ": missing schema_version");
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion)
    throw ConfigError(where + ": unsupported schema_version (expected 1)");
}

inline json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

inline models::Spool parse_spool(const std::string& s, const std::string& where) {
  if (s == "low") return models::Spool::Low;
  if (s == "high") return models::Spool::High;
  throw ConfigError(where + ": spool must be 'low' or 'high'");
}

inline models::RaceDrive parse_drive(const std::string& s, const std::string& where) {
  if (s == "stationary") return models::RaceDrive::Stationary;
  if (s == "low") return models::RaceDrive::Low;
  if (s == "high") return models::RaceDrive::High;
  throw ConfigError(where + ": race drive must be 'stationary', 'low' or 'high'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model parameter files

struct DualRotorModel {
  models::RotorLayout layout;
  double high_speed_ratio = 1.2;  ///< ω2 / ω1 used when a single sweep speed is given
};

inline DualRotorModel parse_dual_rotor(const json& j, const std::string& where = "dual_rotor") {
  using namespace detail;
  check_schema(j, where);
  check_keys(j,
             {"schema_version", "model", "description", "material", "nodes", "elements", "disks",
              "bearings", "speeds", "damping", "gravity", "length_scale"},
             where);
  if (string(j, "model", "dual_rotor", where) != "dual_rotor")
    throw ConfigError(where + ": model must be 'dual_rotor'");

  DualRotorModel out;
  auto& L = out.layout;
  models::ShaftElementProps material;
  if (j.contains("material")) {
    const auto& m = j.at("material");
    const std::string w = where + ".material";
    check_keys(m, {"density", "young", "shear_modulus", "shear_factor"}, w);
    material.density = number(m, "density", material.density, w);
    material.young = number(m, "young", material.young, w);
    material.shear_modulus = number(m, "shear_modulus", material.shear_modulus, w);
    material.shear_factor = number(m, "shear_factor", material.shear_factor, w);
  }

  if (!j.contains("nodes") || !j.at("nodes").is_array()) throw ConfigError(where + ": 'nodes' array required");
  for (const auto& n : j.at("nodes")) {
    const std::string w = where + ".nodes";
    check_keys(n, {"id", "z", "spool"}, w);
    if (!n.contains("id")) throw ConfigError(w + ": node without id");
    L.nodes.push_back({integer(n, "id", 0, w), required_number(n, "z", w),
                       parse_spool(string(n, "spool", "low", w), w)});
  }

  if (j.contains("elements")) {
    for (const auto& e : j.at("elements")) {
      const std::string w = where + ".elements";
      check_keys(e, {"nodes", "outer_diameter", "inner_diameter", "density", "young", "shear_modulus",
                     "shear_factor"},
                 w);
      if (!e.contains("nodes") || !e.at("nodes").is_array() || e.at("nodes").size() != 2)
        throw ConfigError(w + ": 'nodes' must be a pair of node ids");
      const double d_out = required_number(e, "outer_diameter", w);
      const double d_in = number(e, "inner_diameter", 0.0, w);
      if (!(d_out > d_in && d_in >= 0.0)) throw ConfigError(w + ": need outer_diameter > inner_diameter >= 0");
      models::ShaftElement el;
      el.node_a = e.at("nodes")[0].get<int>();
      el.node_b = e.at("nodes")[1].get<int>();
      el.props = material;
      el.props.density = number(e, "density", material.density, w);
      el.props.young = number(e, "young", material.young, w);
      el.props.shear_modulus = number(e, "shear_modulus", material.shear_modulus, w);
      el.props.shear_factor = number(e, "shear_factor", material.shear_factor, w);
      const double pi = std::numbers::pi;
      el.props.area = pi * (d_out * d_out - d_in * d_in) / 4.0;
      el.props.i_z = pi * (std::pow(d_out, 4) - std::pow(d_in, 4)) / 64.0;
      L.elements.push_back(el);
    }
  }

  if (j.contains("disks")) {
    for (const auto& d : j.at("disks")) {
      const std::string w = where + ".disks";
      check_keys(d, {"node", "mass", "j_d", "j_p", "eccentricity", "phase"}, w);
      models::DiskPlacement p;
      p.node = integer(d, "node", 0, w);
      p.props.mass = required_number(d, "mass", w);
      p.props.j_d = required_number(d, "j_d", w);
      p.props.j_p = required_number(d, "j_p", w);
      p.props.eccentricity = number(d, "eccentricity", 0.0, w);
      p.props.phase = number(d, "phase", 0.0, w);
      L.disks.push_back(p);
    }
  }

  if (j.contains("bearings")) {
    for (const auto& b : j.at("bearings")) {
      const std::string w = where + ".bearings";
      check_keys(b, {"name", "inner_node", "outer_node", "inner_drive", "outer_drive", "n_balls", "k_hertz",
                     "clearance", "r_inner", "r_outer"},
                 w);
      models::BearingPlacement p;
      p.name = string(b, "name", "bearing", w);
      if (!b.contains("inner_node")) throw ConfigError(w + ": missing inner_node");
      p.inner_node = integer(b, "inner_node", 0, w);
      if (b.contains("outer_node") && !b.at("outer_node").is_null())
        p.outer_node = integer(b, "outer_node", 0, w);
      p.inner_drive = parse_drive(string(b, "inner_drive", "low", w), w);
      p.outer_drive = parse_drive(string(b, "outer_drive", "stationary", w), w);
      p.params.n_balls = integer(b, "n_balls", 8, w);
      p.params.k_hertz = required_number(b, "k_hertz", w);
      p.params.clearance = number(b, "clearance", 0.0, w);
      p.params.r_inner = required_number(b, "r_inner", w);
      p.params.r_outer = required_number(b, "r_outer", w);
      L.bearings.push_back(p);
    }
  }

  if (j.contains("speeds")) {
    const auto& s = j.at("speeds");
    const std::string w = where + ".speeds";
    check_keys(s, {"omega_low", "omega_high", "high_speed_ratio"}, w);
    out.high_speed_ratio = number(s, "high_speed_ratio", out.high_speed_ratio, w);
    L.omega_low = number(s, "omega_low", 0.0, w);
    L.omega_high = number(s, "omega_high", out.high_speed_ratio * L.omega_low, w);
  }
  if (j.contains("damping")) {
    const auto& d = j.at("damping");
    const std::string w = where + ".damping";
    check_keys(d, {"rayleigh_mass", "rayleigh_stiffness"}, w);
    L.rayleigh_mass = number(d, "rayleigh_mass", 0.0, w);
    L.rayleigh_stiffness = number(d, "rayleigh_stiffness", 0.0, w);
  }
  L.gravity = boolean(j, "gravity", false, where);
  L.length_scale = number(j, "length_scale", L.length_scale, where);
  L.validate();
  return out;
}

inline models::SfdRotorParams parse_sfd_rotor(const json& j, const std::string& where = "sfd_rotor") {
  using namespace detail;
  check_schema(j, where);
  check_keys(j,
             {"schema_version", "model", "description", "mass", "stiffness", "j_d", "j_p", "l1", "l2",
              "damping", "unbalance", "omega", "film"},
             where);
  if (string(j, "model", "sfd_rotor", where) != "sfd_rotor")
    throw ConfigError(where + ": model must be 'sfd_rotor'");
  models::SfdRotorParams p;
  p.mass = number(j, "mass", p.mass, where);
  p.stiffness = number(j, "stiffness", p.stiffness, where);
  p.j_d = number(j, "j_d", p.j_d, where);
  p.j_p = number(j, "j_p", p.j_p, where);
  p.l1 = number(j, "l1", p.l1, where);
  p.l2 = number(j, "l2", p.l2, where);
  p.damping = number(j, "damping", p.damping, where);
  p.unbalance = number(j, "unbalance", p.unbalance, where);
  p.omega = number(j, "omega", p.omega, where);
  if (j.contains("film")) {
    const auto& f = j.at("film");
    const std::string w = where + ".film";
    check_keys(f, {"viscosity", "journal_radius", "land_length", "clearance"}, w);
    p.film.viscosity = number(f, "viscosity", p.film.viscosity, w);
    p.film.journal_radius = number(f, "journal_radius", p.film.journal_radius, w);
    p.film.land_length = number(f, "land_length", p.film.land_length, w);
    p.film.clearance = number(f, "clearance", p.film.clearance, w);
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// System selection

enum class SystemKind { Duffing, VanDerPol, Pendulum, LinearSdof, SfdRotor, DualRotor };

struct SystemSpec {
  SystemKind kind = SystemKind::Duffing;
  models::DuffingParams duffing;
  double epsilon = 1.0;
  double sdof_mass = 1.0, sdof_damping = 0.0, sdof_stiffness = 1.0;
  models::SfdRotorParams sfd;
  DualRotorModel rotor;

  bool has_speed() const noexcept { return kind == SystemKind::SfdRotor || kind == SystemKind::DualRotor; }

  DynamicSystem build() const {
    switch (kind) {
      case SystemKind::Duffing: return models::duffing(duffing);
      case SystemKind::VanDerPol: return models::van_der_pol(epsilon);
      case SystemKind::Pendulum: return models::pendulum();
      case SystemKind::LinearSdof: return models::linear_sdof(sdof_mass, sdof_damping, sdof_stiffness);
      case SystemKind::SfdRotor: return models::sfd_rotor_system(sfd);
      case SystemKind::DualRotor: return models::assemble_dual_rotor(rotor.layout);
    }
    throw ConfigError("unknown system kind");
  }

  /// System at spin speed ω (low-pressure speed for the dual rotor, ω2 = ratio·ω).
  DynamicSystem build_at_speed(double omega) const {
    if (kind == SystemKind::SfdRotor) {
      models::SfdRotorParams p = sfd;
      p.omega = omega;
      return models::sfd_rotor_system(p);
    }
    if (kind == SystemKind::DualRotor) {
      models::RotorLayout l = rotor.layout;
      l.omega_low = omega;
      l.omega_high = rotor.high_speed_ratio * omega;
      return models::assemble_dual_rotor(l);
    }
    throw ConfigError("this system has no rotational speed to sweep");
  }

  /// Default amplitude probes: the journal (x, y) or every rotor node.
  std::vector<Probe> default_probes() const {
    if (kind == SystemKind::SfdRotor) return {Probe{"disk", 0, 1}};
    if (kind == SystemKind::DualRotor) {
      std::vector<Probe> out;
      for (const auto& n : rotor.layout.nodes)
        out.push_back({"node" + std::to_string(n.id), rotor.layout.dof(n.id, 0), rotor.layout.dof(n.id, 1)});
      return out;
    }
    return {};
  }
};

inline SystemSpec parse_system(const json& j, const std::filesystem::path& base_dir) {
  using namespace detail;
  const std::string where = "system";
  if (!j.is_object()) throw ConfigError("system: expected an object with a 'type'");
  const std::string type = string(j, "type", "", where);
  SystemSpec s;
  auto load_model = [&](const char* what) -> json {
    if (j.contains("model_file")) {
      std::filesystem::path p = string(j, "model_file", "", where);
      if (p.is_relative()) p = base_dir / p;
      return load_json(p);
    }
    if (j.contains("model")) return j.at("model");
    throw ConfigError(std::string("system: ") + what + " needs 'model_file' or an inline 'model'");
  };
  if (type == "duffing") {
    check_keys(j, {"type", "damping", "linear", "cubic", "amplitude", "frequency"}, where);
    s.kind = SystemKind::Duffing;
    s.duffing.damping = number(j, "damping", s.duffing.damping, where);
    s.duffing.linear = number(j, "linear", s.duffing.linear, where);
    s.duffing.cubic = number(j, "cubic", s.duffing.cubic, where);
    s.duffing.amplitude = number(j, "amplitude", s.duffing.amplitude, where);
    s.duffing.frequency = number(j, "frequency", s.duffing.frequency, where);
  } else if (type == "van_der_pol") {
    check_keys(j, {"type", "epsilon"}, where);
    s.kind = SystemKind::VanDerPol;
    s.epsilon = number(j, "epsilon", 1.0, where);
  } else if (type == "pendulum") {
    check_keys(j, {"type"}, where);
    s.kind = SystemKind::Pendulum;
  } else if (type == "linear_sdof") {
    check_keys(j, {"type", "mass", "damping", "stiffness"}, where);
    s.kind = SystemKind::LinearSdof;
    s.sdof_mass = number(j, "mass", 1.0, where);
    s.sdof_damping = number(j, "damping", 0.0, where);
    s.sdof_stiffness = number(j, "stiffness", 1.0, where);
  } else if (type == "sfd_rotor") {
    check_keys(j, {"type", "model_file", "model", "omega"}, where);
    s.kind = SystemKind::SfdRotor;
    s.sfd = (j.contains("model_file") || j.contains("model")) ? parse_sfd_rotor(load_model("sfd_rotor"))
                                                               : models::SfdRotorParams{};
    s.sfd.omega = number(j, "omega", s.sfd.omega, where);
  } else if (type == "dual_rotor") {
    check_keys(j, {"type", "model_file", "model", "omega_low", "omega_high"}, where);
    s.kind = SystemKind::DualRotor;
    s.rotor = parse_dual_rotor(load_model("dual_rotor"));
    if (j.contains("omega_low")) {
      s.rotor.layout.omega_low = number(j, "omega_low", 0.0, where);
      s.rotor.layout.omega_high = s.rotor.high_speed_ratio * s.rotor.layout.omega_low;
    }
    s.rotor.layout.omega_high = number(j, "omega_high", s.rotor.layout.omega_high, where);
  } else {
    throw ConfigError("system.type must be one of duffing, van_der_pol, pendulum, linear_sdof, "
                      "sfd_rotor, dual_rotor (got '" + type + "')");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Run configuration

enum class InitialMode { Zero, StaticEquilibrium };

struct SweepSpec {
  std::vector<double> speeds;
  std::vector<Probe> probes;
  double steady_fraction = 0.3;
  bool continuation = false;
  InitialMode initial = InitialMode::Zero;
};

struct SpectrumSpec {
  std::string input;
  std::string column = "x_0";
  std::optional<double> dt;       ///< taken from the t column when absent
  double window_fraction = 1.0;  ///< analyse only the trailing fraction of samples
};

struct CheckSpec {
  std::size_t states = 100;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;
};

struct RunConfig {
  std::filesystem::path base_dir;
  std::optional<SystemSpec> system;
  Vector x0, v0;  ///< empty means zeros
  double t0 = 0.0;
  double t_end = 1.0;
  NewmarkConfig newmark;
  Integrator integrator = Integrator::Newmark;
  std::optional<SweepSpec> sweep;
  std::optional<SpectrumSpec> spectrum;
  CheckSpec check;

  /// Initial conditions sized to the system; scalars in the file broadcast.
  std::pair<Vector, Vector> initial_conditions(std::size_t n) const {
    auto fit = [n](const Vector& v, const char* name) {
      if (v.empty()) return Vector(n, 0.0);
      if (v.size() == 1 && n > 1) return Vector(n, v[0]);
      if (v.size() != n)
        throw ConfigError(std::string("initial.") + name + " has " + std::to_string(v.size()) +
                          " entries but the system has " + std::to_string(n) + " DOFs");
      return v;
    };
    return {fit(x0, "x"), fit(v0, "v")};
  }
};

inline RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  check_schema(j, "config");
  check_keys(j, {"schema_version", "description", "system", "initial", "time", "solver", "sweep", "spectrum",
                 "check"},
             "config");
  RunConfig c;
  c.base_dir = base_dir;
  if (j.contains("system")) c.system = parse_system(j.at("system"), base_dir);

  if (j.contains("initial")) {
    const auto& ic = j.at("initial");
    check_keys(ic, {"x", "v"}, "initial");
    auto read = [&](const char* key) -> Vector {
      if (!ic.contains(key)) return {};
      const auto& v = ic.at(key);
      if (v.is_number()) return {v.get<double>()};
      return number_array(v, std::string("initial.") + key);
    };
    c.x0 = read("x");
    c.v0 = read("v");
  }

  if (j.contains("time")) {
    const auto& t = j.at("time");
    check_keys(t, {"t0", "t_end", "dt"}, "time");
    c.t0 = number(t, "t0", 0.0, "time");
    c.t_end = number(t, "t_end", c.t0 + 1.0, "time");
    c.newmark.dt = number(t, "dt", c.newmark.dt, "time");
    if (c.t_end < c.t0) throw ConfigError("time: t_end must not precede t0");
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, {"integrator", "beta", "gamma", "tol_dx", "tol_res", "max_iter", "strategy"}, "solver");
    const std::string integ = string(s, "integrator", "newmark", "solver");
    if (integ == "newmark") c.integrator = Integrator::Newmark;
    else if (integ == "rk4") c.integrator = Integrator::RungeKutta4;
    else throw ConfigError("solver.integrator must be 'newmark' or 'rk4'");
    c.newmark.beta = number(s, "beta", c.newmark.beta, "solver");
    c.newmark.gamma = number(s, "gamma", c.newmark.gamma, "solver");
    c.newmark.tol_dx = number(s, "tol_dx", c.newmark.tol_dx, "solver");
    c.newmark.tol_res = number(s, "tol_res", c.newmark.tol_res, "solver");
    c.newmark.max_iter = integer(s, "max_iter", c.newmark.max_iter, "solver");
    const std::string strat = string(s, "strategy", "full", "solver");
    const auto parsed = parse_strategy(strat);
    if (!parsed) throw ConfigError("solver.strategy must be full, simplified or broyden");
    c.newmark.strategy = *parsed;
  }
  try {
    c.newmark.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    check_keys(s, {"speeds", "probes", "steady_fraction", "continuation", "initial"}, "sweep");
    SweepSpec sw;
    if (!s.contains("speeds")) throw ConfigError("sweep: missing 'speeds'");
    const auto& sp = s.at("speeds");
    if (sp.is_array()) {
      sw.speeds = number_array(sp, "sweep.speeds");
    } else if (sp.is_object()) {
      check_keys(sp, {"start", "stop", "count"}, "sweep.speeds");
      const double a = required_number(sp, "start", "sweep.speeds");
      const double b = required_number(sp, "stop", "sweep.speeds");
      const int n = integer(sp, "count", 0, "sweep.speeds");
      if (n < 1) throw ConfigError("sweep.speeds.count must be at least 1");
      if (n == 1 && a != b) throw ConfigError("sweep.speeds: a single-point range needs start == stop");
      if (n > 1 && !(b > a)) throw ConfigError("sweep.speeds: stop must exceed start");
      for (int i = 0; i < n; ++i)
        sw.speeds.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    } else {
      throw ConfigError("sweep.speeds must be an array or {start, stop, count}");
    }
    if (sw.speeds.empty()) throw ConfigError("sweep.speeds is empty");
    for (double v : sw.speeds)
      if (!std::isfinite(v)) throw ConfigError("sweep.speeds: non-finite speed");
    if (s.contains("probes")) {
      if (!s.at("probes").is_array()) throw ConfigError("sweep.probes must be an array");
      for (const auto& p : s.at("probes")) {
        check_keys(p, {"label", "node", "x_dof", "y_dof"}, "sweep.probes");
        Probe pr;
        if (p.contains("node")) {
          if (!c.system || c.system->kind != SystemKind::DualRotor)
            throw ConfigError("sweep.probes: 'node' probes need a dual_rotor system");
          const int id = integer(p, "node", 0, "sweep.probes");
          pr.x_dof = c.system->rotor.layout.dof(id, 0);
          pr.y_dof = c.system->rotor.layout.dof(id, 1);
          pr.label = string(p, "label", "node" + std::to_string(id), "sweep.probes");
        } else {
          pr.x_dof = static_cast<std::size_t>(integer(p, "x_dof", 0, "sweep.probes"));
          pr.y_dof = static_cast<std::size_t>(integer(p, "y_dof", 1, "sweep.probes"));
          pr.label = string(p, "label", "dof" + std::to_string(pr.x_dof), "sweep.probes");
        }
        sw.probes.push_back(pr);
      }
    } else if (c.system) {
      sw.probes = c.system->default_probes();
    }
    sw.steady_fraction = number(s, "steady_fraction", sw.steady_fraction, "sweep");
    if (!(sw.steady_fraction > 0.0 && sw.steady_fraction < 1.0))
      throw ConfigError("sweep.steady_fraction must lie in (0, 1)");
    sw.continuation = boolean(s, "continuation", false, "sweep");
    const std::string init = string(s, "initial", "zero", "sweep");
    if (init == "zero") sw.initial = InitialMode::Zero;
    else if (init == "static") sw.initial = InitialMode::StaticEquilibrium;
    else throw ConfigError("sweep.initial must be 'zero' or 'static'");
    c.sweep = std::move(sw);
  }

  if (j.contains("spectrum")) {
    const auto& s = j.at("spectrum");
    check_keys(s, {"input", "column", "dt", "window_fraction"}, "spectrum");
    SpectrumSpec sp;
    sp.input = string(s, "input", "", "spectrum");
    if (!sp.input.empty() && std::filesystem::path(sp.input).is_relative())
      sp.input = (base_dir / sp.input).string();
    sp.column = string(s, "column", sp.column, "spectrum");
    if (s.contains("dt")) sp.dt = number(s, "dt", 0.0, "spectrum");
    sp.window_fraction = number(s, "window_fraction", 1.0, "spectrum");
    if (!(sp.window_fraction > 0.0 && sp.window_fraction <= 1.0))
      throw ConfigError("spectrum.window_fraction must lie in (0, 1]");
    c.spectrum = std::move(sp);
  }

  if (j.contains("check")) {
    const auto& s = j.at("check");
    check_keys(s, {"states", "seed", "tolerance"}, "check");
    const int n = integer(s, "states", 100, "check");
    if (n < 1) throw ConfigError("check.states must be at least 1");
    c.check.states = static_cast<std::size_t>(n);
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_unsigned()) throw ConfigError("check.seed must be a non-negative integer");
      c.check.seed = s.at("seed").get<std::uint64_t>();
    }
    c.check.tolerance = number(s, "tolerance", 1e-6, "check");
  }
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(detail::load_json(path), path.parent_path());
}

}  // namespace nnrad::io
