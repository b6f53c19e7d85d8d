#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nnrad/linalg.hpp"
#include "nnrad/system.hpp"

namespace nnrad {

/// Newton diagnostics for one accepted time step.
struct StepStats {
  int iterations = 0;            ///< Newton updates applied
  int jacobian_evaluations = 0;  ///< AD Jacobian evaluations
  double dx_norm = 0.0;          ///< norm of the last increment
  double residual_norm = 0.0;    ///< residual norm at the accepted state
};

/// States on a uniform time grid. `stats[k]` describes the step that produced
/// `states[k + 1]`; it is empty for explicit integrators.
struct Trajectory {
  double dt = 0.0;
  std::vector<State> states;
  std::vector<StepStats> stats;

  std::size_t size() const noexcept { return states.size(); }
  bool empty() const noexcept { return states.empty(); }
  std::size_t dim() const noexcept { return states.empty() ? 0 : states.front().dim(); }

  Vector times() const {
    Vector t;
    t.reserve(states.size());
    for (const auto& s : states) t.push_back(s.t);
    return t;
  }

  Vector displacement(std::size_t dof) const {
    Vector out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.x.at(dof));
    return out;
  }

  Vector velocity(std::size_t dof) const {
    Vector out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.v.at(dof));
    return out;
  }
};

/// Number of uniform steps of size dt needed to reach t_end from t0.
inline std::size_t step_count(double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (t_end < t0) throw std::invalid_argument("t_end must not precede t0");
  const double steps = (t_end - t0) / dt;
  const double nearest = std::round(steps);
  if (std::abs(steps - nearest) <= 1e-9 * std::max(1.0, nearest))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(steps));
}

}  // namespace nnrad
