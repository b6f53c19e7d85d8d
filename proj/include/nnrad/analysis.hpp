#pragma once

/// Post-processing: orbit amplitude, one-sided spectra, steady-state windows
/// and rotational-speed sweeps.

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nnrad/ad.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/linalg.hpp"
#include "nnrad/newmark.hpp"
#include "nnrad/rk4.hpp"
#include "nnrad/system.hpp"
#include "nnrad/trajectory.hpp"

namespace nnrad {

/// RMS distance of the orbit (x_i, y_i) from its mean point.
inline double amplitude(std::span<const double> x, std::span<const double> y) {
  if (x.empty()) throw std::invalid_argument("amplitude: empty signal");
  if (x.size() != y.size()) throw DimensionError("amplitude: x and y lengths differ");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    s += dx * dx + dy * dy;
  }
  return std::sqrt(s / n);
}

struct Spectrum {
  Vector frequency;  ///< [rad/s]
  Vector magnitude;  ///< one-sided amplitude

  std::size_t peak_bin() const {
    if (magnitude.empty()) throw std::invalid_argument("spectrum is empty");
    return static_cast<std::size_t>(
        std::max_element(magnitude.begin(), magnitude.end()) - magnitude.begin());
  }
};

/// One-sided amplitude spectrum of the mean-removed signal.
///
/// Bin k sits at 2πk/(N dt). Magnitudes are |X_k|/N for the DC and Nyquist
/// bins and 2|X_k|/N otherwise, so a sinusoid of amplitude A landing exactly
/// on a bin shows magnitude A.
inline Spectrum spectrum(std::span<const double> signal, double dt) {
  const std::size_t n = signal.size();
  if (n < 2) throw std::invalid_argument("spectrum: need at least two samples");
  if (!(dt > 0.0)) throw std::invalid_argument("spectrum: sample spacing must be positive");

  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t bins = n / 2 + 1;
  std::vector<double> in(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = signal[i] - mean;
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
  if (out == nullptr) throw std::bad_alloc();
  {
    // Planner calls are not thread-safe.
    static std::mutex planner_mutex;
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex);
      plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }

  Spectrum s;
  s.frequency.resize(bins);
  s.magnitude.resize(bins);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::hypot(out[k][0], out[k][1]) / nd;
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    s.magnitude[k] = unpaired ? mag : 2.0 * mag;
    s.frequency[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / (nd * dt);
  }
  fftw_free(out);
  return s;
}

/// Final `fraction` of the samples (at least one).
inline Trajectory steady_window(const Trajectory& traj, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("steady_window: fraction must lie in (0, 1)");
  const std::size_t n = traj.size();
  std::size_t keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  keep = std::clamp<std::size_t>(keep, 1, std::max<std::size_t>(n, 1));
  Trajectory out;
  out.dt = traj.dt;
  if (n == 0) return out;
  const std::size_t first = n - keep;
  out.states.assign(traj.states.begin() + static_cast<std::ptrdiff_t>(first), traj.states.end());
  if (!traj.stats.empty()) {
    // stats[k] belongs to states[k + 1]
    const std::size_t s0 = first == 0 ? 0 : first - 1;
    out.stats.assign(traj.stats.begin() + static_cast<std::ptrdiff_t>(s0), traj.stats.end());
  }
  return out;
}

/// A displacement pair whose orbit amplitude is reported (e.g. a node's x and y).
struct Probe {
  std::string label;
  std::size_t x_dof = 0;
  std::size_t y_dof = 1;
};

inline std::vector<double> probe_amplitudes(const Trajectory& window, std::span<const Probe> probes) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& p : probes)
    out.push_back(amplitude(window.displacement(p.x_dof), window.displacement(p.y_dof)));
  return out;
}

/// Solves K x + F(x, 0, 0, t0) = Q(t0) by damped AD Newton from `guess` (zeros when empty).
///
/// A rotor floating inside its bearing clearances has a singular tangent at
/// the start; the Jacobian is then shifted by a small multiple of its largest
/// entry, and steps are halved until the residual decreases.
inline Vector static_equilibrium(const DynamicSystem& sys, double t0, std::span<const double> guess = {},
                                 double tol = 1e-10, int max_iter = 200) {
  const std::size_t n = sys.n_dof();
  Vector x = guess.empty() ? Vector(n, 0.0) : Vector(guess.begin(), guess.end());
  if (x.size() != n) throw DimensionError("static_equilibrium: guess has wrong length");
  const Vector zero(n, 0.0);
  auto f = [&](std::span<const ADScalar> xs) {
    const auto z = lift_constants(zero, xs.front().width());
    return equation_residual<ADScalar>(sys, xs, z, z, t0);
  };
  auto res_norm = [&](const Vector& xv) { return norm2(equation_residual<double>(sys, xv, zero, zero, t0)); };
  const double scale = 1.0 + norm2(sys.external_force(t0));
  double rn = 0.0;
  double dn = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    auto [r, jac] = evaluate_with_jacobian(f, x);
    rn = norm2(r);
    if (rn < tol * scale) return x;
    Vector dx;
    try {
      dx = LuFactorization(jac).solve(r);
    } catch (const SingularMatrixError&) {
      const double shift = 1e-6 * jac.max_abs();
      for (std::size_t i = 0; i < n; ++i) jac(i, i) += shift;
      dx = LuFactorization(jac).solve(r);
    }
    double lambda = 1.0;
    Vector trial(n);
    for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - lambda * dx[i];
      if (res_norm(trial) < rn) break;
    }
    dn = lambda * norm2(dx);
    x = trial;
    if (dn < tol * (sys.length_scale + norm2(x)) && res_norm(x) < 1e-6 * scale) return x;
  }
  throw NonConvergenceError(0, max_iter, dn, rn);
}

enum class Integrator { Newmark, RungeKutta4 };

struct SweepOptions {
  NewmarkConfig newmark;
  Integrator integrator = Integrator::Newmark;
  double t0 = 0.0;
  double t_end = 1.0;
  double steady_fraction = 0.3;
  std::vector<Probe> probes;
  /// Start each speed from the final state of the previous one (runs serially).
  bool continuation = false;
  /// Worker threads; 0 means the hardware count. NNRAD_THREADS caps either.
  unsigned threads = 0;
  /// Initial displacement/velocity per system; empty means zeros.
  std::function<std::pair<Vector, Vector>(const DynamicSystem&)> initial_state;
};

struct SweepRow {
  double speed = 0.0;
  std::vector<double> amplitudes;
  std::string error;  ///< non-empty when this speed failed

  bool ok() const noexcept { return error.empty(); }
};

/// Worker count: the request (or the hardware count), capped by NNRAD_THREADS.
inline unsigned sweep_thread_count(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NNRAD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

inline Trajectory run_integrator(const DynamicSystem& sys, std::span<const double> x0,
                                 std::span<const double> v0, double t0, double t_end,
                                 const NewmarkConfig& cfg, Integrator integrator) {
  if (integrator == Integrator::RungeKutta4) return rk4_integrate(sys, x0, v0, t0, t_end, cfg.dt);
  return integrate(sys, x0, v0, t0, t_end, cfg);
}

/// Integrates the system built for each speed and reports steady-window amplitudes.
/// Rows come back in the order of `speeds`; a failing speed records its error
/// and the sweep continues.
inline std::vector<SweepRow> sweep(const std::function<DynamicSystem(double)>& factory,
                                   std::span<const double> speeds, const SweepOptions& opt) {
  if (speeds.empty()) throw std::invalid_argument("sweep: no speeds given");
  if (opt.probes.empty()) throw std::invalid_argument("sweep: no probes given");

  std::vector<SweepRow> rows(speeds.size());
  std::vector<State> finals(speeds.size());

  auto run_one = [&](std::size_t i, const State* previous) {
    SweepRow& row = rows[i];
    row.speed = speeds[i];
    try {
      const DynamicSystem sys = factory(speeds[i]);
      const std::size_t n = sys.n_dof();
      Vector x0(n, 0.0);
      Vector v0(n, 0.0);
      if (previous != nullptr && previous->dim() == n) {
        x0 = previous->x;
        v0 = previous->v;
      } else if (opt.initial_state) {
        std::tie(x0, v0) = opt.initial_state(sys);
      }
      const Trajectory traj =
          run_integrator(sys, x0, v0, opt.t0, opt.t_end, opt.newmark, opt.integrator);
      row.amplitudes = probe_amplitudes(steady_window(traj, opt.steady_fraction), opt.probes);
      finals[i] = traj.states.back();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  if (opt.continuation) {
    for (std::size_t i = 0; i < speeds.size(); ++i) {
      const State* prev = (i > 0 && rows[i - 1].ok()) ? &finals[i - 1] : nullptr;
      run_one(i, prev);
    }
    return rows;
  }

  const unsigned workers =
      std::min<unsigned>(sweep_thread_count(opt.threads), static_cast<unsigned>(speeds.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < speeds.size(); ++i) run_one(i, nullptr);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < speeds.size(); i = next++) run_one(i, nullptr);
    });
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace nnrad
