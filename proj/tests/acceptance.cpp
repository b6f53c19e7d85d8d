// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nnrad/io/config.hpp"
#include "nnrad/nnrad.hpp"
#include "support.hpp"

using namespace nnrad;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

NewmarkConfig newmark(double dt, IterationStrategy s = IterationStrategy::FullNewton) {
  NewmarkConfig c;
  c.dt = dt;
  c.strategy = s;
  return c;
}

models::RotorLayout shipped_rotor() {
  return io::parse_dual_rotor(io::detail::load_json(std::string(NNRAD_DATA_DIR) + "/dual_rotor.json")).layout;
}

// 1 -------------------------------------------------------------------------
Outcome ad_exactness() {
  struct Entry {
    DynamicSystem sys;
    double dt;
  };
  std::vector<Entry> systems{{models::duffing(), 1e-3},
                             {models::van_der_pol(1.0), 1e-3},
                             {models::pendulum(), 1e-3},
                             {models::linear_sdof(1.0, 0.1, 4.0), 1e-3},
                             {models::sfd_rotor_system(models::SfdRotorParams{}), 1e-4},
                             {models::assemble_dual_rotor(shipped_rotor()), 1e-4}};
  double worst_fd = 0.0;
  std::string worst_name;
  for (const auto& e : systems) {
    const JacobianCheckReport rep = check_residual_jacobian(e.sys, newmark(e.dt), 100, 1);
    if (rep.max_error >= worst_fd) {
      worst_fd = rep.max_error;
      worst_name = e.sys.name;
    }
  }
  // Duffing against the hand-derived step Jacobian.
  const DynamicSystem duff = models::duffing();
  const NewmarkConfig cfg = newmark(1e-3);
  std::mt19937_64 rng(1);
  double worst_analytic = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ResidualSample s = random_residual_sample(duff, cfg, rng);
    const double x = s.x1[0];
    const Matrix exact{{1.0 / (cfg.beta * cfg.dt * cfg.dt) + 1.0 * cfg.gamma / (cfg.beta * cfg.dt) + 1.0 +
                        3.0 * 3.0 * x * x}};
    const Matrix ad = residual_and_jacobian(s.x1, s.previous, s.t1, duff, cfg).jacobian;
    worst_analytic = std::max(worst_analytic, jacobian_relative_error(ad, exact));
  }
  return {worst_fd < 1e-6 && worst_analytic < 1e-12,
          fmt("FD max rel err %.2e (%s, 6 systems x 100 states) < 1e-6; Duffing analytic %.2e < 1e-12", worst_fd,
              worst_name.c_str(), worst_analytic)};
}

// 2 -------------------------------------------------------------------------
Outcome method_order() {
  const DynamicSystem sys = models::linear_sdof();
  const std::vector<double> hs{1e-2, 5e-3, 2.5e-3};
  std::vector<double> nm, rk;
  for (double h : hs) {
    nm.push_back(std::abs(integrate(sys, Vector{1.0}, Vector{0.0}, 0.0, 10.0, newmark(h)).states.back().x[0] -
                          std::cos(10.0)));
  }
  const std::vector<double> hr{1e-1, 5e-2, 2.5e-2};
  for (double h : hr)
    rk.push_back(std::abs(rk4_integrate(sys, Vector{1.0}, Vector{0.0}, 0.0, 10.0, h).states.back().x[0] -
                          std::cos(10.0)));
  const double p_nm = testing_support::convergence_order(hs, nm);
  const double p_rk = testing_support::convergence_order(hr, rk);
  return {p_nm >= 1.8 && p_nm <= 2.2 && p_rk >= 3.8 && p_rk <= 4.2,
          fmt("Newmark order %.3f in [1.8, 2.2]; RK4 order %.3f in [3.8, 4.2]", p_nm, p_rk)};
}

// 3 -------------------------------------------------------------------------
Outcome oscillator_agreement() {
  std::vector<DynamicSystem> systems{models::van_der_pol(1.0), models::duffing(), models::pendulum()};
  std::string detail;
  bool pass = true;
  for (const auto& sys : systems) {
    const Trajectory a = integrate(sys, Vector{2.0}, Vector{0.0}, 0.0, 20.0, newmark(1e-3));
    const Trajectory b = rk4_integrate(sys, Vector{2.0}, Vector{0.0}, 0.0, 20.0, 1e-3);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a.states[k].x[0] - b.states[k].x[0]));
    pass = pass && worst < 1e-3;
    detail += fmt("%s %.2e; ", sys.name.c_str(), worst);
  }
  return {pass, "max |x_NNR - x_RK4| on [0, 20]: " + detail + "all < 1e-3"};
}

// 4 -------------------------------------------------------------------------
Outcome pendulum_energy() {
  const Trajectory t = integrate(models::pendulum(), Vector{2.0}, Vector{0.0}, 0.0, 100.0, newmark(1e-3));
  auto energy = [](const State& s) { return 0.5 * s.v[0] * s.v[0] - std::cos(s.x[0]); };
  const double e0 = energy(t.states.front());
  double drift = 0.0;
  for (const auto& s : t.states) drift = std::max(drift, std::abs(energy(s) - e0));
  return {drift < 1e-3, fmt("max |E(t) - E(0)| on [0, 100] = %.2e < 1e-3", drift)};
}

// 5 -------------------------------------------------------------------------
Outcome quadrature() {
  const QuadratureRule& r = gauss_legendre_15();
  auto moment = [&](int p) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
    return s;
  };
  double worst_exact = 0.0;
  for (int p = 0; p <= 29; ++p) worst_exact = std::max(worst_exact, std::abs(moment(p) - (p % 2 ? 0.0 : 2.0 / (p + 1))));
  const double miss30 = std::abs(moment(30) - 2.0 / 31.0);

  const int lm[3][2] = {{1, 1}, {0, 2}, {2, 0}};
  double worst_som = 0.0;
  for (double th : {0.0, std::numbers::pi / 2.0, 1.0, 3.0, -2.0})
    for (int ri = 0; ri <= 9; ++ri)
      for (const auto& p : lm) {
        const double rr = 0.1 * ri;
        const double ref = testing_support::adaptive_simpson(
            [&](double x) {
              return std::pow(std::sin(x), p[0]) * std::pow(std::cos(x), p[1]) / std::pow(1.0 + rr * std::cos(x), 3);
            },
            th, th + std::numbers::pi, 1e-13);
        const double got = models::sommerfeld_integral(p[0], p[1], rr, th);
        worst_som = std::max(worst_som, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
      }
  return {worst_exact < 1e-12 && miss30 > 1e-12 && worst_som < 1e-8,
          fmt("degree <= 29 max err %.1e < 1e-12; degree 30 err %.1e (not exact); Sommerfeld vs adaptive %.1e < 1e-8",
              worst_exact, miss30, worst_som)};
}

// 6 -------------------------------------------------------------------------
Outcome sfd_trend() {
  const io::RunConfig c = io::load_run_config(std::string(NNRAD_CONFIG_DIR) + "/sfd_sweep.json");
  SweepOptions opt;
  opt.newmark = c.newmark;
  opt.t0 = c.t0;
  opt.t_end = c.t_end;
  opt.steady_fraction = c.sweep->steady_fraction;
  opt.probes = c.sweep->probes;
  const auto rows = sweep([&](double w) { return c.system->build_at_speed(w); }, c.sweep->speeds, opt);
  std::vector<double> a;
  for (const auto& r : rows) {
    if (!r.ok()) return {false, fmt("speed %.0f failed: %s", r.speed, r.error.c_str())};
    a.push_back(r.amplitudes[0]);
  }
  bool decreasing = true;
  bool smooth = true;
  for (std::size_t i = 1; i < a.size(); ++i) decreasing = decreasing && a[i] < a[i - 1];
  // No kinks: each decrement is at most twice its predecessor.
  double worst_ratio = 0.0;
  for (std::size_t i = 2; i < a.size(); ++i) {
    const double ratio = (a[i - 1] - a[i]) / (a[i - 2] - a[i - 1]);
    worst_ratio = std::max(worst_ratio, ratio);
    smooth = smooth && ratio <= 2.0;
  }
  return {decreasing && smooth,
          fmt("%zu speeds %.0f..%.0f rad/s: amplitude %.4e -> %.4e, strictly decreasing=%s, max decrement ratio %.2f <= 2",
              a.size(), rows.front().speed, rows.back().speed, a.front(), a.back(), decreasing ? "yes" : "no",
              worst_ratio)};
}

// 7 -------------------------------------------------------------------------
Outcome dual_rotor_agreement() {
  const models::RotorLayout layout = shipped_rotor();
  const DynamicSystem sys = models::assemble_dual_rotor(layout);
  const double dt = 1e-4;
  const Vector x0 = static_equilibrium(sys, 0.0);
  const Vector v0(sys.n_dof(), 0.0);
  const Trajectory a = steady_window(integrate(sys, x0, v0, 0.0, 1.5, newmark(dt)), 0.3);
  const Trajectory b = steady_window(rk4_integrate(sys, x0, v0, 0.0, 1.5, dt), 0.3);
  double worst = 0.0;
  int worst_node = 0;
  bool same_bins = true;
  for (const auto& node : layout.nodes) {
    const std::size_t ix = layout.dof(node.id, 0), iy = layout.dof(node.id, 1);
    const double an = amplitude(a.displacement(ix), a.displacement(iy));
    const double bn = amplitude(b.displacement(ix), b.displacement(iy));
    const double rel = std::abs(an - bn) / bn;
    if (rel > worst) {
      worst = rel;
      worst_node = node.id;
    }
    for (std::size_t d : {ix, iy})
      same_bins = same_bins && spectrum(a.displacement(d), dt).peak_bin() == spectrum(b.displacement(d), dt).peak_bin();
  }
  return {worst < 0.01 && same_bins,
          fmt("40 DOF, dt=1e-4, t in [0, 1.5], window 0.3: worst node amplitude diff %.3f%% (node %d) < 1%%; "
              "dominant bins identical on all 20 x/y DOFs=%s",
              100.0 * worst, worst_node, same_bins ? "yes" : "no")};
}

// 8 -------------------------------------------------------------------------
Outcome strategy_equivalence() {
  struct Entry {
    DynamicSystem sys;
    Vector x0;
    double dt;
  };
  std::vector<Entry> systems{{models::duffing(), Vector{2.0}, 1e-3},
                             {models::sfd_rotor_system(models::SfdRotorParams{}), Vector(4, 0.0), 1e-4}};
  bool pass = true;
  std::string detail;
  for (const auto& e : systems) {
    const Vector v0(e.x0.size(), 0.0);
    const Trajectory full = integrate(e.sys, e.x0, v0, 0.0, 10.0, newmark(e.dt));
    const Trajectory simp =
        integrate(e.sys, e.x0, v0, 0.0, 10.0, newmark(e.dt, IterationStrategy::SimplifiedNewton));
    const Trajectory broy = integrate(e.sys, e.x0, v0, 0.0, 10.0, newmark(e.dt, IterationStrategy::BroydenRank1));
    double dmax = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k)
      for (std::size_t i = 0; i < e.x0.size(); ++i)
        dmax = std::max({dmax, std::abs(full.states[k].x[i] - simp.states[k].x[i]),
                         std::abs(full.states[k].x[i] - broy.states[k].x[i])});
    std::size_t fewer = 0;
    double it_full = 0.0, it_simp = 0.0;
    for (std::size_t k = 0; k < full.stats.size(); ++k) {
      if (simp.stats[k].iterations < full.stats[k].iterations) ++fewer;
      it_full += full.stats[k].iterations;
      it_simp += simp.stats[k].iterations;
    }
    pass = pass && dmax < 1e-6 && fewer == 0;
    detail += fmt("%s: max |dx| %.2e, mean iters full %.2f simplified %.2f, steps with simplified < full: %zu; ",
                  e.sys.name.c_str(), dmax, it_full / full.stats.size(), it_simp / simp.stats.size(), fewer);
  }
  return {pass, detail + "need |dx| < 1e-6 and no step where simplified < full"};
}

// 9 -------------------------------------------------------------------------
Outcome element_matrices() {
  double worst_null = 0.0;
  bool all_pd = true;
  int grid = 0;
  for (double l : {0.05, 0.1, 0.2, 0.4, 0.8, 1.5})
    for (double d : {0.01, 0.03, 0.06, 0.1})
      for (double kappa : {0.5, 0.75, 0.886, 1.0}) {
        models::ShaftElementProps p;
        p.length = l;
        p.area = std::numbers::pi * d * d / 4.0;
        p.i_z = std::numbers::pi * std::pow(d, 4) / 64.0;
        p.shear_factor = kappa;
        const auto m = models::shaft_element_matrices(p);
        const double scale = m.stiffness.max_abs();
        for (const Vector& mode : {Vector{1.0, 0.0, 1.0, 0.0}, Vector{0.0, 1.0, l, 1.0}})
          worst_null = std::max(worst_null, norm_inf(matvec(m.stiffness, mode)) / scale);
        all_pd = all_pd && testing_support::cholesky_positive_definite(m.mass);
        ++grid;
      }
  return {worst_null < 1e-9 && all_pd,
          fmt("rigid-body residual max %.1e x ||K_s|| < 1e-9; M_s positive definite on %d-point grid=%s", worst_null,
              grid, all_pd ? "yes" : "no")};
}

// 10 ------------------------------------------------------------------------
Outcome contact_smoothness() {
  models::BearingParams p;
  p.n_balls = 1;
  p.k_hertz = 5e7;
  p.clearance = 2e-6;
  p.r_inner = 0.02;
  p.r_outer = 0.03;
  const double h = 1e-9;
  const double n = models::kHertzExponent;
  const double kink = n * std::pow(h, n - 1.0);
  double worst_f = 0.0, worst_df = 0.0;
  double prev_f = 0.0, prev_df = 0.0;
  for (int i = -200; i <= 200; ++i) {
    const ADScalar x = ADScalar::variable(p.clearance + i * h, 1, 0);
    const ADScalar zero = constant_like(x, 0.0);
    const auto f = models::bearing_force(x, zero, zero, zero, 0.0, p);
    const double fv = f[0].value() / p.k_hertz;
    const double dfv = f[0].seed(0) / p.k_hertz;
    if (i > -200) {
      worst_f = std::max(worst_f, std::abs(fv - prev_f));
      worst_df = std::max(worst_df, std::abs(dfv - prev_df));
    }
    prev_f = fv;
    prev_df = dfv;
  }
  return {worst_f <= 1e-6 && worst_df <= kink * (1.0 + 1e-12),
          fmt("delta swept through 0 in 1e-9 steps (force per unit K_b): max force jump %.2e <= 1e-6; "
              "max derivative jump %.4e <= kink bound n*h^(n-1) = %.4e",
              worst_f, worst_df, kink)};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, ad_exactness},        {2, method_order},         {3, oscillator_agreement}, {4, pendulum_energy},
      {5, quadrature},          {6, sfd_trend},            {7, dual_rotor_agreement}, {8, strategy_equivalence},
      {9, element_matrices},    {10, contact_smoothness}};
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
