#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nnrad/models/oscillators.hpp"
#include "nnrad/models/sfd.hpp"
#include "nnrad/newmark.hpp"
#include "nnrad/rk4.hpp"
#include "support.hpp"

using namespace nnrad;

TEST(FirstOrderField, PendulumAtRest) {
  const FirstOrderField f = to_first_order(models::pendulum());
  const Vector dy = f(0.0, Vector{2.0, 0.0});
  EXPECT_EQ(dy[0], 0.0);
  EXPECT_DOUBLE_EQ(dy[1], -std::sin(2.0));
}

TEST(FirstOrderField, DuffingAtRest) {
  models::DuffingParams p;
  p.amplitude = 0.0;
  const FirstOrderField f = to_first_order(models::duffing(p));
  const Vector dy = f(0.0, Vector{2.0, 0.0});
  EXPECT_EQ(dy[0], 0.0);
  EXPECT_DOUBLE_EQ(dy[1], -2.0 - 3.0 * 8.0);
}

TEST(FirstOrderField, MultiDofMatchesDenseSolve) {
  const DynamicSystem sys = models::sfd_rotor_system(models::SfdRotorParams{});
  const FirstOrderField f = to_first_order(sys);
  testing_support::Gen g(3);
  Vector y(8);
  for (std::size_t i = 0; i < 4; ++i) y[i] = g.uniform(-5e-5, 5e-5);
  for (std::size_t i = 4; i < 8; ++i) y[i] = g.uniform(-1e-2, 1e-2);
  const double t = 0.013;
  const Vector dy = f(t, y);
  const std::span<const double> x(y.data(), 4);
  const std::span<const double> v(y.data() + 4, 4);
  // M a = Q − C v − K x − F, with M diagonal here.
  const Vector r = equation_residual<double>(sys, x, v, Vector(4, 0.0), t);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(dy[i], v[i]);
    EXPECT_NEAR(dy[4 + i], -r[i] / sys.mass(i, i), 1e-9 * (1.0 + std::abs(dy[4 + i])));
  }
}

TEST(FirstOrderField, RejectsAccelerationDependentForce) {
  DynamicSystem sys = models::linear_sdof();
  sys.nonlinear = make_nonlinear_force(
      [](auto x, auto, auto a, double) {
        using T = std::remove_cv_t<typename decltype(x)::element_type>;
        return std::vector<T>{0.1 * a[0]};
      },
      true);
  EXPECT_THROW(to_first_order(sys), std::invalid_argument);
}

TEST(Rk4Solve, ExponentialGrowth) {
  const auto sol = rk4_solve([](double, std::span<const double> y) { return Vector{y[0]}; }, Vector{1.0},
                             0.0, 1.0, 1e-3);
  EXPECT_EQ(sol.t.size(), 1001u);
  EXPECT_NEAR(sol.y.back()[0], std::numbers::e, 1e-11);
}

TEST(Rk4Solve, ZeroFieldKeepsState) {
  const auto sol = rk4_solve([](double, std::span<const double> y) { return Vector(y.size(), 0.0); },
                             Vector{1.5, -2.0}, 0.0, 3.0, 0.1);
  for (const auto& y : sol.y) EXPECT_EQ(y, (Vector{1.5, -2.0}));
}

TEST(Rk4Solve, FourthOrderConvergence) {
  // ẋ = v, v̇ = −x from (1, 0): x(t) = cos t
  auto f = [](double, std::span<const double> y) { return Vector{y[1], -y[0]}; };
  std::vector<double> hs{1e-1, 5e-2, 2.5e-2};
  std::vector<double> errs;
  for (double h : hs) {
    const auto sol = rk4_solve(f, Vector{1.0, 0.0}, 0.0, 1.0, h);
    errs.push_back(std::abs(sol.y.back()[0] - std::cos(1.0)));
  }
  const double order = testing_support::convergence_order(hs, errs);
  EXPECT_GE(order, 3.8);
  EXPECT_LE(order, 4.2);
}

TEST(Rk4Integrate, BlowUpIsDivergenceError) {
  // v̇ = v² from v(0)=1 escapes at t = 1.
  FirstOrderField f;
  f.n_dof = 1;
  f.eval = [](double, std::span<const double> y) { return Vector{y[1], y[1] * y[1]}; };
  EXPECT_THROW(rk4_integrate(f, Vector{0.0, 1.0}, 0.0, 5.0, 1e-2), DivergenceError);
}

TEST(Rk4Integrate, PendulumEnergyIsConserved) {
  const Trajectory traj = rk4_integrate(models::pendulum(), Vector{2.0}, Vector{0.0}, 0.0, 100.0, 1e-3);
  auto energy = [](const State& s) { return 0.5 * s.v[0] * s.v[0] - std::cos(s.x[0]); };
  const double e0 = energy(traj.states.front());
  double drift = 0.0;
  for (const auto& s : traj.states) drift = std::max(drift, std::abs(energy(s) - e0));
  EXPECT_LT(drift, 1e-6);
}

TEST(Rk4Integrate, GridMatchesNewmark) {
  const DynamicSystem sys = models::van_der_pol(1.0);
  NewmarkConfig cfg;
  cfg.dt = 1e-2;
  const Trajectory a = rk4_integrate(sys, Vector{2.0}, Vector{0.0}, 0.5, 3.0, cfg.dt);
  const Trajectory b = integrate(sys, Vector{2.0}, Vector{0.0}, 0.5, 3.0, cfg);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.dt, b.dt);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.states[k].t, b.states[k].t);
    EXPECT_EQ(a.states[k].dim(), b.states[k].dim());
  }
  EXPECT_TRUE(a.stats.empty());
}

TEST(Rk4Integrate, StoredAccelerationMatchesField) {
  const Trajectory traj = rk4_integrate(models::pendulum(), Vector{1.0}, Vector{0.0}, 0.0, 1.0, 1e-2);
  for (const auto& s : traj.states) EXPECT_DOUBLE_EQ(s.a[0], -std::sin(s.x[0]));
}

TEST(Rk4Integrate, WrongInitialLength) {
  const FirstOrderField f = to_first_order(models::pendulum());
  EXPECT_THROW(rk4_integrate(f, Vector{1.0}, 0.0, 1.0, 0.1), DimensionError);
  EXPECT_THROW(rk4_integrate(f, Vector{1.0, 0.0}, 0.0, 1.0, 0.0), std::invalid_argument);
}
