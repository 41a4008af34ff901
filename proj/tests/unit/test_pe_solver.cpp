#include <gtest/gtest.h>

#include "hydrostat/pe_solver.hpp"
#include "hydrostat/snapshot.hpp"
#include "support.hpp"

using namespace hydrostat;
using hydrostat::test::pi;

namespace {

constexpr double h = 0.5;

double zero(double, double, double) { return 0.0; }

SpectralField shear(const GridPtr& g, double A) {
  return test::vector2(g, zero, [A](double x, double, double) { return A * std::cos(2 * pi * x); });
}

SpectralField rotating_mode(const GridPtr& g, double A, double t, double f0) {
  const double decay = A * std::exp(-(pi / h) * (pi / h) * t);
  return test::vector2(
      g, [=](double, double, double z) { return decay * std::cos(f0 * t) * std::cos(pi * z / h); },
      [=](double, double, double z) { return -decay * std::sin(f0 * t) * std::cos(pi * z / h); });
}

/// Smooth nonlinear data with a divergent baroclinic part (so w != 0).
SpectralField vortex_flow(const GridPtr& g, double A) {
  return test::vector2(
      g,
      [A](double x, double y, double z) {
        return A * (std::sin(2 * pi * x) * std::cos(2 * pi * y) * (1 + std::cos(pi * z / h)) +
                    0.5 * std::cos(2 * pi * x) * std::cos(pi * z / h));
      },
      [A](double x, double y, double z) {
        return A * (-std::cos(2 * pi * x) * std::sin(2 * pi * y) * (1 + std::cos(pi * z / h)) +
                    0.3 * std::sin(2 * pi * y) * std::cos(2 * pi * z / h));
      });
}

GridPtr grid16() { return make_grid(16, 16, 16, h); }

}  // namespace

TEST(Rhs, ZeroAndShearFlowsAreSteadyWithoutForcing) {
  const auto g = grid16();
  const PhysicsParams p{0.0, h};
  EXPECT_EQ(max_coefficient(rhs_nonlinear(SpectralField(g, 2, Symmetry::even), p)), 0.0);
  EXPECT_LE(max_coefficient(rhs_nonlinear(shear(g, 0.8), p)), 1e-14);
}

TEST(Rhs, ConstantFlowFeelsOnlyRotation) {
  const auto g = grid16();
  const double c1 = 0.4, c2 = -1.1;
  const auto v = test::vector2(g, [=](double, double, double) { return c1; },
                               [=](double, double, double) { return c2; });
  const SpectralField n = rhs_nonlinear(v, PhysicsParams{1.0, h});
  EXPECT_NEAR(n.at(0, 0, 0, 0).real(), c2, 1e-15);
  EXPECT_NEAR(n.at(1, 0, 0, 0).real(), -c1, 1e-15);
  EXPECT_LE(std::abs(l2_norm(n) - std::sqrt(2 * h * (c1 * c1 + c2 * c2))), 1e-14);
}

TEST(Step, ExactHeatDecayOfShear) {
  const auto g = grid16();
  const double A = 0.9, dt = 1e-3;
  const SolverState s = make_state(shear(g, A), PhysicsParams{0.0, h});
  const SolverState s1 = step(s, StepControl{dt, 0.5});
  EXPECT_DOUBLE_EQ(s1.t, dt);
  const SpectralField exact = std::exp(-4 * pi * pi * dt) * shear(g, A);
  EXPECT_LE(test::rel_l2(s1.v, exact), 1e-9);
  EXPECT_EQ(s1.v.symmetry(), Symmetry::even);
}

TEST(Step, ZeroStaysZero) {
  const auto g = grid16();
  const SolverState s = make_state(SpectralField(g, 2, Symmetry::even), PhysicsParams{1.0, h});
  EXPECT_EQ(max_coefficient(step(s, StepControl{1e-3, 0.5}).v), 0.0);
}

TEST(Step, RotationDecayOverHundredSteps) {
  const auto g = grid16();
  const double A = 1.0, f0 = 1.0, dt = 1e-3;
  SolverState s = make_state(rotating_mode(g, A, 0.0, f0), PhysicsParams{f0, h});
  for (int n = 0; n < 100; ++n) s = step(s, StepControl{dt, 0.5});
  EXPECT_LE(test::rel_l2(s.v, rotating_mode(g, A, s.t, f0)), 1e-8);
}

TEST(Step, ThirdOrderInTime) {
  const auto g = make_grid(8, 8, 16, h);
  const double f0 = 20.0, t_end = 0.2;
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) {
    const SolverState s0 = make_state(rotating_mode(g, 1.0, 0.0, f0), PhysicsParams{f0, h});
    const Trajectory tr = integrate(s0, StepControl{dt, 0.5}, t_end);
    err.push_back(test::rel_l2(tr.final.v, rotating_mode(g, 1.0, t_end, f0)));
  }
  EXPECT_GT(err[0] / err[1], 7.0);
  EXPECT_GT(err[1] / err[2], 7.0);
  EXPECT_LT(err[0] / err[1], 9.0);
}

TEST(Step, NonlinearInvariants) {
  const auto g = grid16();
  SolverState s = make_state(vortex_flow(g, 1.0), PhysicsParams{0.5, h});
  ASSERT_GT(max_coefficient(recover_w(s.v)), 1e-3);
  double prev = l2_norm(s.v);
  for (int n = 0; n < 20; ++n) {
    s = step(s, StepControl{1e-3, 0.5});
    EXPECT_EQ(s.v.symmetry(), Symmetry::even);
    EXPECT_LE(barotropic_residual(s.v), 1e-10);
    EXPECT_EQ(s.v.data().size(), dealias(s.v).data().size());
    EXPECT_LE(max_coefficient(s.v - dealias(s.v)), 0.0);
    const double now = l2_norm(s.v);
    EXPECT_LE(now, prev * (1 + 1e-12));
    prev = now;
    const SpectralField w = recover_w(s.v);
    const SpectralField cont = derivative(w, Axis::z) + div_h(s.v);
    EXPECT_LE(l2_norm(cont) / l2_norm(s.v), 1e-12);
  }
}

TEST(Step, IsDeterministic) {
  const auto g = grid16();
  const SolverState s = make_state(vortex_flow(g, 1.0), PhysicsParams{0.5, h});
  const SolverState a = step(s, StepControl{1e-3, 0.5});
  const SolverState b = step(s, StepControl{1e-3, 0.5});
  for (std::size_t n = 0; n < a.v.data().size(); ++n) ASSERT_EQ(a.v.data()[n], b.v.data()[n]);
}

TEST(EnergyLaw, ExactForPureDecay) {
  const auto g = grid16();
  const double A = 0.7;
  const SolverState s0 = make_state(shear(g, A), PhysicsParams{0.0, h});
  const Trajectory tr = integrate(s0, StepControl{1e-3, 0.5}, 0.1);
  // 1/2 |v|^2 = 1/2 A^2 h e^{-8 pi^2 t}
  const double expected = 0.5 * A * A * h * std::exp(-8 * pi * pi * 0.1);
  const double got = 0.5 * tr.series.back().l2 * tr.series.back().l2;
  EXPECT_NEAR(got / expected, 1.0, 1e-7);
  for (const auto& r : tr.series.records) EXPECT_LE(std::abs(r.energy_residual), 1e-13);
}

TEST(EnergyLaw, ResidualConvergesAtThirdOrder) {
  const auto g = grid16();
  std::vector<double> cumulative, per_step;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const SolverState s0 = make_state(vortex_flow(g, 2.0), PhysicsParams{1.0, h});
    const Trajectory tr = integrate(s0, StepControl{dt, 0.5}, 0.02);
    double m = 0.0, ms = 0.0;
    for (const auto& r : tr.series.records) {
      m = std::max(m, std::abs(r.energy_residual));
      ms = std::max(ms, std::abs(r.step_energy_residual));
    }
    cumulative.push_back(m);
    per_step.push_back(ms);
  }
  EXPECT_GT(cumulative[0] / cumulative[1], 6.0);
  EXPECT_GT(cumulative[1] / cumulative[2], 6.0);
  EXPECT_GT(per_step[1] / per_step[2], 10.0);
}

TEST(Integrate, BookkeepingAndSnapshots) {
  const auto g = grid16();
  const SolverState s0 = make_state(vortex_flow(g, 0.5), PhysicsParams{0.0, h});
  const Trajectory same = integrate(s0, StepControl{1e-3, 0.5}, 0.0);
  EXPECT_EQ(same.steps, 0u);
  EXPECT_EQ(same.series.size(), 1u);
  EXPECT_LE(max_coefficient(same.final.v - s0.v), 0.0);

  const auto dir = std::filesystem::temp_directory_path() / "hydrostat_integrate";
  std::filesystem::create_directories(dir);
  std::size_t hooks = 0;
  IntegrateOptions opts;
  opts.snapshot_times = {0.0, 0.0035};
  opts.snapshot_dir = dir;
  opts.on_step = [&](const SolverState&, const StepInfo&) { ++hooks; };
  const Trajectory tr = integrate(s0, StepControl{1e-3, 0.5}, 0.0045, opts);
  EXPECT_EQ(hooks, 5u);  // ceil(0.0045 / 1e-3)
  EXPECT_EQ(step_count(0.0, 0.0045, 1e-3), 5u);
  EXPECT_EQ(step_count(0.0, 0.1, 5e-4), 200u);
  EXPECT_DOUBLE_EQ(tr.final.t, 0.0045);
  ASSERT_EQ(tr.snapshots.size(), 2u);
  const SpectralField back = load_spectral(tr.snapshots[0]);
  EXPECT_LE(test::max_diff(back, s0.v), 1e-14);
  std::filesystem::remove_all(dir);
}

TEST(Integrate, BlowUpKeepsLastGoodState) {
  const auto g = make_grid(8, 8, 8, h);
  const SolverState s0 = make_state(vortex_flow(g, 300.0), PhysicsParams{0.0, h});
  try {
    integrate(s0, StepControl{0.05, 0.5}, 50.0);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_FALSE(e.partial.empty());
    for (const Complex& c : e.last_good().v.data()) ASSERT_TRUE(std::isfinite(std::abs(c)));
  }
}

TEST(StepLinear, SchedulingMismatchIsRejected) {
  const auto g = grid16();
  const SolverState s0 = make_state(vortex_flow(g, 1.0), PhysicsParams{0.0, h});
  StepInfo info;
  step(s0, StepControl{1e-3, 0.5}, &info);
  EXPECT_THROW(step_linear(s0.v, 0.5, info.drivers, StepControl{1e-3, 0.5}, s0.params),
               SchedulingError);
  EXPECT_THROW(step_linear(s0.v, 0.0, info.drivers, StepControl{2e-3, 0.5}, s0.params),
               SchedulingError);
}

TEST(EnergyLaw, DissipationQuadratureMatchesDirectIntegration) {
  // One mode whose integrating-factor energy g(s) = |c(s)|^2 e^{2 k^2 s} is
  // exactly quadratic; compare with a fine Simpson rule of k^2 |c|^2.
  const auto g = make_grid(8, 8, 8, h);
  for (double dt : {1e-4, 1e-2, 0.3}) {
    const int i = 1, j = 2, l = 1;
    const double k2 = g->k_squared()[g->spec_index(i, j, l)];
    const Complex c0(0.6, -0.2);
    const Complex rhs(0.3, 0.9);
    const double g0 = std::norm(c0);
    const double gd = 2.0 * (std::conj(c0) * rhs).real();
    const double q = 0.37;
    auto gfun = [&](double s) { return g0 + gd * s + q * (s / dt) * (s / dt); };
    const double g1 = gfun(dt);
    SpectralField v0(g, 1), v1(g, 1), n0(g, 1);
    v0.at(0, i, j, l) = c0;
    n0.at(0, i, j, l) = rhs;
    v1.at(0, i, j, l) = std::sqrt(g1 * std::exp(-2 * k2 * dt));
    const int m = 20000;
    double simpson = 0.0;
    for (int n = 0; n <= m; ++n) {
      const double s = dt * n / m;
      const double w = (n == 0 || n == m) ? 1 : (n % 2 ? 4 : 2);
      simpson += w * k2 * gfun(s) * std::exp(-2 * k2 * s);
    }
    simpson *= dt / m / 3;
    // multiplicity 2 for an interior z mode, volume 2h
    const double expected = 2 * 2 * h * simpson;
    EXPECT_NEAR(step_dissipation(v0, v1, n0, dt) / expected, 1.0, 1e-10) << dt;
  }
}
