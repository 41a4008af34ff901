#include <gtest/gtest.h>

#include "hydrostat/errors.hpp"
#include "hydrostat/hydrostatics.hpp"
#include "support.hpp"

using namespace hydrostat;
using hydrostat::test::pi;

namespace {
constexpr double h = 0.5;
GridPtr grid() { return make_grid(16, 16, 16, h); }
double zero(double, double, double) { return 0.0; }
}  // namespace

TEST(RecoverW, BaroclinicShear) {
  const auto g = grid();
  // v = (sin 2pi x cos(pi z/h), 0): div_H v = 2pi cos 2pi x cos(pi z/h),
  // w = -int_{-h}^z div_H v = -2h cos 2pi x sin(pi z/h).
  const auto v = test::vector2(g, [](double x, double, double z) {
    return std::sin(2 * pi * x) * std::cos(pi * z / h);
  }, zero);
  const auto w_exact = test::scalar(g, [](double x, double, double z) {
    return -2 * h * std::cos(2 * pi * x) * std::sin(pi * z / h);
  });
  const SpectralField w = recover_w(v);
  EXPECT_EQ(w.symmetry(), Symmetry::odd);
  EXPECT_LE(test::max_diff(w, w_exact), 1e-13);

  // dz w + div_H v = 0
  const SpectralField cont = derivative(w, Axis::z) + div_h(v);
  EXPECT_LE(l2_norm(cont) / l2_norm(v), 1e-13);
  const WallTrace wt = w_wall_trace(v, w);
  EXPECT_LE(wt.bottom, 1e-13);
  EXPECT_LE(wt.top, 1e-13);
}

TEST(RecoverW, ZeroForDivergenceFreeFlow) {
  const auto g = grid();
  const auto v = test::vector2(g, zero, [](double x, double, double z) {
    return std::cos(2 * pi * x) * (1.0 + std::cos(2 * pi * z / h));
  });
  EXPECT_LE(max_coefficient(recover_w(v)), 1e-15);
}

TEST(RecoverW, RejectsBarotropicDivergence) {
  const auto g = grid();
  const auto v = test::vector2(g, [](double x, double, double) {
    return std::sin(2 * pi * x);
  }, zero);
  try {
    recover_w(v);
    FAIL() << "expected ConstraintViolation";
  } catch (const ConstraintViolation& e) {
    EXPECT_GT(e.residual(), 0.5);
  }
  EXPECT_THROW(recover_w(SpectralField(g, 1)), ArityError);
}

TEST(Projection, RemovesBarotropicGradientOnly) {
  const auto g = grid();
  const auto grad = test::vector2(g, [](double x, double, double) {
    return std::sin(2 * pi * x);
  }, zero);
  EXPECT_LE(l2_norm(project_barotropic(grad)), 1e-15);

  const auto free = test::vector2(g, zero, [](double x, double, double) {
    return std::cos(2 * pi * x);
  });
  EXPECT_LE(test::max_diff(project_barotropic(free), free), 1e-15);

  const auto baroclinic = test::vector2(g, [](double x, double, double z) {
    return std::sin(2 * pi * x) * std::cos(pi * z / h);
  }, zero);
  EXPECT_LE(test::max_diff(project_barotropic(baroclinic), baroclinic), 1e-15);

  SpectralField mixed = grad + free + baroclinic;
  const SpectralField p = project_barotropic(mixed);
  EXPECT_LE(barotropic_residual(p), 1e-15);
  EXPECT_LE(test::max_diff(p, free + baroclinic), 1e-14);
}

TEST(Poisson, ManufacturedSolution) {
  const auto g = grid();
  Pressure2D rhs(g);
  // p = cos 2pi x cos 4pi y: -Lap p = 20 pi^2 p. Coefficients 1/4 at (+-1, +-2).
  for (int sx : {1, -1})
    for (int sy : {2, -2}) rhs.at((sx + 16) % 16, (sy + 16) % 16) = 20 * pi * pi * 0.25;
  rhs.at(0, 0) = 3.0;  // mean is ignored
  const Pressure2D p = solve_poisson_2d(rhs);
  EXPECT_TRUE(p.zero_mean());
  EXPECT_NEAR(p.at(1, 2).real(), 0.25, 1e-15);
  EXPECT_NEAR(p.at(15, 14).real(), 0.25, 1e-15);
  EXPECT_NEAR(p.l2_norm(), 0.5, 1e-15);
}

TEST(Pressure, ShearFlowHasNoAdvectivePressure) {
  const auto g = grid();
  const double A = 0.7;
  const auto v = test::vector2(g, zero, [A](double x, double, double) {
    return A * std::cos(2 * pi * x);
  });
  const PressureSplit p0 = solve_pressure(v, 0.0);
  EXPECT_LE(p0.total.l2_norm(), 1e-15);

  // With rotation the pressure balances the Coriolis force:
  // grad p = -f0 k x v = (f0 A cos 2pi x, 0), p = f0 A sin(2pi x) / (2 pi).
  const double f0 = 1.3;
  const PressureSplit p1 = solve_pressure(v, f0);
  EXPECT_LE(p1.advective.l2_norm(), 1e-15);
  const SpectralField gp = p1.total.gradient();
  const auto expected = test::vector2(g, [=](double x, double, double) {
    return f0 * A * std::cos(2 * pi * x);
  }, zero);
  EXPECT_LE(test::max_diff(gp, expected), 1e-13);
  EXPECT_NEAR(std::abs(p1.total.at(1, 0)), f0 * A / (4 * pi), 1e-15);
}

TEST(Pressure, SplitSumsToTotal) {
  const auto g = grid();
  const auto v = test::vector2(g, [](double x, double y, double z) {
    return std::sin(2 * pi * x) * std::cos(2 * pi * y) * (1 + std::cos(pi * z / h));
  }, [](double x, double y, double z) {
    return -std::cos(2 * pi * x) * std::sin(2 * pi * y) * (1 + std::cos(pi * z / h));
  });
  const PressureSplit p = solve_pressure(v, 0.8);
  const Pressure2D diff = p.total - (p.advective + p.coriolis);
  EXPECT_LE(diff.l2_norm(), 1e-15);
  EXPECT_GT(p.advective.l2_norm(), 0.0);
}

TEST(VerticalIntegral, RequiresZeroMean) {
  const auto g = grid();
  const auto f = test::scalar(g, [](double, double, double) { return 1.0; }, Symmetry::even);
  EXPECT_THROW(vertical_integral(f), ConstraintViolation);
  const auto c = test::scalar(g, [](double, double, double z) {
    return std::cos(pi * z / h);
  }, Symmetry::even);
  const auto F = vertical_integral(c);
  const auto exact = test::scalar(g, [](double, double, double z) {
    return (h / pi) * std::sin(pi * z / h);
  });
  EXPECT_LE(test::max_diff(F, exact), 1e-15);
  // Non-symmetric input: sin integrates to -(h/pi)(cos(pi z/h) + 1).
  const auto s = test::scalar(g, [](double, double, double z) { return std::sin(pi * z / h); });
  const auto S = test::scalar(g, [](double, double, double z) {
    return -(h / pi) * (std::cos(pi * z / h) + 1.0);
  });
  EXPECT_LE(test::max_diff(vertical_integral(s), S), 1e-14);
}
