#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "hydrostat/errors.hpp"
#include "hydrostat/kernels.hpp"
#include "hydrostat/snapshot.hpp"
#include "support.hpp"

using namespace hydrostat;
using hydrostat::test::pi;

namespace {

GridPtr grid16(double h = 0.5) { return make_grid(16, 16, 16, h); }

PhysicalField random_lattice(const GridPtr& g, int ncomp, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhysicalField f(g, ncomp);
  for (double& x : f.data()) x = u(rng);
  return f;
}

}  // namespace

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(make_grid(7, 16, 16, 0.5), ConfigError);
  EXPECT_THROW(make_grid(16, 16, 4, 0.5), ConfigError);
  EXPECT_THROW(make_grid(16, 16, 16, 0.0), ConfigError);
  EXPECT_THROW(make_grid(16, 16, 16, -1.0), ConfigError);
}

TEST(Grid, LatticeAndWavenumbers) {
  const auto g = make_grid(8, 8, 16, 0.75);
  EXPECT_DOUBLE_EQ(g->z(0), -0.75);
  EXPECT_DOUBLE_EQ(g->z(8), 0.0);
  EXPECT_DOUBLE_EQ(g->kx()[1], 2 * pi);
  EXPECT_DOUBLE_EQ(g->kx()[7], -2 * pi);
  EXPECT_DOUBLE_EQ(g->kx()[4], 0.0);  // Nyquist
  EXPECT_DOUBLE_EQ(g->kz()[1], pi / 0.75);
  EXPECT_DOUBLE_EQ(g->kz()[8], 0.0);
}

TEST(Transform, CosineHasHalfAmplitudeModes) {
  const auto g = grid16();
  const SpectralField f = test::scalar(g, [](double x, double, double) {
    return std::cos(2 * pi * x);
  });
  EXPECT_NEAR(f.at(0, 1, 0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(f.at(0, 15, 0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(f.at(0, 0, 0, 0)), 0.0, 1e-15);
}

TEST(Transform, VerticalPhaseRefersToMidPlane) {
  const double h = 0.5;
  const auto g = grid16(h);
  // cos(pi z / h) = (e^{i kz z} + e^{-i kz z}) / 2 with z from the mid-plane.
  const SpectralField c = test::scalar(g, [h](double, double, double z) {
    return std::cos(pi * z / h);
  });
  EXPECT_NEAR(c.at(0, 0, 0, 1).real(), 0.5, 1e-14);
  EXPECT_NEAR(c.at(0, 0, 0, 1).imag(), 0.0, 1e-14);
  // sin(pi z / h) -> coefficient -i/2 at l = 1.
  const SpectralField s = test::scalar(g, [h](double, double, double z) {
    return std::sin(pi * z / h);
  });
  EXPECT_NEAR(s.at(0, 0, 0, 1).real(), 0.0, 1e-14);
  EXPECT_NEAR(s.at(0, 0, 0, 1).imag(), -0.5, 1e-14);
}

TEST(Transform, RoundTrip) {
  const auto g = make_grid(16, 8, 32, 0.5);
  const PhysicalField f = random_lattice(g, 2, 7);
  const PhysicalField back = to_physical(to_spectral(f));
  double err = 0.0;
  for (std::size_t n = 0; n < f.data().size(); ++n) {
    err = std::max(err, std::abs(f.data()[n] - back.data()[n]));
  }
  EXPECT_LE(err, 1e-13);
}

TEST(Transform, RejectsNonFinite) {
  const auto g = grid16();
  PhysicalField f(g, 1);
  f.at(0, 1, 2, 3) = std::nan("");
  EXPECT_THROW(to_spectral(f), DataError);
}

TEST(SpectralOps, DerivativesOfTrigonometricProducts) {
  const double h = 0.5;
  const auto g = grid16(h);
  const auto f = test::scalar(g, [h](double x, double y, double z) {
    return std::sin(2 * pi * x) * std::cos(4 * pi * y) * std::cos(pi * z / h);
  }, Symmetry::even);
  const auto fx = test::scalar(g, [h](double x, double y, double z) {
    return 2 * pi * std::cos(2 * pi * x) * std::cos(4 * pi * y) * std::cos(pi * z / h);
  });
  const auto fy = test::scalar(g, [h](double x, double y, double z) {
    return -4 * pi * std::sin(2 * pi * x) * std::sin(4 * pi * y) * std::cos(pi * z / h);
  });
  const auto fz = test::scalar(g, [h](double x, double y, double z) {
    return -(pi / h) * std::sin(2 * pi * x) * std::cos(4 * pi * y) * std::sin(pi * z / h);
  });
  EXPECT_LE(test::max_diff(derivative(f, Axis::x), fx), 1e-12);
  EXPECT_LE(test::max_diff(derivative(f, Axis::y), fy), 1e-12);
  EXPECT_LE(test::max_diff(derivative(f, Axis::z), fz), 1e-12);
  EXPECT_EQ(derivative(f, Axis::z).symmetry(), Symmetry::odd);
  EXPECT_EQ(derivative(f, Axis::x).symmetry(), Symmetry::even);

  const double k2 = 4 * pi * pi + 16 * pi * pi + pi * pi / (h * h);
  EXPECT_LE(test::max_diff(laplacian(f), -k2 * f), 1e-10);
}

TEST(SpectralOps, SpectralAccuracyOnSmoothPeriodicData) {
  auto error_at = [](int n) {
    const auto g = make_grid(n, 8, 8, 0.5);
    const auto f = test::scalar(g, [](double x, double, double) {
      return std::exp(std::sin(2 * pi * x));
    });
    const auto exact = test::scalar(g, [](double x, double, double) {
      return 2 * pi * std::cos(2 * pi * x) * std::exp(std::sin(2 * pi * x));
    });
    return test::max_diff(derivative(f, Axis::x), exact);
  };
  const double e8 = error_at(8), e16 = error_at(16);
  EXPECT_GE(e8 / e16, 10.0);
  EXPECT_LE(error_at(32), 1e-9);
}

TEST(SpectralOps, ParsevalMatchesLatticeQuadrature) {
  const auto g = make_grid(16, 16, 32, 0.7);
  const PhysicalField f = random_lattice(g, 2, 11);
  const SpectralField s = to_spectral(f);
  const double spectral = l2_norm_squared(s);
  const double lattice = lattice_l2_norm_squared(f);
  EXPECT_LE(std::abs(spectral - lattice) / lattice, 1e-12);
}

TEST(SpectralOps, NormOfCosineIsH) {
  const double h = 0.8;
  const auto g = make_grid(16, 16, 16, h);
  const auto f = test::scalar(g, [](double x, double, double) { return std::cos(2 * pi * x); });
  EXPECT_NEAR(l2_norm_squared(f), h, 1e-14);
}

TEST(SpectralOps, SymmetrizeIsIdempotentAndSplits) {
  const auto g = grid16();
  const SpectralField f = to_spectral(random_lattice(g, 1, 3));
  const SpectralField e = symmetrize(f, Symmetry::even);
  const SpectralField o = symmetrize(f, Symmetry::odd);
  const SpectralField ee = symmetrize(e, Symmetry::even);
  for (std::size_t n = 0; n < e.data().size(); ++n) {
    EXPECT_EQ(e.data()[n], ee.data()[n]);
  }
  // even + odd reproduces f away from the Nyquist plane in z.
  SpectralField sum = e + o;
  for (int i = 0; i < g->nx(); ++i)
    for (int j = 0; j < g->ny(); ++j)
      for (int l = 0; l < g->nz() / 2; ++l)
        EXPECT_LE(std::abs(sum.at(0, i, j, l) - f.at(0, i, j, l)), 1e-15);
  // the even part is even on the lattice: f(z) = f(-z), z_k <-> z_{nz-k}
  const PhysicalField pe = to_physical(e);
  for (int k = 1; k < g->nz(); ++k) {
    EXPECT_NEAR(pe.at(0, 3, 5, k), pe.at(0, 3, 5, g->nz() - k), 1e-14);
  }
}

TEST(SpectralOps, ArityAndShapeErrors) {
  const auto g = grid16();
  const SpectralField s(g, 1), v(g, 2);
  EXPECT_THROW(div_h(s), ArityError);
  EXPECT_THROW(grad_h(v), ArityError);
  const SpectralField other(make_grid(8, 8, 8, 0.5), 1);
  EXPECT_THROW((void)(s + other), ConfigError);
}

TEST(SpectralOps, DealiasKeepsTwoThirdsBand) {
  const auto g = make_grid(12, 12, 12, 0.5);
  SpectralField f(g, 1);
  f.set_mode(0, 4, 0, 0, 1.0);  // 3*4 <= 12: kept
  f.set_mode(0, 5, 0, 0, 1.0);  // dropped
  f.set_mode(0, 0, 0, 5, 1.0);  // dropped
  const SpectralField d = dealias(f);
  EXPECT_EQ(d.at(0, 4, 0, 0), Complex(1.0));
  EXPECT_EQ(d.at(0, 5, 0, 0), Complex(0.0));
  EXPECT_EQ(d.at(0, 0, 0, 5), Complex(0.0));
}

TEST(SpectralOps, ProductsAndResampling) {
  const auto g = grid16();
  const auto a = test::scalar(g, [](double x, double, double) { return std::cos(2 * pi * x); });
  const PhysicalField sq = pointwise_product(to_physical(a), to_physical(a));
  const SpectralField s = to_spectral(sq);
  EXPECT_NEAR(s.at(0, 0, 0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(s.at(0, 2, 0, 0).real(), 0.25, 1e-15);

  const auto fine = make_grid(32, 32, 32, 0.5);
  const SpectralField up = resample(a, fine);
  const SpectralField down = resample(up, g);
  EXPECT_LE(test::max_diff(down, a), 1e-15);
  EXPECT_THROW(resample(a, make_grid(32, 32, 32, 0.6)), ConfigError);
}

TEST(Kernels, SerialAndParallelAgree) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 3 * kernels::kReductionBlock + 17;
  std::vector<double> a(n), b(n), out1(n), out2(n);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  kernels::serial::multiply(a, b, out1);
  kernels::omp::multiply(a, b, out2);
  EXPECT_EQ(out1, out2);
  for (double p : {2.0, 3.5, 4.0, 6.0}) {
    const double s = kernels::serial::sum_abs_pow(a, b, p);
    const double o = kernels::omp::sum_abs_pow(a, b, p);
    EXPECT_NEAR(s, o, 1e-12 * s) << p;
  }
  EXPECT_EQ(kernels::serial::max_abs(a, b), kernels::omp::max_abs(a, b));

  std::vector<Complex> v1(n), v2, n1(n), n2(n);
  std::vector<double> e1(n), e2(n);
  for (std::size_t k = 0; k < n; ++k) {
    v1[k] = {u(rng), u(rng)};
    n1[k] = {u(rng), u(rng)};
    n2[k] = {u(rng), u(rng)};
    e1[k] = std::abs(u(rng));
    e2[k] = std::abs(u(rng));
  }
  v2 = v1;
  kernels::serial::rk_stage(v1, n1, n2, e1, e2, 0.3, -0.2);
  kernels::omp::rk_stage(v2, n1, n2, e1, e2, 0.3, -0.2);
  EXPECT_EQ(v1, v2);
}

TEST(Snapshot, RoundTripAndCorruption) {
  const auto g = make_grid(8, 8, 16, 0.5);
  const auto f = test::vector2(
      g, [](double x, double, double z) { return std::cos(2 * pi * x) * std::cos(2 * pi * z); },
      [](double, double y, double) { return std::sin(2 * pi * y); });
  const auto dir = std::filesystem::temp_directory_path() / "hydrostat_snapshot_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "f.hsf";
  write_snapshot(path, f);
  const SpectralField back = load_spectral(path);
  EXPECT_EQ(back.symmetry(), Symmetry::even);
  EXPECT_LE(test::max_diff(back, f), 1e-15);

  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 8);
  EXPECT_THROW(read_snapshot(path), DataError);
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << "XXXXjunk";
  }
  EXPECT_THROW(read_snapshot(path), DataError);
  std::filesystem::remove_all(dir);
}
