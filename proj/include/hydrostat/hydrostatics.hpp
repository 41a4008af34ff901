#pragma once

#include <span>
#include <vector>

#include "hydrostat/field.hpp"

namespace hydrostat {

/// Barotropic-constraint tolerance: ||div_H <v>||_2 relative to ||v||_2.
inline constexpr double kConstraintTolerance = 1e-10;

/// A function of the horizontal position only, stored as its full 2D
/// spectrum (index i * ny + j). Carries the zero-mean gauge.
class Pressure2D {
 public:
  Pressure2D() = default;
  explicit Pressure2D(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  Complex& at(int i, int j) { return coeff_[i * grid_->ny() + j]; }
  const Complex& at(int i, int j) const { return coeff_[i * grid_->ny() + j]; }
  std::span<const Complex> coefficients() const { return coeff_; }

  /// True when the gauge is imposed, i.e. the (0,0) coefficient is zero.
  bool zero_mean() const { return coeff_[0] == Complex{}; }

  /// grad_H p as a 2-component field living on the l = 0 plane.
  SpectralField gradient() const;

  /// ||p||_{L^2(M)}.
  double l2_norm() const;

  Pressure2D& operator+=(const Pressure2D& o);
  Pressure2D& operator-=(const Pressure2D& o);

 private:
  GridPtr grid_;
  std::vector<Complex> coeff_;
};

Pressure2D operator+(Pressure2D a, const Pressure2D& b);
Pressure2D operator-(Pressure2D a, const Pressure2D& b);

/// Total pressure and its advective / Coriolis parts, total = advective +
/// coriolis.
struct PressureSplit {
  Pressure2D total;
  Pressure2D advective;
  Pressure2D coriolis;
};

/// ||div_H <v>||_2 / ||v||_2 where <v> is the z-average (0 for v = 0).
double barotropic_residual(const SpectralField& v);

/// Antiderivative from z = -h: F(z) = int_{-h}^{z} f. The result must be
/// periodic, so the z-mean of f has to vanish to within `tolerance`
/// (relative L2); a smaller residual is dropped. Even input gives an
/// odd-tagged result.
SpectralField vertical_integral(const SpectralField& f,
                                double tolerance = kConstraintTolerance);

/// w = -div_H int_{-h}^{z} v for a 2-component even field. Throws
/// ConstraintViolation if the barotropic residual exceeds the tolerance.
SpectralField recover_w(const SpectralField& v);

/// Removes the gradient part of the z-mean; baroclinic modes are untouched.
SpectralField project_barotropic(const SpectralField& v);

/// Solves -Lap_H p = rhs with zero mean (rhs mean is ignored).
Pressure2D solve_poisson_2d(const Pressure2D& rhs);

/// Hydrostatic pressure of the full nonlinear system:
///   -Lap_H p = <div_H div_H (v (x) v) + f0 div_H (k x v)>.
PressureSplit solve_pressure(const SpectralField& v, double f0);

/// Pressure of the linear system for `part` advected by `driver`, built on
/// the mixed tensor part (x) driver. `part_phys` and `driver_phys` are the
/// lattice values of the two fields.
PressureSplit solve_linear_pressure(const SpectralField& part,
                                    const PhysicalField& part_phys,
                                    const PhysicalField& driver_phys, double f0);

/// Pressure from the transformed mixed tensor, given as its rows
/// (T11, T12) and (T21, T22). Only the l = 0 plane is read and modes outside
/// the 2/3 band are ignored.
PressureSplit pressure_from_tensor(const SpectralField& t_row1,
                                   const SpectralField& t_row2,
                                   const SpectralField& part, double f0);

/// ||f(., ., z)||_{L^2(M)} evaluated from the coefficients.
double horizontal_trace_l2(const SpectralField& f, double z);

/// Values of w at the two walls, in L^2(M). The top value includes the
/// linear-in-z part that periodic storage cannot hold,
/// -2h div_H <v>, so it measures the true w(+h).
struct WallTrace {
  double bottom = 0.0;
  double top = 0.0;
};
WallTrace w_wall_trace(const SpectralField& v, const SpectralField& w);

}  // namespace hydrostat
