#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hydrostat/grid.hpp"

namespace hydrostat {

using Complex = std::complex<double>;

/// Parity of a field under z -> -z.
enum class Symmetry : std::uint8_t { none = 0, even = 1, odd = 2 };

std::string_view to_string(Symmetry s);
Symmetry flip(Symmetry s);

/// Truncated Fourier representation of a real periodic field with 1..3
/// components. Coefficients are normalized so that the (0,0,0) entry is the
/// field mean, and refer to exp(i(kx x + ky y + kz z)) with z measured from
/// the mid-plane.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridPtr grid, int components, Symmetry sym = Symmetry::none);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return ncomp_; }
  Symmetry symmetry() const { return sym_; }
  void set_symmetry(Symmetry s) { sym_ = s; }

  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  std::span<Complex> data() { return coeff_; }
  std::span<const Complex> data() const { return coeff_; }

  Complex& at(int c, int i, int j, int l) {
    return coeff_[offset(c) + grid_->spec_index(i, j, l)];
  }
  const Complex& at(int c, int i, int j, int l) const {
    return coeff_[offset(c) + grid_->spec_index(i, j, l)];
  }

  /// Coefficient of logical mode (i, j, l) for any l in (-nz/2, nz/2],
  /// resolving negative l through conjugate symmetry.
  Complex logical(int c, int i, int j, int l) const;

  /// Sets logical mode (m, n, l) (signed mode numbers) and, where the partner
  /// lives in storage, its conjugate so the field stays real.
  void set_mode(int c, int m, int n, int l, Complex value);

  /// Copy of one component as a scalar field (keeps the symmetry tag).
  SpectralField extract(int c) const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

 private:
  std::size_t offset(int c) const { return c * grid_->spectral_size(); }

  GridPtr grid_;
  int ncomp_ = 0;
  Symmetry sym_ = Symmetry::none;
  std::vector<Complex> coeff_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Stacks scalar fields into one multi-component field.
SpectralField stack(std::span<const SpectralField> parts);

/// Real values on the collocation lattice, z fastest, component-major.
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(GridPtr grid, int components);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return ncomp_; }

  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }

  double& at(int c, int i, int j, int k) {
    return values_[c * grid_->physical_size() + grid_->phys_index(i, j, k)];
  }
  double at(int c, int i, int j, int k) const {
    return values_[c * grid_->physical_size() + grid_->phys_index(i, j, k)];
  }

  bool all_finite() const;

 private:
  GridPtr grid_;
  int ncomp_ = 0;
  std::vector<double> values_;
};

/// Samples f(x, y, z) on the lattice of `grid` into a scalar field.
template <typename F>
PhysicalField sample(const GridPtr& grid, F&& f) {
  PhysicalField out(grid, 1);
  for (int i = 0; i < grid->nx(); ++i)
    for (int j = 0; j < grid->ny(); ++j)
      for (int k = 0; k < grid->nz(); ++k)
        out.at(0, i, j, k) = f(grid->x(i), grid->y(j), grid->z(k));
  return out;
}

}  // namespace hydrostat
