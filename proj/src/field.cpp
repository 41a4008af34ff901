#include "hydrostat/field.hpp"

#include <algorithm>
#include <cmath>

#include "hydrostat/errors.hpp"

namespace hydrostat {

std::string_view to_string(Symmetry s) {
  switch (s) {
    case Symmetry::even:
      return "even";
    case Symmetry::odd:
      return "odd";
    default:
      return "none";
  }
}

Symmetry flip(Symmetry s) {
  switch (s) {
    case Symmetry::even:
      return Symmetry::odd;
    case Symmetry::odd:
      return Symmetry::even;
    default:
      return Symmetry::none;
  }
}

namespace {

void check_components(int n) {
  if (n < 1 || n > 3) {
    throw ConfigError("field: component count must be 1, 2 or 3, got " +
                      std::to_string(n));
  }
}

void check_same_shape(const SpectralField& a, const SpectralField& b) {
  if (a.components() != b.components() || !a.grid().same_shape(b.grid())) {
    throw ConfigError("field: operand shapes differ");
  }
}

}  // namespace

SpectralField::SpectralField(GridPtr grid, int components, Symmetry sym)
    : grid_(std::move(grid)), ncomp_(components), sym_(sym) {
  if (!grid_) throw ConfigError("field: null grid");
  check_components(components);
  coeff_.assign(components * grid_->spectral_size(), Complex{});
}

std::span<Complex> SpectralField::component(int c) {
  return std::span<Complex>(coeff_).subspan(offset(c), grid_->spectral_size());
}

std::span<const Complex> SpectralField::component(int c) const {
  return std::span<const Complex>(coeff_).subspan(offset(c),
                                                  grid_->spectral_size());
}

Complex SpectralField::logical(int c, int i, int j, int l) const {
  if (l >= 0) return at(c, i, j, l);
  return std::conj(at(c, grid_->partner_x(i), grid_->partner_y(j), -l));
}

void SpectralField::set_mode(int c, int m, int n, int l, Complex value) {
  const Grid& g = *grid_;
  const int i = (m % g.nx() + g.nx()) % g.nx();
  const int j = (n % g.ny() + g.ny()) % g.ny();
  if (l < 0) {
    at(c, g.partner_x(i), g.partner_y(j), -l) = std::conj(value);
    return;
  }
  at(c, i, j, l) = value;
  if (l == 0 || 2 * l == g.nz()) {
    at(c, g.partner_x(i), g.partner_y(j), l) = std::conj(value);
    if (g.partner_x(i) == i && g.partner_y(j) == j) {
      at(c, i, j, l) = Complex(value.real(), 0.0);
    }
  }
}

SpectralField SpectralField::extract(int c) const {
  SpectralField out(grid_, 1, sym_);
  std::ranges::copy(component(c), out.component(0).begin());
  return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_same_shape(*this, o);
  for (std::size_t n = 0; n < coeff_.size(); ++n) coeff_[n] += o.coeff_[n];
  if (sym_ != o.sym_) sym_ = Symmetry::none;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_same_shape(*this, o);
  for (std::size_t n = 0; n < coeff_.size(); ++n) coeff_[n] -= o.coeff_[n];
  if (sym_ != o.sym_) sym_ = Symmetry::none;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeff_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}

SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}

SpectralField operator*(double s, SpectralField a) {
  a *= s;
  return a;
}

SpectralField stack(std::span<const SpectralField> parts) {
  if (parts.empty()) throw ConfigError("stack: no components");
  int total = 0;
  Symmetry sym = parts.front().symmetry();
  for (const auto& p : parts) {
    if (!p.grid().same_shape(parts.front().grid())) {
      throw ConfigError("stack: grids differ");
    }
    total += p.components();
    if (p.symmetry() != sym) sym = Symmetry::none;
  }
  SpectralField out(parts.front().grid_ptr(), total, sym);
  int c = 0;
  for (const auto& p : parts) {
    for (int pc = 0; pc < p.components(); ++pc, ++c) {
      std::ranges::copy(p.component(pc), out.component(c).begin());
    }
  }
  return out;
}

PhysicalField::PhysicalField(GridPtr grid, int components)
    : grid_(std::move(grid)), ncomp_(components) {
  if (!grid_) throw ConfigError("field: null grid");
  check_components(components);
  values_.assign(components * grid_->physical_size(), 0.0);
}

std::span<double> PhysicalField::component(int c) {
  return std::span<double>(values_).subspan(c * grid_->physical_size(),
                                            grid_->physical_size());
}

std::span<const double> PhysicalField::component(int c) const {
  return std::span<const double>(values_).subspan(c * grid_->physical_size(),
                                                  grid_->physical_size());
}

bool PhysicalField::all_finite() const {
  return std::ranges::all_of(values_, [](double v) { return std::isfinite(v); });
}

}  // namespace hydrostat
