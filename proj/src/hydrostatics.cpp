#include "hydrostat/hydrostatics.hpp"

#include <cmath>
#include <numbers>

#include "hydrostat/errors.hpp"
#include "hydrostat/kernels.hpp"
#include "hydrostat/spectral_ops.hpp"
#include "hydrostat/transform.hpp"

namespace hydrostat {

Pressure2D::Pressure2D(GridPtr grid)
    : grid_(std::move(grid)),
      coeff_(static_cast<std::size_t>(grid_->nx()) * grid_->ny()) {}

SpectralField Pressure2D::gradient() const {
  const Grid& g = *grid_;
  SpectralField out(grid_, 2, Symmetry::even);
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      const Complex ik_p = Complex(0.0, 1.0) * at(i, j);
      out.at(0, i, j, 0) = g.kx()[i] * ik_p;
      out.at(1, i, j, 0) = g.ky()[j] * ik_p;
    }
  }
  return out;
}

double Pressure2D::l2_norm() const {
  double s = 0.0;
  for (const Complex& c : coeff_) s += std::norm(c);
  return std::sqrt(s);
}

Pressure2D& Pressure2D::operator+=(const Pressure2D& o) {
  for (std::size_t n = 0; n < coeff_.size(); ++n) coeff_[n] += o.coeff_[n];
  return *this;
}

Pressure2D& Pressure2D::operator-=(const Pressure2D& o) {
  for (std::size_t n = 0; n < coeff_.size(); ++n) coeff_[n] -= o.coeff_[n];
  return *this;
}

Pressure2D operator+(Pressure2D a, const Pressure2D& b) {
  a += b;
  return a;
}

Pressure2D operator-(Pressure2D a, const Pressure2D& b) {
  a -= b;
  return a;
}

double barotropic_residual(const SpectralField& v) {
  if (v.components() != 2) throw ArityError("barotropic_residual: need 2 components");
  const double norm = l2_norm(v);
  if (norm == 0.0) return 0.0;
  return l2_norm(div_h(z_mean(v))) / norm;
}

SpectralField vertical_integral(const SpectralField& f, double tolerance) {
  const Grid& g = f.grid();
  const double norm = l2_norm(f);
  if (norm > 0.0) {
    const double residual = l2_norm(z_mean(f)) / norm;
    if (residual > tolerance) {
      throw ConstraintViolation(
          "vertical_integral: z-mean does not vanish, antiderivative grows "
          "linearly",
          residual);
    }
  }

  Symmetry tag = Symmetry::none;
  if (f.symmetry() == Symmetry::even) tag = Symmetry::odd;
  if (f.symmetry() == Symmetry::odd) tag = Symmetry::even;
  SpectralField out(f.grid_ptr(), f.components(), tag);
  const int nz2 = g.nz() / 2;
  const auto& kz = g.kz();
  for (int c = 0; c < f.components(); ++c) {
    for (int i = 0; i < g.nx(); ++i) {
      const int ip = g.partner_x(i);
      for (int j = 0; j < g.ny(); ++j) {
        const int jp = g.partner_y(j);
        // F(z) = G(z) - G(-h) with G(z) = sum_{l != 0} c_l e^{ikz}/(ik).
        Complex g_bottom{};
        for (int l = 1; l < nz2; ++l) {
          const Complex cl = f.at(c, i, j, l);
          out.at(c, i, j, l) = cl / Complex(0.0, kz[l]);
          if (f.symmetry() != Symmetry::even) {
            const Complex cm = std::conj(f.at(c, ip, jp, l));
            const double sign = (l & 1) ? -1.0 : 1.0;
            g_bottom += sign * (cl - cm) / Complex(0.0, kz[l]);
          }
        }
        out.at(c, i, j, 0) = -g_bottom;
      }
    }
  }
  return out;
}

SpectralField recover_w(const SpectralField& v) {
  if (v.components() != 2) throw ArityError("recover_w: need 2 components");
  const double residual = barotropic_residual(v);
  if (residual > kConstraintTolerance) {
    throw ConstraintViolation("recover_w: barotropic constraint violated",
                              residual);
  }
  SpectralField div = div_h(v);
  const Grid& g = v.grid();
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) div.at(0, i, j, 0) = Complex{};
  }
  SpectralField w = vertical_integral(div);
  w *= -1.0;
  return w;
}

SpectralField project_barotropic(const SpectralField& v) {
  if (v.components() != 2) throw ArityError("project_barotropic: need 2 components");
  const Grid& g = v.grid();
  SpectralField out = v;
  for (int i = 0; i < g.nx(); ++i) {
    const double kx = g.kx()[i];
    for (int j = 0; j < g.ny(); ++j) {
      const double ky = g.ky()[j];
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const Complex u1 = v.at(0, i, j, 0);
      const Complex u2 = v.at(1, i, j, 0);
      const Complex kdotu = (kx * u1 + ky * u2) / k2;
      out.at(0, i, j, 0) = u1 - kx * kdotu;
      out.at(1, i, j, 0) = u2 - ky * kdotu;
    }
  }
  return out;
}

Pressure2D solve_poisson_2d(const Pressure2D& rhs) {
  const Grid& g = rhs.grid();
  Pressure2D p(rhs.grid_ptr());
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      const double k2 = g.kx()[i] * g.kx()[i] + g.ky()[j] * g.ky()[j];
      if (k2 > 0.0) p.at(i, j) = rhs.at(i, j) / k2;
    }
  }
  return p;
}

// -Lap_H p1 = -k_i k_j <T_ij>,  -Lap_H p2 = f0 <i(-kx P2 + ky P1)>.
PressureSplit pressure_from_tensor(const SpectralField& t_row1,
                                   const SpectralField& t_row2,
                                   const SpectralField& part, double f0) {
  const GridPtr& gp = part.grid_ptr();
  const Grid& g = *gp;
  Pressure2D rhs1(gp), rhs2(gp);
  for (int i = 0; i < g.nx(); ++i) {
    const double kx = g.kx()[i];
    for (int j = 0; j < g.ny(); ++j) {
      if (!g.retained(i, j, 0)) continue;
      const double ky = g.ky()[j];
      rhs1.at(i, j) = -(kx * kx * t_row1.at(0, i, j, 0) +
                        kx * ky * t_row1.at(1, i, j, 0) +
                        ky * kx * t_row2.at(0, i, j, 0) +
                        ky * ky * t_row2.at(1, i, j, 0));
      rhs2.at(i, j) = f0 * Complex(0.0, 1.0) *
                      (-kx * part.at(1, i, j, 0) + ky * part.at(0, i, j, 0));
    }
  }
  Pressure2D p1 = solve_poisson_2d(rhs1);
  Pressure2D p2 = solve_poisson_2d(rhs2);
  Pressure2D total = p1 + p2;
  return {std::move(total), std::move(p1), std::move(p2)};
}

PressureSplit solve_linear_pressure(const SpectralField& part,
                                    const PhysicalField& part_phys,
                                    const PhysicalField& driver_phys,
                                    double f0) {
  if (part.components() != 2 || part_phys.components() != 2 ||
      driver_phys.components() != 2) {
    throw ArityError("solve_linear_pressure: need 2-component fields");
  }
  const GridPtr& gp = part.grid_ptr();
  PhysicalField row1(gp, 2), row2(gp, 2);
  for (int j = 0; j < 2; ++j) {
    kernels::omp::multiply(part_phys.component(0), driver_phys.component(j),
                           row1.component(j));
    kernels::omp::multiply(part_phys.component(1), driver_phys.component(j),
                           row2.component(j));
  }
  return pressure_from_tensor(to_spectral(row1), to_spectral(row2), part, f0);
}

PressureSplit solve_pressure(const SpectralField& v, double f0) {
  const PhysicalField vp = to_physical(v);
  return solve_linear_pressure(v, vp, vp, f0);
}

double horizontal_trace_l2(const SpectralField& f, double z) {
  const Grid& g = f.grid();
  const int nz2 = g.nz() / 2;
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (int i = 0; i < g.nx(); ++i) {
      for (int j = 0; j < g.ny(); ++j) {
        Complex sum = f.at(c, i, j, 0);
        for (int l = 1; l < nz2; ++l) {
          const double phase = std::numbers::pi * l * z / g.h();
          const Complex e(std::cos(phase), std::sin(phase));
          sum += f.logical(c, i, j, l) * e + f.logical(c, i, j, -l) * std::conj(e);
        }
        s += std::norm(sum);
      }
    }
  }
  return std::sqrt(s);
}

WallTrace w_wall_trace(const SpectralField& v, const SpectralField& w) {
  const Grid& g = v.grid();
  WallTrace t;
  t.bottom = horizontal_trace_l2(w, -g.h());
  // Linear part of -div_H int_{-h}^{z} v dropped from periodic storage.
  const double linear = 2.0 * g.h() * horizontal_trace_l2(div_h(z_mean(v)), 0.0);
  t.top = horizontal_trace_l2(w, g.h()) + linear;
  return t;
}

}  // namespace hydrostat
