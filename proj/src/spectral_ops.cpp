#include "hydrostat/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydrostat/errors.hpp"
#include "hydrostat/kernels.hpp"

namespace hydrostat {

namespace {

kernels::SpectralShape shape_of(const Grid& g) {
  return {g.nx(), g.ny(), g.nzc()};
}

void require_components(const SpectralField& f, int n, const char* op) {
  if (f.components() != n) {
    throw ArityError(std::string(op) + ": expected " + std::to_string(n) +
                     " component(s), got " + std::to_string(f.components()));
  }
}

// Parseval sum of weight * multiplicity * |c|^2 over all components.
double parseval(const SpectralField& f, const std::vector<double>* extra) {
  const Grid& g = f.grid();
  const auto& mult = g.multiplicity_table();
  std::vector<double> w;
  std::span<const double> weight = mult;
  if (extra) {
    w.resize(mult.size());
    for (std::size_t n = 0; n < w.size(); ++n) w[n] = mult[n] * (*extra)[n];
    weight = w;
  }
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    s += kernels::omp::weighted_norm2(f.component(c), weight);
  }
  return g.volume() * s;
}

}  // namespace

SpectralField symmetrize(const SpectralField& f, Symmetry tag) {
  if (tag == Symmetry::none) return f;
  const Grid& g = f.grid();
  const double sign = tag == Symmetry::even ? 1.0 : -1.0;
  SpectralField out(f.grid_ptr(), f.components(), tag);
  const int nz2 = g.nz() / 2;
  for (int c = 0; c < f.components(); ++c) {
    for (int i = 0; i < g.nx(); ++i) {
      const int ip = g.partner_x(i);
      for (int j = 0; j < g.ny(); ++j) {
        const int jp = g.partner_y(j);
        for (int l = 0; l < g.nzc(); ++l) {
          const Complex a = f.at(c, i, j, l);
          if (l == 0 || l == nz2) {
            // l and -l coincide on these planes.
            out.at(c, i, j, l) = tag == Symmetry::even ? a : Complex{};
            continue;
          }
          // coefficient of (m, n, -l) is conj of stored (-m, -n, l)
          const Complex b = std::conj(f.at(c, ip, jp, l));
          out.at(c, i, j, l) = 0.5 * (a + sign * b);
        }
      }
    }
  }
  return out;
}

SpectralField derivative(const SpectralField& f, Axis axis) {
  const Grid& g = f.grid();
  const Symmetry sym = axis == Axis::z ? flip(f.symmetry()) : f.symmetry();
  SpectralField out(f.grid_ptr(), f.components(), sym);
  const int a = static_cast<int>(axis);
  const std::vector<double>& k =
      axis == Axis::x ? g.kx() : (axis == Axis::y ? g.ky() : g.kz());
  for (int c = 0; c < f.components(); ++c) {
    kernels::omp::derivative(shape_of(g), a, k, f.component(c),
                             out.component(c));
  }
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  const Grid& g = f.grid();
  std::vector<double> factor(g.k_squared());
  for (double& v : factor) v = -v;
  SpectralField out(f.grid_ptr(), f.components(), f.symmetry());
  for (int c = 0; c < f.components(); ++c) {
    kernels::omp::scale_modes(factor, f.component(c), out.component(c));
  }
  return out;
}

SpectralField grad_h(const SpectralField& f) {
  require_components(f, 1, "grad_h");
  const SpectralField parts[] = {derivative(f, Axis::x), derivative(f, Axis::y)};
  return stack(parts);
}

SpectralField div_h(const SpectralField& f) {
  require_components(f, 2, "div_h");
  SpectralField out = derivative(f.extract(0), Axis::x);
  out += derivative(f.extract(1), Axis::y);
  return out;
}

void dealias_in_place(SpectralField& f) {
  const auto& mask = f.grid().dealias_mask();
  for (int c = 0; c < f.components(); ++c) {
    kernels::omp::apply_mask(mask, f.component(c));
  }
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

PhysicalField pointwise_product(const PhysicalField& f, const PhysicalField& g) {
  if (!f.grid().same_shape(g.grid())) {
    throw ConfigError("pointwise_product: grids differ");
  }
  const int nf = f.components();
  const int ng = g.components();
  if (nf != ng && nf != 1 && ng != 1) {
    throw ArityError("pointwise_product: incompatible component counts");
  }
  const int n = std::max(nf, ng);
  PhysicalField out(f.grid_ptr(), n);
  for (int c = 0; c < n; ++c) {
    kernels::omp::multiply(f.component(nf == 1 ? 0 : c),
                           g.component(ng == 1 ? 0 : c), out.component(c));
  }
  return out;
}

double l2_norm_squared(const SpectralField& f) { return parseval(f, nullptr); }

double l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_squared(f)); }

double grad_norm_squared(const SpectralField& f) {
  return parseval(f, &f.grid().k_squared());
}

double grad_h_norm_squared(const SpectralField& f) {
  return parseval(f, &f.grid().kh_squared());
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  if (f.components() != g.components() || !f.grid().same_shape(g.grid())) {
    throw ConfigError("inner_product: operand shapes differ");
  }
  const Grid& grid = f.grid();
  const auto& mult = grid.multiplicity_table();
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto a = f.component(c);
    auto b = g.component(c);
    for (std::size_t n = 0; n < a.size(); ++n) {
      s += mult[n] * (a[n].real() * b[n].real() + a[n].imag() * b[n].imag());
    }
  }
  return grid.volume() * s;
}

double lattice_l2_norm_squared(const PhysicalField& f) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    s += kernels::omp::sum_abs_pow(f.component(c), {}, 2.0);
  }
  return f.grid().volume() * s / static_cast<double>(f.grid().physical_size());
}

SpectralField z_mean(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField out(f.grid_ptr(), f.components(), Symmetry::even);
  for (int c = 0; c < f.components(); ++c) {
    for (int i = 0; i < g.nx(); ++i) {
      for (int j = 0; j < g.ny(); ++j) out.at(c, i, j, 0) = f.at(c, i, j, 0);
    }
  }
  return out;
}

double max_coefficient(const SpectralField& f) {
  double m = 0.0;
  for (const Complex& c : f.data()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace hydrostat
