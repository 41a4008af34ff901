#include <algorithm>
#include <cmath>

#include "hydrostat/kernels.hpp"

namespace hydrostat::kernels::serial {

void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = a[n] * b[n];
}

void dot3(std::span<const double> a1, std::span<const double> b1,
          std::span<const double> a2, std::span<const double> b2,
          std::span<const double> a3, std::span<const double> b3,
          std::span<double> out) {
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = a1[n] * b1[n] + a2[n] * b2[n] + a3[n] * b3[n];
  }
}

void derivative(SpectralShape shape, int axis, std::span<const double> k,
                std::span<const Complex> in, std::span<Complex> out) {
  for (int i = 0; i < shape.nx; ++i) {
    for (int j = 0; j < shape.ny; ++j) {
      for (int l = 0; l < shape.nzc; ++l) {
        const std::size_t idx =
            (static_cast<std::size_t>(i) * shape.ny + j) * shape.nzc + l;
        const double kk = axis == 0 ? k[i] : (axis == 1 ? k[j] : k[l]);
        out[idx] = Complex(-kk * in[idx].imag(), kk * in[idx].real());
      }
    }
  }
}

void scale_modes(std::span<const double> factor, std::span<const Complex> in,
                 std::span<Complex> out) {
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = factor[n] * in[n];
}

void apply_mask(std::span<const std::uint8_t> mask, std::span<Complex> data) {
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (!mask[n]) data[n] = Complex{};
  }
}

void rk_stage(std::span<Complex> v, std::span<const Complex> n1,
              std::span<const Complex> n2, std::span<const double> e1,
              std::span<const double> e2, double a, double b) {
  for (std::size_t n = 0; n < v.size(); ++n) {
    v[n] = e1[n] * (v[n] + a * n1[n]) + b * e2[n] * n2[n];
  }
}

double weighted_norm2(std::span<const Complex> c,
                      std::span<const double> weight) {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += weight[n] * std::norm(c[n]);
  return s;
}

double sum_abs_pow(std::span<const double> a, std::span<const double> b,
                   double p) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double m = b.empty() ? std::abs(a[n]) : std::hypot(a[n], b[n]);
    s += std::pow(m, p);
  }
  return s;
}

double max_abs(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    m = std::max(m, b.empty() ? std::abs(a[n]) : std::hypot(a[n], b[n]));
  }
  return m;
}

}  // namespace hydrostat::kernels::serial
