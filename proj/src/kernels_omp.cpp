#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hydrostat/kernels.hpp"

namespace hydrostat::kernels {

namespace {

using Index = std::ptrdiff_t;

Index ssize(std::size_t n) { return static_cast<Index>(n); }

std::size_t block_count(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

// Sums `term(n)` over [0, n) block by block; block partials are combined
// serially in block order.
template <typename Term>
double blocked_sum(std::size_t n, Term term) {
  const std::size_t nb = block_count(n);
  std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < ssize(nb); ++b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// |m|^p for the common even integer exponents without calling pow.
inline double pow_from_square(double m2, double p) {
  if (p == 2.0) return m2;
  if (p == 4.0) return m2 * m2;
  if (p == 6.0) return m2 * m2 * m2;
  return std::pow(m2, 0.5 * p);
}

}  // namespace

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

namespace omp {

void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
  const Index n = ssize(out.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void dot3(std::span<const double> a1, std::span<const double> b1,
          std::span<const double> a2, std::span<const double> b2,
          std::span<const double> a3, std::span<const double> b3,
          std::span<double> out) {
  const Index n = ssize(out.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    out[i] = a1[i] * b1[i] + a2[i] * b2[i] + a3[i] * b3[i];
  }
}

void derivative(SpectralShape shape, int axis, std::span<const double> k,
                std::span<const Complex> in, std::span<Complex> out) {
  const Index nx = shape.nx;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < nx; ++i) {
    for (int j = 0; j < shape.ny; ++j) {
      const std::size_t row = (static_cast<std::size_t>(i) * shape.ny + j) *
                              shape.nzc;
      if (axis == 2) {
        for (int l = 0; l < shape.nzc; ++l) {
          const Complex c = in[row + l];
          out[row + l] = Complex(-k[l] * c.imag(), k[l] * c.real());
        }
      } else {
        const double kk = axis == 0 ? k[i] : k[j];
        for (int l = 0; l < shape.nzc; ++l) {
          const Complex c = in[row + l];
          out[row + l] = Complex(-kk * c.imag(), kk * c.real());
        }
      }
    }
  }
}

void scale_modes(std::span<const double> factor, std::span<const Complex> in,
                 std::span<Complex> out) {
  const Index n = ssize(out.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = factor[i] * in[i];
}

void apply_mask(std::span<const std::uint8_t> mask, std::span<Complex> data) {
  const Index n = ssize(data.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    if (!mask[i]) data[i] = Complex{};
  }
}

void rk_stage(std::span<Complex> v, std::span<const Complex> n1,
              std::span<const Complex> n2, std::span<const double> e1,
              std::span<const double> e2, double a, double b) {
  const Index n = ssize(v.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    v[i] = e1[i] * (v[i] + a * n1[i]) + b * e2[i] * n2[i];
  }
}

double weighted_norm2(std::span<const Complex> c,
                      std::span<const double> weight) {
  return blocked_sum(c.size(),
                     [&](std::size_t i) { return weight[i] * std::norm(c[i]); });
}

double sum_abs_pow(std::span<const double> a, std::span<const double> b,
                   double p) {
  if (b.empty()) {
    return blocked_sum(a.size(), [&](std::size_t i) {
      return pow_from_square(a[i] * a[i], p);
    });
  }
  return blocked_sum(a.size(), [&](std::size_t i) {
    return pow_from_square(a[i] * a[i] + b[i] * b[i], p);
  });
}

double max_abs(std::span<const double> a, std::span<const double> b) {
  const Index n = ssize(a.size());
  double m2 = 0.0;
  if (b.empty()) {
#pragma omp parallel for schedule(static) reduction(max : m2)
    for (Index i = 0; i < n; ++i) m2 = std::max(m2, a[i] * a[i]);
  } else {
#pragma omp parallel for schedule(static) reduction(max : m2)
    for (Index i = 0; i < n; ++i) m2 = std::max(m2, a[i] * a[i] + b[i] * b[i]);
  }
  return std::sqrt(m2);
}

}  // namespace omp
}  // namespace hydrostat::kernels
