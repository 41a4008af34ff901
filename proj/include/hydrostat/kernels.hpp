#pragma once

// Array kernels behind the spectral operators and the time stepper.
//
// Every kernel exists twice with the same signature: `serial::` is the plain
// reference loop kept for testing and benchmarking, `omp::` is the OpenMP
// version the library calls. Reductions in `omp::` sum fixed-size blocks and
// combine the block partials in order, so their result does not depend on
// the thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace hydrostat::kernels {

using Complex = std::complex<double>;

/// Block length for deterministic reductions.
inline constexpr std::size_t kReductionBlock = 4096;

/// Extent of a spectral array: nx * ny * nzc, z fastest.
struct SpectralShape {
  int nx, ny, nzc;
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nzc; }
};

namespace serial {

/// out = a * b
void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
/// out = a1*b1 + a2*b2 + a3*b3
void dot3(std::span<const double> a1, std::span<const double> b1,
          std::span<const double> a2, std::span<const double> b2,
          std::span<const double> a3, std::span<const double> b3,
          std::span<double> out);
/// out = i k_axis in, with k indexed along `axis` (0, 1, 2)
void derivative(SpectralShape shape, int axis, std::span<const double> k,
                std::span<const Complex> in, std::span<Complex> out);
/// out = factor * in, per mode
void scale_modes(std::span<const double> factor, std::span<const Complex> in,
                 std::span<Complex> out);
void apply_mask(std::span<const std::uint8_t> mask, std::span<Complex> data);
/// v = e1 (v + a n1) + b e2 n2
void rk_stage(std::span<Complex> v, std::span<const Complex> n1,
              std::span<const Complex> n2, std::span<const double> e1,
              std::span<const double> e2, double a, double b);
/// sum of weight |c|^2
double weighted_norm2(std::span<const Complex> c,
                      std::span<const double> weight);
/// sum over points of |(a, b)|^p; b empty for a scalar field
double sum_abs_pow(std::span<const double> a, std::span<const double> b,
                   double p);
double max_abs(std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace omp {

void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
void dot3(std::span<const double> a1, std::span<const double> b1,
          std::span<const double> a2, std::span<const double> b2,
          std::span<const double> a3, std::span<const double> b3,
          std::span<double> out);
void derivative(SpectralShape shape, int axis, std::span<const double> k,
                std::span<const Complex> in, std::span<Complex> out);
void scale_modes(std::span<const double> factor, std::span<const Complex> in,
                 std::span<Complex> out);
void apply_mask(std::span<const std::uint8_t> mask, std::span<Complex> data);
void rk_stage(std::span<Complex> v, std::span<const Complex> n1,
              std::span<const Complex> n2, std::span<const double> e1,
              std::span<const double> e2, double a, double b);
double weighted_norm2(std::span<const Complex> c,
                      std::span<const double> weight);
double sum_abs_pow(std::span<const double> a, std::span<const double> b,
                   double p);
double max_abs(std::span<const double> a, std::span<const double> b);

}  // namespace omp

/// Threads used by kernels and transforms.
int thread_count();
void set_thread_count(int n);

}  // namespace hydrostat::kernels
