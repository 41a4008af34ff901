#include "hydrostat/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "hydrostat/errors.hpp"

namespace hydrostat {

namespace {

void check_resolution(const char* name, int n) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError(std::string("grid: ") + name +
                      " must be even and >= 8, got " + std::to_string(n));
  }
}

std::vector<double> wavenumbers(int n, double base) {
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) {
    const int m = i <= n / 2 ? i : i - n;
    k[i] = (2 * i == n) ? 0.0 : base * m;
  }
  return k;
}

}  // namespace

Grid::Grid(int nx, int ny, int nz, double h) : nx_(nx), ny_(ny), nz_(nz), h_(h) {
  check_resolution("nx", nx);
  check_resolution("ny", ny);
  check_resolution("nz", nz);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigError("grid: half-height h must be positive and finite");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  kx_ = wavenumbers(nx, two_pi);
  ky_ = wavenumbers(ny, two_pi);
  kz_.resize(nzc());
  for (int l = 0; l < nzc(); ++l) {
    kz_[l] = (2 * l == nz) ? 0.0 : std::numbers::pi * l / h;
  }

  mask_.resize(spectral_size());
  k2_.resize(spectral_size());
  kh2_.resize(spectral_size());
  mult_.resize(spectral_size());
  for (int i = 0; i < nx; ++i) {
    const int m = std::abs(mode_x(i));
    for (int j = 0; j < ny; ++j) {
      const int n = std::abs(mode_y(j));
      for (int l = 0; l < nzc(); ++l) {
        const std::size_t idx = spec_index(i, j, l);
        const bool keep = 3 * m <= nx && 3 * n <= ny && 3 * l <= nz;
        mask_[idx] = keep ? 1 : 0;
        kh2_[idx] = kx_[i] * kx_[i] + ky_[j] * ky_[j];
        k2_[idx] = kh2_[idx] + kz_[l] * kz_[l];
        mult_[idx] = multiplicity(l);
      }
    }
  }
}

GridPtr make_grid(int nx, int ny, int nz, double h) {
  return std::make_shared<const Grid>(nx, ny, nz, h);
}

GridPtr refined(const Grid& g, int factor) {
  // Norm evaluations ask for the same refined grid every step; building the
  // mode tables is not free, so keep them.
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, double>, GridPtr> cache;
  const auto key = std::make_tuple(g.nx() * factor, g.ny() * factor,
                                   g.nz() * factor, g.h());
  std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (!slot) {
    slot = make_grid(std::get<0>(key), std::get<1>(key), std::get<2>(key),
                     g.h());
  }
  return slot;
}

}  // namespace hydrostat
