#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace hydrostat {

enum class Axis { x, y, z };

/// Fully periodic lattice on (0,1)^2 x (-h,h).
///
/// Spectral storage is the real-to-complex layout: full modes along x and y,
/// non-negative modes l = 0..nz/2 along z (z is the fastest index in both
/// spaces). Collocation points are x_i = i/nx, y_j = j/ny and
/// z_k = -h + 2h k/nz, so z = -h is on the lattice and z = +h is its
/// periodic image.
class Grid {
 public:
  Grid(int nx, int ny, int nz, double h);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  /// Stored z modes (nz/2 + 1).
  int nzc() const { return nz_ / 2 + 1; }
  double h() const { return h_; }
  /// |M x (-h,h)| with |M| = 1.
  double volume() const { return 2.0 * h_; }

  std::size_t physical_size() const {
    return static_cast<std::size_t>(nx_) * ny_ * nz_;
  }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(nx_) * ny_ * nzc();
  }
  std::size_t phys_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ny_ + j) * nz_ + k;
  }
  std::size_t spec_index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * ny_ + j) * nzc() + l;
  }

  /// Signed mode number for storage index i (Nyquist reported as +n/2).
  int mode_x(int i) const { return i <= nx_ / 2 ? i : i - nx_; }
  int mode_y(int j) const { return j <= ny_ / 2 ? j : j - ny_; }
  /// Storage index of the mode -m (the conjugate partner).
  int partner_x(int i) const { return (nx_ - i) % nx_; }
  int partner_y(int j) const { return (ny_ - j) % ny_; }

  /// Wavenumbers used by derivatives; Nyquist modes map to zero.
  const std::vector<double>& kx() const { return kx_; }
  const std::vector<double>& ky() const { return ky_; }
  const std::vector<double>& kz() const { return kz_; }

  /// 1 for modes kept by the 2/3 rule, 0 otherwise (spectral layout).
  const std::vector<std::uint8_t>& dealias_mask() const { return mask_; }
  bool retained(int i, int j, int l) const {
    return mask_[spec_index(i, j, l)] != 0;
  }

  /// Multiplicity of a stored mode in the full logical spectrum
  /// (1 on the l = 0 and l = nz/2 planes, 2 elsewhere).
  double multiplicity(int l) const {
    return (l == 0 || l == nz_ / 2) ? 1.0 : 2.0;
  }

  /// |k|^2 per stored mode (derivative wavenumbers).
  const std::vector<double>& k_squared() const { return k2_; }
  /// kx^2 + ky^2 per stored mode.
  const std::vector<double>& kh_squared() const { return kh2_; }
  /// multiplicity(l) per stored mode, for Parseval sums.
  const std::vector<double>& multiplicity_table() const { return mult_; }

  double x(int i) const { return static_cast<double>(i) / nx_; }
  double y(int j) const { return static_cast<double>(j) / ny_; }
  double z(int k) const { return -h_ + 2.0 * h_ * k / nz_; }

  bool same_shape(const Grid& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && nz_ == other.nz_ &&
           h_ == other.h_;
  }

 private:
  int nx_, ny_, nz_;
  double h_;
  std::vector<double> kx_, ky_, kz_;
  std::vector<double> k2_, kh2_, mult_;
  std::vector<std::uint8_t> mask_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int nx, int ny, int nz, double h);

/// Same domain with every resolution multiplied by `factor`.
GridPtr refined(const Grid& g, int factor);

}  // namespace hydrostat
