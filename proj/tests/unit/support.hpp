#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "hydrostat/field.hpp"
#include "hydrostat/spectral_ops.hpp"
#include "hydrostat/transform.hpp"

namespace hydrostat::test {

inline constexpr double pi = std::numbers::pi;

template <typename F>
SpectralField scalar(const GridPtr& g, F&& f, Symmetry tag = Symmetry::none) {
  return to_spectral(sample(g, f), tag);
}

template <typename F1, typename F2>
SpectralField vector2(const GridPtr& g, F1&& f1, F2&& f2,
                      Symmetry tag = Symmetry::even) {
  const std::vector<SpectralField> parts{scalar(g, f1, tag), scalar(g, f2, tag)};
  SpectralField v = stack(parts);
  v.set_symmetry(tag);
  return v;
}

/// max |a - b| over the lattice, all components.
inline double max_diff(const SpectralField& a, const SpectralField& b) {
  const PhysicalField pa = to_physical(a), pb = to_physical(b);
  double m = 0.0;
  for (std::size_t n = 0; n < pa.data().size(); ++n) {
    m = std::max(m, std::abs(pa.data()[n] - pb.data()[n]));
  }
  return m;
}

inline double rel_l2(const SpectralField& a, const SpectralField& b) {
  const double nb = l2_norm(b);
  return l2_norm(a - b) / (nb > 0.0 ? nb : 1.0);
}

}  // namespace hydrostat::test
