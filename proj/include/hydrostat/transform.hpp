#pragma once

#include "hydrostat/field.hpp"

namespace hydrostat {

/// Inverse transform on all three axes (FFTW, real-to-complex layout).
PhysicalField to_physical(const SpectralField& f);

/// Forward transform carrying the 1/N factor. A tag other than `none`
/// symmetrizes the result and records the tag.
SpectralField to_spectral(const PhysicalField& f,
                          Symmetry tag = Symmetry::none);

/// Copies the coefficients onto another grid of the same half-height,
/// truncating or zero-padding. Nyquist modes of the source are dropped.
SpectralField resample(const SpectralField& f, const GridPtr& target);

/// Lattice values on a grid refined by `factor` in every direction.
PhysicalField to_physical_refined(const SpectralField& f, int factor);

}  // namespace hydrostat
