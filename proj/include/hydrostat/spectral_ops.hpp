#pragma once

#include "hydrostat/field.hpp"

namespace hydrostat {

/// Even or odd part under z -> -z, i.e. the (anti)symmetrization of the
/// coefficients under l -> -l. Exactly idempotent.
SpectralField symmetrize(const SpectralField& f, Symmetry tag);

/// Multiplies by i k along `axis`. A z-derivative flips the symmetry tag.
SpectralField derivative(const SpectralField& f, Axis axis);

SpectralField laplacian(const SpectralField& f);

/// Horizontal gradient of a scalar field (2 components).
SpectralField grad_h(const SpectralField& f);

/// Horizontal divergence of a 2-component field.
SpectralField div_h(const SpectralField& f);

/// Zeroes every mode outside the 2/3-rule band.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);

/// Lattice-pointwise product. Components multiply pairwise; a scalar operand
/// multiplies every component of the other.
PhysicalField pointwise_product(const PhysicalField& f, const PhysicalField& g);

/// ||f||_2^2 over M x (-h,h) by Parseval, all components summed.
double l2_norm_squared(const SpectralField& f);
double l2_norm(const SpectralField& f);

/// ||grad f||_2^2 (full 3D gradient) by Parseval.
double grad_norm_squared(const SpectralField& f);
/// ||grad_H f||_2^2 (horizontal gradient only).
double grad_h_norm_squared(const SpectralField& f);

/// (f, g) in L^2 over the domain, all components.
double inner_product(const SpectralField& f, const SpectralField& g);

/// ||f||_2^2 by trapezoidal quadrature on the lattice.
double lattice_l2_norm_squared(const PhysicalField& f);

/// The z-mean (l = 0 plane) of `f` as a field with every other plane zero.
SpectralField z_mean(const SpectralField& f);

/// Largest |c| over every stored coefficient.
double max_coefficient(const SpectralField& f);

}  // namespace hydrostat
