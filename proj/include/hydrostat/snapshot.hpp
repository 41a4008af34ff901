#pragma once

#include <filesystem>

#include "hydrostat/field.hpp"

namespace hydrostat {

/// HSF1 binary field snapshot.
///
/// Layout, all little-endian:
///   char[4]  "HSF1"
///   uint32   nx, ny, nz
///   float64  h
///   uint32   component count
///   uint8    symmetry tag (0 none, 1 even, 2 odd)
///   float64  lattice values, component-major, z fastest within a component
struct Snapshot {
  PhysicalField values;
  Symmetry symmetry = Symmetry::none;
};

void write_snapshot(const std::filesystem::path& path, const PhysicalField& f,
                    Symmetry sym);
void write_snapshot(const std::filesystem::path& path, const SpectralField& f);

/// Throws DataError on a malformed or truncated file.
Snapshot read_snapshot(const std::filesystem::path& path);

/// Reads a snapshot and returns its spectral representation with the stored
/// symmetry applied.
SpectralField load_spectral(const std::filesystem::path& path);

}  // namespace hydrostat
