#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "hydrostat/pe_solver.hpp"

namespace hydrostat {

/// Data a |z|^delta + sigma chi_(-eta, eta)(z), split into its two terms.
struct LayeredParams {
  std::array<double, 2> a{1.0, 0.0};
  double delta = 1.0;
  double eta = 0.25;
  std::array<double, 2> sigma{1.0, 0.0};
};

/// Named smooth velocity fields:
///   zero      0
///   shear     (0, A cos 2 pi x)
///   rotation  (A cos(pi z / h), 0)
///   vortex    cellular flow with a divergent baroclinic part (w != 0)
struct AnalyticParams {
  std::string name = "vortex";
  double amplitude = 1.0;
};

SpectralField analytic_field(const GridPtr& grid, const AnalyticParams& p);

enum class InitialKind { analytic, layered, snapshot };

struct InitialDataSpec {
  InitialKind kind = InitialKind::analytic;
  AnalyticParams analytic;
  LayeredParams layered;
  /// Smooth field added to the regular part of layered data. The layered
  /// terms alone depend on z only and evolve linearly.
  AnalyticParams background{"zero", 0.0};
  std::filesystem::path snapshot;
  /// Mollification radius (0 = none).
  double epsilon = 0.0;
};

void validate(const InitialDataSpec& spec, double h);

/// Periodic convolution with the tensor-product bump
/// phi(s) = exp(-1 / (1 - s^2)) scaled to radius eps and unit mass, applied
/// as a Fourier multiplier. eps = 0 is the identity; eps >= min(1, 2h)
/// throws ParameterError.
SpectralField mollify(const SpectralField& v0, double eps);

/// Fourier multiplier of the bump along one axis at wavenumber k.
double bump_transform(double k, double eps);

struct SplitData {
  SpectralField vbar0;
  SpectralField V0;
};

/// vbar0 = a |z|^delta and V0 = sigma chi_(-eta, eta)(z) as even fields,
/// each from exact vertical cosine coefficients truncated to the dealiased
/// band (|z|^delta by adaptive quadrature, the indicator in closed form).
SplitData make_layered_data(const GridPtr& grid, const LayeredParams& p);

/// Cosine coefficients (1/h) int_0^h z^delta cos(pi l z / h) dz, l = 0..lmax.
std::vector<double> power_cosine_coefficients(double delta, double h, int lmax);

/// The initial split for a spec, mollifying both parts separately. Analytic
/// and snapshot data put everything into vbar0.
SplitData make_initial_data(const GridPtr& grid, const InitialDataSpec& spec);

struct DecompositionState {
  SpectralField vbar;
  SpectralField V;
  Pressure2D Pbar;
  Pressure2D PV;
  /// Stage-0 driver of the final time.
  DriverPtr driver;
};

struct DecompositionResult {
  Trajectory full;
  DecompositionState parts;
  /// Rows carry dz_vbar_l2, grad_dz_vbar_int, linf_V and recon_residual.
  DiagnosticsSeries series;
  double max_recon_residual = 0.0;
  /// Largest |cumulative energy residual| of each linear system.
  double max_energy_residual_vbar = 0.0;
  double max_energy_residual_V = 0.0;
};

struct DecompositionOptions {
  std::vector<double> qs;
  std::vector<double> snapshot_times;
  std::filesystem::path snapshot_dir;
};

/// Integrates v from v0 = vbar0 + V0 and both linear systems with v as the
/// driver, in lock step.
DecompositionResult run_decomposition(const SpectralField& vbar0, const SpectralField& V0,
                                      const PhysicsParams& params, const StepControl& ctl,
                                      double t_end, const DecompositionOptions& opts = {});

}  // namespace hydrostat
