#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hydrostat/decomposition.hpp"
#include "hydrostat/estimates.hpp"
#include "hydrostat/pe_solver.hpp"

namespace hydrostat {

inline constexpr const char* kArtifactVersion = "1.0.0";

enum class ExperimentKind { energy_identity, decomposition, stability, mollification, lemma_suite };

std::string to_string(ExperimentKind k);

struct GridSpec {
  int nx = 32;
  int ny = 32;
  int nz = 64;
};

struct EnergySettings {
  /// Number of dt halvings after the base run.
  int halvings = 2;
};

struct DecompositionSettings {
  /// Second vertical resolution for the C0 stability check (0 = skip).
  int refine_nz = 0;
};

struct StabilitySettings {
  /// Size of the indicator perturbation; the second run uses half of it.
  double perturbation = 0.05;
  double eta = 0.1;
};

struct MollificationSettings {
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  /// Comparison times (empty = t_end / 2 and t_end).
  std::vector<double> times;
};

struct LemmaSettings {
  int moser_instances = 10000;
  int moser_kmax = 40;
  double moser_m0_max = 10.0;
  int triples = 200;
  int band = 4;
  int nx = 16;
  std::vector<int> nz{32, 64};
};

/// One experiment run. Loaded from an INI file:
///
///   [run]            experiment, seed, t_end, output
///   [grid]           nx, ny, nz
///   [physics]        f0, h
///   [step]           dt, cfl_target
///   [initial]        kind, field, amplitude, a1, a2, delta, eta, sigma1,
///                    sigma2, background, background_amplitude, snapshot,
///                    epsilon
///   [bounds]         C0, C, C0star
///   [output]         snapshot_times, qs
///   [energy_identity] halvings
///   [decomposition]  refine_nz
///   [stability]      perturbation, eta
///   [mollification]  epsilons, times
///   [lemma_suite]    moser_instances, moser_kmax, moser_m0_max, triples,
///                    band, nx, nz
///
/// Every key is optional; unknown sections or keys are rejected.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::energy_identity;
  std::uint64_t seed = 42;
  double t_end = 0.1;
  std::filesystem::path output;
  GridSpec grid;
  PhysicsParams physics;
  StepControl step;
  InitialDataSpec initial;
  BoundParams bounds;
  std::vector<double> snapshot_times;
  std::vector<double> qs;
  EnergySettings energy;
  DecompositionSettings decomposition;
  StabilitySettings stability;
  MollificationSettings mollification;
  LemmaSettings lemma;
};

/// Throws ConfigError on syntax errors, unknown keys or bad values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks every invariant (grid, physics, step, initial data, bounds and
/// the experiment settings). Throws ConfigError or ParameterError.
void validate(const RunConfig& cfg);

/// Every key with its effective value, one `section.key = value` line each,
/// sorted; the output path is left out.
std::string canonical_form(const RunConfig& cfg);

/// Hex SHA-256 of the canonical form.
std::string config_hash(const RunConfig& cfg);

std::string sha256_hex(const std::string& bytes);

GridPtr make_run_grid(const RunConfig& cfg, int nz_override = 0);

}  // namespace hydrostat
