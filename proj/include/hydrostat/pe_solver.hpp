#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "hydrostat/errors.hpp"
#include "hydrostat/estimates.hpp"
#include "hydrostat/field.hpp"
#include "hydrostat/hydrostatics.hpp"

namespace hydrostat {

/// Viscosity is fixed at 1.
struct PhysicsParams {
  double f0 = 0.0;
  double h = 0.5;
};

/// Fixed-step control. The scheme is always the low-storage RK3 with an
/// integrating factor for diffusion; `cfl_target` only triggers warnings.
struct StepControl {
  double dt = 5e-4;
  double cfl_target = 0.5;
};

void validate(const PhysicsParams& p);
void validate(const StepControl& c);

struct SolverState {
  SpectralField v;  // 2 components, even in z, dealiased, constrained
  double t = 0.0;
  PhysicsParams params;
};

/// Dealiases, symmetrizes and projects `v0`, then checks the grid height
/// against `params.h`.
SolverState make_state(const SpectralField& v0, const PhysicsParams& params,
                       double t0 = 0.0);

/// Frozen advecting field at one stage: v and w in both representations.
struct DriverFields {
  double t = 0.0;
  SpectralField v;
  SpectralField w;
  PhysicalField v_phys;
  PhysicalField w_phys;
};

using DriverPtr = std::shared_ptr<const DriverFields>;

DriverPtr make_driver(const SpectralField& v, double t);

/// -[(d . grad_H) P + w_d dz P + grad_H p + f0 k x P] for a part P advected
/// by the driver d, with p the pressure of the corresponding linear system.
/// With P = d this is the full nonlinear right-hand side.
SpectralField advection_rhs(const SpectralField& part, const DriverFields& driver,
                            double f0, PressureSplit* pressure = nullptr);

SpectralField rhs_nonlinear(const SpectralField& v, const PhysicsParams& params);

/// Coefficients of the three-stage scheme (Wray's low-storage RK3).
struct Rk3 {
  static constexpr std::array<double, 3> gamma{8.0 / 15.0, 5.0 / 12.0, 3.0 / 4.0};
  static constexpr std::array<double, 3> zeta{0.0, -17.0 / 60.0, -5.0 / 12.0};
  /// Stage start times in units of dt.
  static constexpr std::array<double, 4> c{0.0, 8.0 / 15.0, 2.0 / 3.0, 1.0};
};

/// Driver snapshots of one step, one per stage, at t0 + c_i dt.
struct StageDrivers {
  double t0 = 0.0;
  double dt = 0.0;
  std::array<DriverPtr, 3> stages;
};

struct StepInfo {
  StageDrivers drivers;
  /// Right-hand side at the start of the step.
  SpectralField rhs0;
  double cfl = 0.0;
};

/// Thrown when a step produces non-finite values.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, SolverState last_good)
      : Error(what), last_good_(std::make_shared<SolverState>(std::move(last_good))) {}
  const SolverState& last_good() const { return *last_good_; }
  /// Diagnostics recorded before the failure (filled by integrate).
  DiagnosticsSeries partial;

 private:
  std::shared_ptr<SolverState> last_good_;
};

double cfl_number(const PhysicalField& v_phys, double dt);

/// One step of length ctl.dt. Fills `info` with the stage drivers.
SolverState step(const SolverState& s, const StepControl& ctl,
                 StepInfo* info = nullptr);

/// Advances a part of the linear system by one step with the driver
/// snapshots of the matching nonlinear step. Throws SchedulingError if the
/// part's time or the stage times disagree with the drivers.
SpectralField step_linear(const SpectralField& part, double t,
                          const StageDrivers& drivers, const StepControl& ctl,
                          const PhysicsParams& params, SpectralField* rhs0 = nullptr);

/// int_0^dt ||grad v||^2 over a step from v0 to v1, where n0 is the
/// advection right-hand side at v0. Each mode energy is interpolated by a
/// quadratic in the integrating-factor frame (matching both end values and
/// the start slope), so pure diffusion is integrated exactly.
double step_dissipation(const SpectralField& v0, const SpectralField& v1,
                        const SpectralField& n0, double dt);

struct IntegrateOptions {
  /// Extra L^q exponents recorded in every NormRecord.
  std::vector<double> qs;
  /// Snapshot times; each is written on the first step at or after it.
  std::vector<double> snapshot_times;
  std::filesystem::path snapshot_dir;
  /// Called after every accepted step.
  std::function<void(const SolverState&, const StepInfo&)> on_step;
};

struct Trajectory {
  SolverState final;
  DiagnosticsSeries series;
  std::size_t steps = 0;
  std::size_t cfl_warnings = 0;
  std::vector<std::filesystem::path> snapshots;
};

/// Steps from s0.t to t_end (the last step is shortened to land on t_end),
/// recording norms and the energy balance after every step. A blow-up is
/// rethrown with the series recorded so far.
Trajectory integrate(const SolverState& s0, const StepControl& ctl, double t_end,
                     const IntegrateOptions& opts = {});

/// Number of steps integrate takes for the interval.
std::size_t step_count(double t0, double t_end, double dt);

}  // namespace hydrostat
