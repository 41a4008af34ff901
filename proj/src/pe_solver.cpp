#include "hydrostat/pe_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>

#include "hydrostat/kernels.hpp"
#include "hydrostat/snapshot.hpp"
#include "hydrostat/spectral_ops.hpp"
#include "hydrostat/transform.hpp"

namespace hydrostat {

void validate(const PhysicsParams& p) {
  if (!(p.h > 0.0)) throw ConfigError("physics: h must be positive");
  if (!std::isfinite(p.f0)) throw ConfigError("physics: f0 must be finite");
}

void validate(const StepControl& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("step: dt must be positive");
  if (!(c.cfl_target > 0.0)) throw ConfigError("step: cfl_target must be positive");
}

namespace {

void require_velocity(const SpectralField& v, const char* what) {
  if (v.components() != 2) throw ArityError(std::string(what) + ": need 2 components");
}

/// Stage projections shared by the nonlinear and linear systems.
SpectralField finish_stage(SpectralField& v) {
  dealias_in_place(v);
  return project_barotropic(symmetrize(v, Symmetry::even));
}

/// exp(-|k|^2 tau) for the stage offsets of one step length.
struct StageFactors {
  GridPtr grid;
  double dt = 0.0;
  // e1[i] spans c_{i+1} - c_i, e2[i] spans c_{i+1} - c_{i-1} (i >= 1).
  std::array<std::vector<double>, 3> e1, e2;
};

std::shared_ptr<const StageFactors> stage_factors(const GridPtr& gp, double dt) {
  const Grid& g = *gp;
  static std::mutex mu;
  static std::vector<std::shared_ptr<const StageFactors>> cache;
  std::lock_guard lock(mu);
  for (const auto& f : cache) {
    if (f->grid == gp && f->dt == dt) return f;
  }
  auto f = std::make_shared<StageFactors>();
  f->grid = gp;
  f->dt = dt;
  const auto& k2 = g.k_squared();
  auto table = [&](double tau) {
    std::vector<double> e(k2.size());
    for (std::size_t n = 0; n < k2.size(); ++n) e[n] = std::exp(-k2[n] * tau);
    return e;
  };
  const auto& c = Rk3::c;
  for (int i = 0; i < 3; ++i) {
    f->e1[i] = table((c[i + 1] - c[i]) * dt);
    f->e2[i] = i == 0 ? f->e1[i] : table((c[i + 1] - c[i - 1]) * dt);
  }
  if (cache.size() >= 8) cache.erase(cache.begin());
  cache.push_back(f);
  return f;
}

/// v <- E1 (v + dt gamma_i n1) + dt zeta_i E2 n2, then the stage projections.
void advance_stage(SpectralField& v, const SpectralField& n1, const SpectralField& n2,
                   const StageFactors& f, int i, double dt) {
  for (int c = 0; c < v.components(); ++c) {
    kernels::omp::rk_stage(v.component(c), n1.component(c), n2.component(c),
                           f.e1[i], f.e2[i], dt * Rk3::gamma[i], dt * Rk3::zeta[i]);
  }
  v = finish_stage(v);
}

void check_finite(const SpectralField& v, const SolverState& last_good) {
  for (const Complex& c : v.data()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw BlowUpError("step: non-finite values at t = " + std::to_string(last_good.t),
                        last_good);
    }
  }
}

}  // namespace

SolverState make_state(const SpectralField& v0, const PhysicsParams& params, double t0) {
  validate(params);
  require_velocity(v0, "make_state");
  if (v0.grid().h() != params.h) throw ConfigError("make_state: grid height differs from h");
  SpectralField v = v0;
  return {finish_stage(v), t0, params};
}

DriverPtr make_driver(const SpectralField& v, double t) {
  require_velocity(v, "make_driver");
  auto d = std::make_shared<DriverFields>();
  d->t = t;
  d->v = v;
  d->w = recover_w(v);
  d->v_phys = to_physical(v);
  d->w_phys = to_physical(d->w);
  return d;
}

SpectralField advection_rhs(const SpectralField& part, const DriverFields& d,
                            double f0, PressureSplit* pressure) {
  require_velocity(part, "advection_rhs");
  if (!part.grid().same_shape(d.v.grid())) throw ConfigError("advection_rhs: grid mismatch");
  const GridPtr& gp = part.grid_ptr();

  PhysicalField own;
  if (&part != &d.v) own = to_physical(part);
  const PhysicalField& p_phys = (&part == &d.v) ? d.v_phys : own;

  const PhysicalField px = to_physical(derivative(part, Axis::x));
  const PhysicalField py = to_physical(derivative(part, Axis::y));
  const PhysicalField pz = to_physical(derivative(part, Axis::z));
  PhysicalField adv(gp, 2);
  for (int c = 0; c < 2; ++c) {
    kernels::omp::dot3(d.v_phys.component(0), px.component(c), d.v_phys.component(1),
                       py.component(c), d.w_phys.component(0), pz.component(c),
                       adv.component(c));
  }
  PressureSplit p = solve_linear_pressure(part, p_phys, d.v_phys, f0);

  SpectralField n = to_spectral(adv);
  n += p.total.gradient();
  n *= -1.0;
  if (f0 != 0.0) {
    auto n1 = n.component(0), n2 = n.component(1);
    const auto u1 = part.component(0), u2 = part.component(1);
    for (std::size_t k = 0; k < n1.size(); ++k) {
      n1[k] += f0 * u2[k];
      n2[k] -= f0 * u1[k];
    }
  }
  if (pressure) *pressure = std::move(p);
  dealias_in_place(n);
  return symmetrize(n, Symmetry::even);
}

SpectralField rhs_nonlinear(const SpectralField& v, const PhysicsParams& params) {
  const DriverPtr d = make_driver(v, 0.0);
  return advection_rhs(d->v, *d, params.f0);
}

double cfl_number(const PhysicalField& v_phys, double dt) {
  const Grid& g = v_phys.grid();
  const double vmax = kernels::omp::max_abs(v_phys.component(0), v_phys.component(1));
  const int nmax = std::max({g.nx(), g.ny(), g.nz()});
  return vmax * dt * 2.0 * std::numbers::pi * nmax / 3.0;
}

SolverState step(const SolverState& s, const StepControl& ctl, StepInfo* info) {
  validate(ctl);
  require_velocity(s.v, "step");
  const double dt = ctl.dt;
  const auto factors = stage_factors(s.v.grid_ptr(), dt);

  StageDrivers sd{s.t, dt, {}};
  SpectralField v = s.v;
  SpectralField n_prev, n_first;
  try {
    for (int i = 0; i < 3; ++i) {
      sd.stages[i] = make_driver(v, s.t + Rk3::c[i] * dt);
      const DriverFields& d = *sd.stages[i];
      SpectralField n = advection_rhs(d.v, d, s.params.f0);
      advance_stage(v, n, i == 0 ? n : n_prev, *factors, i, dt);
      check_finite(v, s);
      if (i == 0) n_first = n;
      n_prev = std::move(n);
    }
  } catch (const DataError& e) {
    // Overflow inside a stage surfaces as non-finite transform input.
    throw BlowUpError(std::string("step: ") + e.what(), s);
  }
  if (info) {
    info->cfl = cfl_number(sd.stages[0]->v_phys, dt);
    info->drivers = std::move(sd);
    info->rhs0 = std::move(n_first);
  }
  return {std::move(v), s.t + dt, s.params};
}

SpectralField step_linear(const SpectralField& part, double t,
                          const StageDrivers& drivers, const StepControl& ctl,
                          const PhysicsParams& params, SpectralField* rhs0) {
  validate(ctl);
  require_velocity(part, "step_linear");
  const double dt = ctl.dt;
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (std::abs(drivers.t0 - t) > tol || std::abs(drivers.dt - dt) > 1e-12 * dt) {
    throw SchedulingError("step_linear: drivers belong to a different step");
  }
  for (int i = 0; i < 3; ++i) {
    if (!drivers.stages[i] ||
        std::abs(drivers.stages[i]->t - (t + Rk3::c[i] * dt)) > tol) {
      throw SchedulingError("step_linear: driver missing at stage " + std::to_string(i));
    }
  }
  const auto factors = stage_factors(part.grid_ptr(), dt);
  SpectralField v = part;
  SpectralField n_prev;
  for (int i = 0; i < 3; ++i) {
    SpectralField n = advection_rhs(v, *drivers.stages[i], params.f0);
    advance_stage(v, n, i == 0 ? n : n_prev, *factors, i, dt);
    if (i == 0 && rhs0) *rhs0 = n;
    n_prev = std::move(n);
  }
  for (const Complex& c : v.data()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw BlowUpError("step_linear: non-finite values",
                        SolverState{part, t, params});
    }
  }
  return v;
}

namespace {

/// Per-mode weights of the dissipation quadrature for one step length.
struct DissipationWeights {
  GridPtr grid;
  double dt = 0.0;
  std::vector<double> w0, wd, w1;
};

/// Moments of k^2 e^{-2 k^2 s} against 1, s/dt and (s/dt)^2 over a step,
/// combined into the weights of e0, g'(0) and e1 (x = 2 k^2 dt).
void moment_weights(double x, double dt, double& w0, double& wd, double& w1) {
  // I_n = int_0^x u^n e^{-u} du; s_n = e^x I_n / n! = sum_{j>n} x^j / j!.
  double i0, i1, i2, s2;
  if (x < 30.0) {
    double term = x, s0 = 0.0, s1 = 0.0;
    s2 = 0.0;
    for (int j = 1; j < 400; ++j) {
      if (j > 1) term *= x / j;
      s0 += term;
      if (j > 1) s1 += term;
      if (j > 2) s2 += term;
      if (j > x && term < 1e-18 * s0) break;
    }
    const double em = std::exp(-x);
    i0 = em * s0;
    i1 = em * s1;
    i2 = 2.0 * em * s2;
  } else {
    const double em = std::exp(-x);
    i0 = -std::expm1(-x);
    i1 = 1.0 - em * (1.0 + x);
    i2 = 2.0 - em * (x * x + 2.0 * x + 2.0);
    s2 = x < 700.0 ? std::exp(x) * (1.0 - em * (1.0 + x + 0.5 * x * x))
                   : std::numeric_limits<double>::infinity();
  }
  const double alpha = 0.5 * i0;
  const double beta = i1 / (2.0 * x);
  const double m2 = i2 / (2.0 * x * x);
  w0 = alpha - m2;
  wd = dt * (beta - m2);
  w1 = s2 / (x * x);
}

std::shared_ptr<const DissipationWeights> dissipation_weights(const GridPtr& gp, double dt) {
  static std::mutex mu;
  static std::vector<std::shared_ptr<const DissipationWeights>> cache;
  std::lock_guard lock(mu);
  for (const auto& w : cache) {
    if (w->grid == gp && w->dt == dt) return w;
  }
  auto w = std::make_shared<DissipationWeights>();
  w->grid = gp;
  w->dt = dt;
  const auto& k2 = gp->k_squared();
  w->w0.assign(k2.size(), 0.0);
  w->wd.assign(k2.size(), 0.0);
  w->w1.assign(k2.size(), 0.0);
  for (std::size_t n = 0; n < k2.size(); ++n) {
    if (k2[n] > 0.0) moment_weights(2.0 * k2[n] * dt, dt, w->w0[n], w->wd[n], w->w1[n]);
  }
  if (cache.size() >= 8) cache.erase(cache.begin());
  cache.push_back(w);
  return w;
}

}  // namespace

double step_dissipation(const SpectralField& v0, const SpectralField& v1,
                        const SpectralField& n0, double dt) {
  if (!v0.grid().same_shape(v1.grid()) || !v0.grid().same_shape(n0.grid()) ||
      v0.components() != v1.components() || v0.components() != n0.components()) {
    throw ConfigError("step_dissipation: operand mismatch");
  }
  const Grid& g = v0.grid();
  const auto w = dissipation_weights(v0.grid_ptr(), dt);
  const auto& mult = g.multiplicity_table();
  double total = 0.0;
  for (int c = 0; c < v0.components(); ++c) {
    const auto a = v0.component(c), b = v1.component(c), r = n0.component(c);
    for (std::size_t n = 0; n < mult.size(); ++n) {
      const double e0 = std::norm(a[n]);
      const double e1 = std::norm(b[n]);
      const double d0 = 2.0 * (std::conj(a[n]) * r[n]).real();
      double s = e0 * w->w0[n] + d0 * w->wd[n];
      if (e1 > 0.0) s += e1 * w->w1[n];
      total += mult[n] * s;
    }
  }
  return total * g.volume();
}

std::size_t step_count(double t0, double t_end, double dt) {
  if (t_end < t0) throw ConfigError("integrate: t_end before t0");
  if (t_end == t0) return 0;
  const double r = (t_end - t0) / dt;
  const double n = std::ceil(r - 1e-9 * std::max(1.0, r));
  return static_cast<std::size_t>(std::max(1.0, n));
}

Trajectory integrate(const SolverState& s0, const StepControl& ctl, double t_end,
                     const IntegrateOptions& opts) {
  validate(ctl);
  const std::size_t n = step_count(s0.t, t_end, ctl.dt);
  Trajectory tr{s0, {}, 0, 0, {}};

  NormRecord r0 = norms(s0.v, opts.qs);
  r0.t = s0.t;
  tr.series.records.push_back(r0);
  const double e0 = 0.5 * r0.l2 * r0.l2;
  double dissipation = 0.0;
  double dz_int = 0.0;
  double prev_grad_dz2 = grad_norm_squared(derivative(s0.v, Axis::z));

  std::vector<double> snap_times = opts.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;
  auto dump = [&](const SolverState& s) {
    while (next_snap < snap_times.size() && s.t >= snap_times[next_snap] - 1e-12) {
      if (!opts.snapshot_dir.empty()) {
        char name[32];
        std::snprintf(name, sizeof name, "v_%03zu.hsf", next_snap);
        const auto path = opts.snapshot_dir / name;
        write_snapshot(path, s.v);
        tr.snapshots.push_back(path);
      }
      ++next_snap;
    }
  };
  dump(s0);

  bool warned = false;
  for (std::size_t k = 0; k < n; ++k) {
    StepControl c = ctl;
    if (k + 1 == n) c.dt = t_end - tr.final.t;
    StepInfo info;
    SolverState next;
    try {
      next = step(tr.final, c, &info);
    } catch (BlowUpError& e) {
      e.partial = tr.series;
      throw;
    }
    if (k + 1 == n) next.t = t_end;

    const double d = step_dissipation(tr.final.v, next.v, info.rhs0, c.dt);
    dissipation += d;
    NormRecord r = norms(next.v, opts.qs);
    r.t = next.t;
    r.dissipation = dissipation;
    const double prev_l2 = tr.series.back().l2;
    r.energy_residual = 0.5 * r.l2 * r.l2 + dissipation - e0;
    r.step_energy_residual = 0.5 * r.l2 * r.l2 - 0.5 * prev_l2 * prev_l2 + d;
    const double grad_dz2 = grad_norm_squared(derivative(next.v, Axis::z));
    dz_int += 0.5 * c.dt * (prev_grad_dz2 + grad_dz2);
    prev_grad_dz2 = grad_dz2;
    r.grad_dz_vbar_int = dz_int;
    tr.series.records.push_back(r);

    if (info.cfl > ctl.cfl_target) {
      ++tr.cfl_warnings;
      if (!warned) {
        std::cerr << "warning: CFL number " << info.cfl << " exceeds "
                  << ctl.cfl_target << " at t = " << tr.final.t << '\n';
        warned = true;
      }
    }
    tr.final = std::move(next);
    ++tr.steps;
    dump(tr.final);
    if (opts.on_step) opts.on_step(tr.final, info);
  }
  return tr;
}

}  // namespace hydrostat
