#include "hydrostat/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hydrostat/snapshot.hpp"
#include "hydrostat/spectral_ops.hpp"
#include "hydrostat/transform.hpp"

namespace hydrostat {

namespace {

constexpr double pi = std::numbers::pi;

void require_velocity(const SpectralField& v, const char* what) {
  if (v.components() != 2) throw ArityError(std::string(what) + ": need 2 components");
}

template <typename F1, typename F2>
SpectralField sampled(const GridPtr& g, F1&& f1, F2&& f2) {
  std::vector<SpectralField> parts{to_spectral(sample(g, f1), Symmetry::even),
                                   to_spectral(sample(g, f2), Symmetry::even)};
  SpectralField v = stack(parts);
  v.set_symmetry(Symmetry::even);
  return v;
}

}  // namespace

SpectralField analytic_field(const GridPtr& g, const AnalyticParams& p) {
  const double A = p.amplitude;
  const double h = g->h();
  auto zero = [](double, double, double) { return 0.0; };
  if (p.name == "zero") return SpectralField(g, 2, Symmetry::even);
  if (p.name == "shear") {
    return sampled(g, zero, [A](double x, double, double) { return A * std::cos(2 * pi * x); });
  }
  if (p.name == "rotation") {
    return sampled(g, [A, h](double, double, double z) { return A * std::cos(pi * z / h); }, zero);
  }
  if (p.name == "vortex") {
    return sampled(
        g,
        [A, h](double x, double y, double z) {
          return A * (std::sin(2 * pi * x) * std::cos(2 * pi * y) * (1 + std::cos(pi * z / h)) +
                      0.5 * std::cos(2 * pi * x) * std::cos(pi * z / h));
        },
        [A, h](double x, double y, double z) {
          return A * (-std::cos(2 * pi * x) * std::sin(2 * pi * y) * (1 + std::cos(pi * z / h)) +
                      0.3 * std::sin(2 * pi * y) * std::cos(2 * pi * z / h));
        });
  }
  throw ConfigError("unknown analytic field '" + p.name + "'");
}

void validate(const InitialDataSpec& spec, double h) {
  if (!(h > 0.0)) throw ConfigError("initial data: h must be positive");
  if (spec.epsilon < 0.0) throw ParameterError("initial data: epsilon must be >= 0");
  if (spec.epsilon > 0.0 && spec.epsilon >= std::min(1.0, 2.0 * h)) {
    throw ParameterError("initial data: epsilon must be below min(1, 2h)");
  }
  if (spec.kind == InitialKind::layered) {
    const LayeredParams& p = spec.layered;
    if (!(p.delta > 0.0)) throw ConfigError("layered data: delta must be positive");
    if (!(p.eta > 0.0) || p.eta > h) throw ConfigError("layered data: eta must lie in (0, h]");
  }
  if (spec.kind == InitialKind::snapshot && spec.snapshot.empty()) {
    throw ConfigError("initial data: snapshot path missing");
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kBumpNodes = 2048;

/// Trapezoid nodes and bump values on [0, 1]; the bump vanishes to all
/// orders at 1, so the rule converges spectrally.
const std::vector<double>& bump_values() {
  static const std::vector<double> vals = [] {
    std::vector<double> v(kBumpNodes + 1, 0.0);
    for (int n = 0; n < kBumpNodes; ++n) {
      const double s = static_cast<double>(n) / kBumpNodes;
      v[n] = std::exp(-1.0 / (1.0 - s * s));
    }
    return v;
  }();
  return vals;
}

}  // namespace

double bump_transform(double k, double eps) {
  if (eps == 0.0 || k == 0.0) return 1.0;
  const auto& phi = bump_values();
  double num = 0.0, den = 0.0;
  for (int n = 0; n <= kBumpNodes; ++n) {
    const double w = n == 0 ? 0.5 : 1.0;
    const double s = static_cast<double>(n) / kBumpNodes;
    num += w * phi[n] * std::cos(k * eps * s);
    den += w * phi[n];
  }
  return num / den;
}

SpectralField mollify(const SpectralField& v0, double eps) {
  const Grid& g = v0.grid();
  if (eps < 0.0) throw ParameterError("mollify: radius must be >= 0");
  if (eps > 0.0 && eps >= std::min(1.0, 2.0 * g.h())) {
    throw ParameterError("mollify: radius must be below min(1, 2h)");
  }
  if (eps == 0.0) return v0;
  std::vector<double> jx(g.nx()), jy(g.ny()), jz(g.nzc());
  for (int i = 0; i < g.nx(); ++i) jx[i] = bump_transform(2 * pi * g.mode_x(i), eps);
  for (int j = 0; j < g.ny(); ++j) jy[j] = bump_transform(2 * pi * g.mode_y(j), eps);
  for (int l = 0; l < g.nzc(); ++l) jz[l] = bump_transform(pi * l / g.h(), eps);
  SpectralField out = v0;
  for (int c = 0; c < out.components(); ++c)
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j)
        for (int l = 0; l < g.nzc(); ++l) out.at(c, i, j, l) *= jx[i] * jy[j] * jz[l];
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> power_cosine_coefficients(double delta, double h, int lmax) {
  if (!(delta > 0.0) || !(h > 0.0) || lmax < 0) {
    throw ParameterError("power_cosine_coefficients: bad arguments");
  }
  std::vector<double> c(lmax + 1);
  c[0] = std::pow(h, delta) / (delta + 1.0);
  boost::math::quadrature::tanh_sinh<double> quad;
  for (int l = 1; l <= lmax; ++l) {
    const double k = pi * l / h;
    // Integrate one half-period at a time so each piece is smooth except
    // for the z^delta endpoint behaviour at 0.
    double sum = 0.0;
    for (int p = 0; p < 2 * l; ++p) {
      const double a = p * h / (2 * l), b = (p + 1) * h / (2 * l);
      sum += quad.integrate(
          [&](double z) { return std::pow(z, delta) * std::cos(k * z); }, a, b, 1e-15);
    }
    c[l] = sum / h;
  }
  return c;
}

SplitData make_layered_data(const GridPtr& grid, const LayeredParams& p) {
  const Grid& g = *grid;
  InitialDataSpec spec;
  spec.kind = InitialKind::layered;
  spec.layered = p;
  validate(spec, g.h());
  int lmax = 0;
  while (lmax + 1 < g.nzc() && g.retained(0, 0, lmax + 1)) ++lmax;

  SplitData out{SpectralField(grid, 2, Symmetry::even), SpectralField(grid, 2, Symmetry::even)};
  const auto power = power_cosine_coefficients(p.delta, g.h(), lmax);
  for (int c = 0; c < 2; ++c) {
    for (int l = 0; l <= lmax; ++l) {
      out.vbar0.set_mode(c, 0, 0, l, p.a[c] * power[l]);
      const double chi = l == 0 ? p.eta / g.h() : std::sin(pi * l * p.eta / g.h()) / (pi * l);
      out.V0.set_mode(c, 0, 0, l, p.sigma[c] * chi);
    }
  }
  return out;
}

SplitData make_initial_data(const GridPtr& grid, const InitialDataSpec& spec) {
  validate(spec, grid->h());
  SplitData d;
  switch (spec.kind) {
    case InitialKind::analytic:
      d = {analytic_field(grid, spec.analytic), SpectralField(grid, 2, Symmetry::even)};
      break;
    case InitialKind::layered:
      d = make_layered_data(grid, spec.layered);
      d.vbar0 += analytic_field(grid, spec.background);
      break;
    case InitialKind::snapshot: {
      SpectralField v = load_spectral(spec.snapshot);
      if (!v.grid().same_shape(*grid)) throw ConfigError("snapshot grid differs from run grid");
      require_velocity(v, "snapshot data");
      SpectralField on_grid(grid, 2, Symmetry::even);
      std::copy(v.data().begin(), v.data().end(), on_grid.data().begin());
      d = {symmetrize(on_grid, Symmetry::even), SpectralField(grid, 2, Symmetry::even)};
      break;
    }
  }
  d.vbar0 = mollify(d.vbar0, spec.epsilon);
  d.V0 = mollify(d.V0, spec.epsilon);
  return d;
}

// ---------------------------------------------------------------------------

DecompositionResult run_decomposition(const SpectralField& vbar0, const SpectralField& V0,
                                      const PhysicsParams& params, const StepControl& ctl,
                                      double t_end, const DecompositionOptions& opts) {
  validate(params);
  validate(ctl);
  require_velocity(vbar0, "run_decomposition");
  require_velocity(V0, "run_decomposition");

  SpectralField vbar = make_state(vbar0, params).v;
  SpectralField V = make_state(V0, params).v;
  DecompositionResult res;
  res.full.final = SolverState{vbar + V, 0.0, params};
  SolverState& s = res.full.final;

  auto record = [&](const SpectralField& v, double t) {
    NormRecord r = norms(v, opts.qs);
    r.t = t;
    r.dz_vbar_l2 = l2_norm(derivative(vbar, Axis::z));
    r.linf_V = linf_norm(V);
    const double nv = r.l2;
    r.recon_residual = nv > 0.0 ? l2_norm(v - (vbar + V)) / nv : l2_norm(vbar + V);
    return r;
  };
  res.series.records.push_back(record(s.v, s.t));
  res.full.series.records.push_back(res.series.back());

  const double e0 = 0.5 * std::pow(l2_norm(s.v), 2);
  const double e0_bar = 0.5 * std::pow(l2_norm(vbar), 2);
  const double e0_V = 0.5 * std::pow(l2_norm(V), 2);
  double diss = 0.0, diss_bar = 0.0, diss_V = 0.0, dz_int = 0.0;
  double prev_gdz = grad_norm_squared(derivative(vbar, Axis::z));

  std::vector<double> snap_times = opts.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;
  auto dump = [&]() {
    while (next_snap < snap_times.size() && s.t >= snap_times[next_snap] - 1e-12) {
      if (!opts.snapshot_dir.empty()) {
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_%03zu.hsf", next_snap);
        for (auto [name, f] : {std::pair{"v", &s.v}, std::pair{"vbar", &vbar}, std::pair{"V", &V}}) {
          const auto path = opts.snapshot_dir / (std::string(name) + suffix);
          write_snapshot(path, *f);
          res.full.snapshots.push_back(path);
        }
      }
      ++next_snap;
    }
  };
  dump();

  const std::size_t n = step_count(0.0, t_end, ctl.dt);
  for (std::size_t k = 0; k < n; ++k) {
    StepControl c = ctl;
    if (k + 1 == n) c.dt = t_end - s.t;
    StepInfo info;
    SolverState next;
    try {
      next = step(s, c, &info);
    } catch (BlowUpError& e) {
      e.partial = res.series;
      throw;
    }
    SpectralField n_bar, n_V;
    SpectralField vbar_next = step_linear(vbar, s.t, info.drivers, c, params, &n_bar);
    SpectralField V_next = step_linear(V, s.t, info.drivers, c, params, &n_V);
    if (k + 1 == n) next.t = t_end;

    diss += step_dissipation(s.v, next.v, info.rhs0, c.dt);
    diss_bar += step_dissipation(vbar, vbar_next, n_bar, c.dt);
    diss_V += step_dissipation(V, V_next, n_V, c.dt);
    vbar = std::move(vbar_next);
    V = std::move(V_next);

    const double prev_l2 = res.series.back().l2;
    NormRecord r = record(next.v, next.t);
    r.dissipation = diss;
    r.energy_residual = 0.5 * r.l2 * r.l2 + diss - e0;
    r.step_energy_residual = 0.5 * (r.l2 * r.l2 - prev_l2 * prev_l2) +
                             step_dissipation(s.v, next.v, info.rhs0, c.dt);
    const double gdz = grad_norm_squared(derivative(vbar, Axis::z));
    dz_int += 0.5 * c.dt * (prev_gdz + gdz);
    prev_gdz = gdz;
    r.grad_dz_vbar_int = dz_int;
    res.max_recon_residual = std::max(res.max_recon_residual, r.recon_residual);
    res.max_energy_residual_vbar =
        std::max(res.max_energy_residual_vbar,
                 std::abs(0.5 * std::pow(l2_norm(vbar), 2) + diss_bar - e0_bar));
    res.max_energy_residual_V = std::max(
        res.max_energy_residual_V, std::abs(0.5 * std::pow(l2_norm(V), 2) + diss_V - e0_V));
    res.series.records.push_back(r);
    res.full.series.records.push_back(r);

    s = std::move(next);
    ++res.full.steps;
    if (info.cfl > ctl.cfl_target) ++res.full.cfl_warnings;
    dump();
  }
  res.max_recon_residual = std::max(res.max_recon_residual, res.series.records[0].recon_residual);

  res.parts.driver = make_driver(s.v, s.t);
  PressureSplit pbar{Pressure2D(s.v.grid_ptr()), Pressure2D(s.v.grid_ptr()),
                     Pressure2D(s.v.grid_ptr())};
  PressureSplit pV = pbar;
  advection_rhs(vbar, *res.parts.driver, params.f0, &pbar);
  advection_rhs(V, *res.parts.driver, params.f0, &pV);
  res.parts.Pbar = std::move(pbar.total);
  res.parts.PV = std::move(pV.total);
  res.parts.vbar = std::move(vbar);
  res.parts.V = std::move(V);
  return res;
}

}  // namespace hydrostat
