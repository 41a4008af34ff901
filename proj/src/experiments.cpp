#include "hydrostat/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "hydrostat/kernels.hpp"
#include "hydrostat/spectral_ops.hpp"

namespace hydrostat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Upper limit standing in for "finite".
constexpr double kHuge = 1e300;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? kNaN : kHuge;
  return a / b;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::isnan(x) ? x : std::max(m, std::abs(x));
  return m;
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::isnan(x) ? x : std::max(m, x);
  return m;
}

Check csv_check(std::string name, double value, double lo, double hi, Reduce reduce,
                std::string csv, std::string column, std::string csv2 = {}) {
  Check c = make_check(std::move(name), value, lo, hi);
  c.reduce = reduce;
  c.csv = std::move(csv);
  c.column = std::move(column);
  c.csv2 = std::move(csv2);
  return c;
}

std::string reduce_name(Reduce r) {
  switch (r) {
    case Reduce::none: return "none";
    case Reduce::max: return "max";
    case Reduce::max_abs: return "max_abs";
    case Reduce::last: return "last";
    case Reduce::ratio_max_abs: return "ratio_max_abs";
  }
  return "none";
}

Reduce reduce_from(const std::string& s) {
  if (s == "none") return Reduce::none;
  if (s == "max") return Reduce::max;
  if (s == "max_abs") return Reduce::max_abs;
  if (s == "last") return Reduce::last;
  if (s == "ratio_max_abs") return Reduce::ratio_max_abs;
  throw DataError("report: unknown reduction '" + s + "'");
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::vector<double> column_of(const DiagnosticsSeries& s, double NormRecord::*field) {
  std::vector<double> out;
  for (const auto& r : s.records) out.push_back(r.*field);
  return out;
}

fs::path snapshot_dir(const RunConfig& cfg, const fs::path& out) {
  if (cfg.snapshot_times.empty()) return {};
  fs::create_directories(out / "snapshots");
  return out / "snapshots";
}

void add_snapshots(Report& r, const std::vector<fs::path>& paths, const fs::path& out) {
  for (const auto& p : paths) r.files.push_back(fs::relative(p, out).generic_string());
}

SpectralField initial_velocity(const GridPtr& g, const InitialDataSpec& spec) {
  const SplitData d = make_initial_data(g, spec);
  return d.vbar0 + d.V0;
}

double evaluate(const Check& c, const fs::path& dir) {
  switch (c.reduce) {
    case Reduce::none: return c.value;
    case Reduce::max: return max_of(read_csv_column(dir / c.csv, c.column));
    case Reduce::max_abs: return max_abs(read_csv_column(dir / c.csv, c.column));
    case Reduce::last: {
      const auto col = read_csv_column(dir / c.csv, c.column);
      if (col.empty()) throw DataError("report: empty column " + c.column);
      return col.back();
    }
    case Reduce::ratio_max_abs:
      return safe_ratio(max_abs(read_csv_column(dir / c.csv, c.column)),
                        max_abs(read_csv_column(dir / c.csv2, c.column)));
  }
  return kNaN;
}

}  // namespace

Check make_check(std::string name, double value, double lo, double hi) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.lo = lo;
  c.hi = hi;
  c.pass = !std::isnan(value) && value >= lo && value <= hi;
  return c;
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool ReplayResult::all_pass() const {
  return matches_manifest &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json to_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"lo", number(c.lo)},
                      {"hi", number(c.hi)},
                      {"pass", c.pass},
                      {"reduce", reduce_name(c.reduce)},
                      {"csv", c.csv},
                      {"column", c.column},
                      {"csv2", c.csv2}});
  }
  return {{"experiment", r.experiment},
          {"metrics", r.metrics},
          {"checks", checks},
          {"files", r.files}};
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.experiment = j.at("experiment").get<std::string>();
    r.metrics = j.at("metrics");
    r.files = j.at("files").get<std::vector<std::string>>();
    for (const auto& c : j.at("checks")) {
      Check k = make_check(c.at("name").get<std::string>(), number_from(c.at("value")),
                           number_from(c.at("lo")), number_from(c.at("hi")));
      k.reduce = reduce_from(c.at("reduce").get<std::string>());
      k.csv = c.at("csv").get<std::string>();
      k.column = c.at("column").get<std::string>();
      k.csv2 = c.at("csv2").get<std::string>();
      r.checks.push_back(std::move(k));
    }
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("report: malformed json: ") + e.what());
  }
}

void write_table(const fs::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

std::vector<double> read_csv_column(const fs::path& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) names.push_back(item);
  }
  const auto it = std::find(names.begin(), names.end(), column);
  if (it == names.end()) throw DataError(path.string() + ": no column " + column);
  const std::size_t idx = it - names.begin();
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string item;
    for (std::size_t i = 0; i <= idx; ++i) {
      if (!std::getline(ss, item, ',')) throw DataError(path.string() + ": short row");
    }
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DataError(path.string() + ": bad number '" + item + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Report exp_energy_identity(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  Report rep;
  rep.experiment = to_string(cfg.experiment);
  const GridPtr g = make_run_grid(cfg);
  const SolverState s0 = make_state(initial_velocity(g, cfg.initial), cfg.physics);

  std::vector<double> dts, residuals;
  std::vector<std::string> names;
  for (int i = 0; i <= cfg.energy.halvings; ++i) {
    StepControl c = cfg.step;
    c.dt = cfg.step.dt / std::pow(2.0, i);
    IntegrateOptions o;
    o.qs = cfg.qs;
    if (i == 0) {
      o.snapshot_times = cfg.snapshot_times;
      o.snapshot_dir = snapshot_dir(cfg, out);
    }
    const Trajectory tr = integrate(s0, c, cfg.t_end, o);
    const std::string name = i == 0 ? "series.csv" : "series_dt" + std::to_string(i) + ".csv";
    tr.series.write_csv(out / name);
    rep.files.push_back(name);
    add_snapshots(rep, tr.snapshots, out);
    names.push_back(name);
    dts.push_back(c.dt);
    residuals.push_back(max_abs(column_of(tr.series, &NormRecord::energy_residual)));
    if (i == 0) {
      rep.metrics["steps"] = tr.steps;
      rep.metrics["cfl_warnings"] = tr.cfl_warnings;
      rep.metrics["final_l2"] = tr.series.back().l2;
    }
  }
  rep.metrics["dt"] = dts;
  rep.metrics["max_energy_residual"] = residuals;

  rep.checks.push_back(csv_check("energy_residual", residuals[0], 0.0, 1e-7, Reduce::max_abs,
                                 names[0], "energy_residual"));
  std::vector<double> ratios;
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    if (residuals[i - 1] == 0.0 && residuals[i] == 0.0) continue;
    const double r = safe_ratio(residuals[i - 1], residuals[i]);
    ratios.push_back(r);
    rep.checks.push_back(csv_check("order_ratio_" + std::to_string(i), r, 6.0, kHuge,
                                   Reduce::ratio_max_abs, names[i - 1], "energy_residual",
                                   names[i]));
  }
  rep.metrics["order_ratios"] = ratios;
  return rep;
}

namespace {

double fit_c0(const DiagnosticsSeries& s, double n4, double v0_inf) {
  const auto t = column_of(s, &NormRecord::t);
  const auto v = column_of(s, &NormRecord::linf_V);
  EnvelopeContext ctx;
  ctx.scale = v0_inf;
  ctx.n4 = n4;
  return fit_envelope(t, v, EnvelopeForm::mu, ctx);
}

}  // namespace

Report exp_decomposition(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  Report rep;
  rep.experiment = to_string(cfg.experiment);

  auto run = [&](int nz, const std::string& csv, bool snapshots) {
    const GridPtr g = make_run_grid(cfg, nz);
    const SplitData d = make_initial_data(g, cfg.initial);
    DecompositionOptions o;
    o.qs = cfg.qs;
    if (snapshots) {
      o.snapshot_times = cfg.snapshot_times;
      o.snapshot_dir = snapshot_dir(cfg, out);
    }
    DecompositionResult r = run_decomposition(d.vbar0, d.V0, cfg.physics, cfg.step, cfg.t_end, o);
    r.series.write_csv(out / csv);
    rep.files.push_back(csv);
    add_snapshots(rep, r.full.snapshots, out);
    return r;
  };

  const DecompositionResult r = run(0, "series.csv", true);
  const NormRecord& first = r.series.records.front();
  const double v0_inf = first.linf_V;
  const double sup_v = max_of(column_of(r.series, &NormRecord::linf_V));
  rep.metrics["steps"] = r.full.steps;
  rep.metrics["max_recon_residual"] = r.max_recon_residual;
  rep.metrics["sup_linf_V"] = sup_v;
  rep.metrics["linf_V0"] = v0_inf;
  rep.metrics["l4_v0"] = first.l4;
  rep.metrics["sup_dz_vbar_l2"] = max_of(column_of(r.series, &NormRecord::dz_vbar_l2));
  rep.metrics["int_grad_dz_vbar_sq"] = r.series.back().grad_dz_vbar_int;
  rep.metrics["max_energy_residual_vbar"] = r.max_energy_residual_vbar;
  rep.metrics["max_energy_residual_V"] = r.max_energy_residual_V;

  rep.checks.push_back(csv_check("recon_residual", r.max_recon_residual, 0.0, 1e-8, Reduce::max,
                                 "series.csv", "recon_residual"));
  if (v0_inf == 0.0) {
    rep.checks.push_back(
        csv_check("V_identically_zero", sup_v, 0.0, 0.0, Reduce::max_abs, "series.csv", "linf_V"));
    return rep;
  }
  rep.checks.push_back(
      csv_check("linf_V_bounded", sup_v, 0.0, kHuge, Reduce::max_abs, "series.csv", "linf_V"));
  const double c0 = fit_c0(r.series, first.l4, v0_inf);
  rep.metrics["fitted_C0"] = number(c0);
  rep.checks.push_back(make_check("fitted_C0_finite", c0, 0.0, kHuge));

  if (cfg.decomposition.refine_nz > 0) {
    const DecompositionResult rr = run(cfg.decomposition.refine_nz, "series_refined.csv", false);
    const NormRecord& f2 = rr.series.records.front();
    const double c0_ref = fit_c0(rr.series, f2.l4, f2.linf_V);
    rep.metrics["refined_nz"] = cfg.decomposition.refine_nz;
    rep.metrics["fitted_C0_refined"] = number(c0_ref);
    rep.metrics["max_recon_residual_refined"] = rr.max_recon_residual;
    rep.checks.push_back(make_check("fitted_C0_refinement_ratio", safe_ratio(c0_ref, c0), 0.8, 1.2));
  }
  return rep;
}

Report exp_stability(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  Report rep;
  rep.experiment = to_string(cfg.experiment);
  const GridPtr g = make_run_grid(cfg);
  const SpectralField base = initial_velocity(g, cfg.initial);
  LayeredParams lp;
  lp.a = {0.0, 0.0};
  lp.eta = cfg.stability.eta;
  lp.sigma = {cfg.stability.perturbation, cfg.stability.perturbation};
  const SpectralField pert = mollify(make_layered_data(g, lp).V0, cfg.initial.epsilon);

  SolverState s0 = make_state(base, cfg.physics);
  SolverState s1 = make_state(base + pert, cfg.physics);
  SolverState s2 = make_state(base + 0.5 * pert, cfg.physics);

  auto mhat = [](const SpectralField& v) {
    const SpectralField dz = derivative(v, Axis::z);
    return (1.0 + l2_norm_squared(dz)) * (1.0 + grad_norm_squared(v) + grad_h_norm_squared(dz));
  };
  std::vector<std::vector<double>> rows;
  std::vector<double> ts, d1s, integrals;
  double integral = 0.0, m_prev = mhat(s0.v);
  auto record = [&](double m) {
    const double d1 = l2_norm(s1.v - s0.v), d2 = l2_norm(s2.v - s0.v);
    rows.push_back({s0.t, d1, d2, m, integral});
    ts.push_back(s0.t);
    d1s.push_back(d1);
    integrals.push_back(integral);
  };
  record(m_prev);

  const std::size_t n = step_count(0.0, cfg.t_end, cfg.step.dt);
  for (std::size_t k = 0; k < n; ++k) {
    StepControl c = cfg.step;
    if (k + 1 == n) c.dt = cfg.t_end - s0.t;
    s0 = step(s0, c);
    s1 = step(s1, c);
    s2 = step(s2, c);
    if (k + 1 == n) s0.t = s1.t = s2.t = cfg.t_end;
    const double m = mhat(s0.v);
    integral += 0.5 * c.dt * (m_prev + m);
    m_prev = m;
    record(m);
  }
  write_table(out / "stability.csv", {"t", "diff", "diff_half", "mhat", "mhat_integral"}, rows);
  rep.files.push_back("stability.csv");

  const double d1 = rows.back()[1], d2 = rows.back()[2];
  rep.metrics["initial_difference"] = rows.front()[1];
  rep.metrics["final_difference"] = d1;
  rep.metrics["final_difference_half"] = d2;
  rep.metrics["mhat_integral"] = integral;
  if (cfg.stability.perturbation == 0.0) {
    rep.checks.push_back(
        csv_check("identical_trajectories", max_abs(d1s), 0.0, 0.0, Reduce::max_abs, "stability.csv",
                  "diff"));
    return rep;
  }
  const double ratio = safe_ratio(d1, d2);
  rep.metrics["final_difference_ratio"] = number(ratio);
  rep.checks.push_back(make_check("difference_ratio", ratio, 1.5, 2.5));
  rep.checks.push_back(
      csv_check("difference_bounded", max_abs(d1s), 0.0, kHuge, Reduce::max_abs, "stability.csv",
                "diff"));
  std::vector<double> amplification;
  for (double d : d1s) amplification.push_back(d / d1s.front());
  EnvelopeContext ctx;
  ctx.integral = integrals;
  const double cg = fit_envelope(ts, amplification, EnvelopeForm::gronwall, ctx);
  rep.metrics["gronwall_constant"] = number(cg);
  rep.checks.push_back(make_check("gronwall_constant_finite", cg, 0.0, kHuge));
  return rep;
}

Report exp_mollification_convergence(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  const auto& eps = cfg.mollification.epsilons;
  if (eps.size() < 2) throw ConfigError("mollification.epsilons needs at least two radii");
  Report rep;
  rep.experiment = to_string(cfg.experiment);
  std::vector<double> times = cfg.mollification.times;
  if (times.empty()) times = {0.5 * cfg.t_end, cfg.t_end};
  std::sort(times.begin(), times.end());

  const GridPtr g = make_run_grid(cfg);
  std::vector<std::vector<SpectralField>> captured(eps.size());
  for (std::size_t e = 0; e < eps.size(); ++e) {
    InitialDataSpec spec = cfg.initial;
    spec.epsilon = eps[e];
    const SolverState s0 = make_state(initial_velocity(g, spec), cfg.physics);
    auto& cap = captured[e];
    IntegrateOptions o;
    o.on_step = [&](const SolverState& s, const StepInfo&) {
      while (cap.size() < times.size() && s.t >= times[cap.size()] - 1e-12) cap.push_back(s.v);
    };
    integrate(s0, cfg.step, cfg.t_end, o);
    if (cap.size() != times.size()) throw Error("mollification: missed a comparison time");
  }

  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  json dist = json::array();
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<double> d;
    for (std::size_t e = 0; e + 1 < eps.size(); ++e) {
      d.push_back(l2_norm(captured[e][k] - captured[e + 1][k]));
      rows.push_back({eps[e], eps[e + 1], times[k], d.back()});
    }
    for (std::size_t e = 1; e < d.size(); ++e) worst = std::max(worst, safe_ratio(d[e], d[e - 1]));
    dist.push_back({{"t", times[k]}, {"distances", d}});
  }
  write_table(out / "mollification.csv", {"eps_a", "eps_b", "t", "distance"}, rows);
  rep.files.push_back("mollification.csv");
  rep.metrics["epsilons"] = eps;
  rep.metrics["distances"] = dist;
  rep.metrics["max_successive_ratio"] = number(worst);
  if (eps.size() > 2) {
    rep.checks.push_back(make_check("cauchy_decrease", worst, 0.0, std::nextafter(1.0, 0.0)));
  }
  return rep;
}

Report exp_lemma_suite(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  Report rep;
  rep.experiment = to_string(cfg.experiment);
  const LemmaSettings& L = cfg.lemma;
  std::mt19937_64 rng(cfg.seed);

  int violations = 0, hypothesis = 0, exponent_failures = 0;
  double a1_err = 0.0;
  std::uniform_real_distribution<double> m0_dist(2.0, L.moser_m0_max), d0_dist(0.0, 1.0);
  std::uniform_int_distribution<int> k_dist(1, L.moser_kmax);
  for (int n = 0; n < L.moser_instances; ++n) {
    const double M0 = m0_dist(rng);
    double d0 = 0.0;
    while (d0 == 0.0) d0 = d0_dist(rng);
    const int k = k_dist(rng);
    const IterationInstance inst = random_iteration_instance(rng, M0, d0, k, n % 4 == 0);
    const MoserVerdict v = moser_bound_check(inst);
    if (v.status == MoserStatus::bound_violated) ++violations;
    if (v.status == MoserStatus::hypothesis_violated) ++hypothesis;
    a1_err = std::max(a1_err, std::abs(std::expm1(v.log_bound.at(0) - std::log(M0 * d0 * d0))));
  }
  for (int k = 1; k <= L.moser_kmax; ++k) exponent_failures += !moser_exponent_inequality(k);
  rep.metrics["moser_instances"] = L.moser_instances;
  rep.metrics["moser_bound_violations"] = violations;
  rep.metrics["moser_hypothesis_violations"] = hypothesis;
  rep.metrics["moser_a1_max_relative_error"] = a1_err;
  rep.checks.push_back(make_check("moser_bound_violations", violations, 0, 0));
  rep.checks.push_back(make_check("moser_hypothesis_violations", hypothesis, 0, 0));
  rep.checks.push_back(make_check("moser_a1_identity", a1_err, 0.0, 1e-14));
  rep.checks.push_back(make_check("moser_exponent_inequality", exponent_failures, 0, 0));

  std::vector<std::vector<double>> rows;
  std::vector<std::array<double, 2>> maxima;
  for (int nz : L.nz) {
    const GridPtr g = make_grid(L.nx, L.nx, nz, cfg.physics.h);
    std::mt19937_64 lrng(cfg.seed + 1);
    std::array<double, 2> m{0.0, 0.0};
    for (int n = 0; n < L.triples; ++n) {
      const SpectralField phi = random_band_limited(g, L.band, lrng);
      const SpectralField psi = random_band_limited(g, L.band, lrng);
      const SpectralField chi = random_band_limited(g, L.band, lrng);
      const LadyzhenskayaResult r = ladyzhenskaya_ratio(phi, psi, chi);
      rows.push_back({static_cast<double>(nz), static_cast<double>(n), r.ratio_first,
                      r.ratio_second});
      m[0] = std::max(m[0], r.ratio_first);
      m[1] = std::max(m[1], r.ratio_second);
    }
    maxima.push_back(m);
  }
  write_table(out / "ladyzhenskaya.csv", {"nz", "triple", "ratio_first", "ratio_second"}, rows);
  rep.files.push_back("ladyzhenskaya.csv");
  const double drift = std::max(std::abs(safe_ratio(maxima[1][0], maxima[0][0]) - 1.0),
                                std::abs(safe_ratio(maxima[1][1], maxima[0][1]) - 1.0));
  rep.metrics["ladyzhenskaya_max_ratio"] = {{"nz", L.nz},
                                            {"first", {maxima[0][0], maxima[1][0]}},
                                            {"second", {maxima[0][1], maxima[1][1]}}};
  rep.metrics["ladyzhenskaya_drift"] = drift;
  rep.checks.push_back(csv_check("ladyzhenskaya_ratio_finite",
                                 std::max({maxima[0][0], maxima[1][0]}), 0.0, kHuge, Reduce::max,
                                 "ladyzhenskaya.csv", "ratio_first"));
  rep.checks.push_back(make_check("ladyzhenskaya_drift", drift, 0.0, 0.1));

  // Constant fields: both sides are powers of the layer thickness.
  const GridPtr g = make_grid(L.nx, L.nx, L.nz[0], cfg.physics.h);
  SpectralField one(g, 1, Symmetry::even);
  one.set_mode(0, 0, 0, 0, 1.0);
  const LadyzhenskayaResult c = ladyzhenskaya_ratio(one, one, one);
  const double expected = std::sqrt(2.0 * cfg.physics.h);
  rep.metrics["ladyzhenskaya_constant_ratio"] = c.ratio_first;
  rep.metrics["ladyzhenskaya_constant_expected"] = expected;
  rep.checks.push_back(
      make_check("ladyzhenskaya_constant", c.ratio_first, expected - 1e-12, expected + 1e-12));
  return rep;
}

Report run_experiment(const RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  switch (cfg.experiment) {
    case ExperimentKind::energy_identity: return exp_energy_identity(cfg, out_dir);
    case ExperimentKind::decomposition: return exp_decomposition(cfg, out_dir);
    case ExperimentKind::stability: return exp_stability(cfg, out_dir);
    case ExperimentKind::mollification: return exp_mollification_convergence(cfg, out_dir);
    case ExperimentKind::lemma_suite: return exp_lemma_suite(cfg, out_dir);
  }
  throw ConfigError("unknown experiment");
}

// ---------------------------------------------------------------------------

namespace {

std::string iso_time(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Report execute_run(const RunConfig& cfg, const fs::path& out_dir) {
  validate(cfg);
  fs::create_directories(out_dir);
  const auto start = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  try {
    rep = run_experiment(cfg, out_dir);
  } catch (const BlowUpError& e) {
    rep = Report{};
    rep.experiment = to_string(cfg.experiment);
    rep.metrics["blow_up"] = e.what();
    rep.metrics["blow_up_time"] = e.last_good().t;
    rep.checks.push_back(make_check("no_blow_up", 1.0, 0.0, 0.0));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_text(out_dir / "config.ini", canonical_form(cfg));
  const std::string report_text = to_json(rep).dump(2) + "\n";
  write_text(out_dir / "report.json", report_text);

  std::vector<std::string> files = rep.files;
  files.push_back("config.ini");
  files.push_back("report.json");
  std::sort(files.begin(), files.end());
  json verdicts = json::object();
  for (const auto& c : rep.checks) verdicts[c.name] = c.pass;
  const json manifest = {{"artifact_version", kArtifactVersion},
                         {"config_hash", config_hash(cfg)},
                         {"experiment", rep.experiment},
                         {"seed", cfg.seed},
                         {"files", files},
                         {"verdicts", verdicts},
                         {"all_pass", rep.all_pass()},
                         {"report_sha256", sha256_hex(report_text)}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");

  const json timing = {{"start", iso_time(start)},
                       {"end", iso_time(std::chrono::system_clock::now())},
                       {"elapsed_seconds", elapsed},
                       {"threads", kernels::thread_count()}};
  write_text(out_dir / "timing.json", timing.dump(2) + "\n");
  return rep;
}

ReplayResult replay_run(const fs::path& run_dir) {
  json manifest, report;
  std::string report_text;
  try {
    manifest = json::parse(read_text(run_dir / "manifest.json"));
    report_text = read_text(run_dir / "report.json");
    report = json::parse(report_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("report: malformed json: ") + e.what());
  }
  const Report rep = report_from_json(report);
  ReplayResult out;
  if (manifest.value("report_sha256", std::string()) != sha256_hex(report_text)) {
    out.matches_manifest = false;
  }
  const json verdicts = manifest.value("verdicts", json::object());
  if (verdicts.size() != rep.checks.size()) out.matches_manifest = false;
  for (const Check& c : rep.checks) {
    Check r = make_check(c.name, evaluate(c, run_dir), c.lo, c.hi);
    r.reduce = c.reduce;
    r.csv = c.csv;
    r.column = c.column;
    r.csv2 = c.csv2;
    if (!verdicts.contains(c.name) || verdicts[c.name].get<bool>() != r.pass) {
      out.matches_manifest = false;
    }
    out.checks.push_back(std::move(r));
  }
  return out;
}

}  // namespace hydrostat
