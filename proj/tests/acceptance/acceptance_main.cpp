// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hydrostat/experiments.hpp"
#include "hydrostat/hydrostatics.hpp"
#include "hydrostat/spectral_ops.hpp"
#include "hydrostat/transform.hpp"

using namespace hydrostat;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path workdir() {
  static const fs::path d = [] {
    const fs::path p = fs::temp_directory_path() / "hydrostat_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

SpectralField vector_field(const GridPtr& g, const std::function<double(double, double, double)>& f1,
                           const std::function<double(double, double, double)>& f2) {
  const std::vector<SpectralField> parts{to_spectral(sample(g, f1), Symmetry::even),
                                         to_spectral(sample(g, f2), Symmetry::even)};
  SpectralField v = stack(parts);
  v.set_symmetry(Symmetry::even);
  return v;
}

double rel_l2(const SpectralField& a, const SpectralField& b) {
  return l2_norm(a - b) / l2_norm(b);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Layered data on top of a smooth vortex, shared by the decomposition,
/// stability and mollification criteria.
RunConfig layered_config(ExperimentKind kind) {
  RunConfig c;
  c.experiment = kind;
  c.physics.f0 = 1.0;
  c.initial.kind = InitialKind::layered;
  c.initial.layered.a = {1.0, 0.0};
  c.initial.layered.delta = 1.0;
  c.initial.layered.eta = 0.25;
  c.initial.layered.sigma = {0.5, 0.2};
  c.initial.background = {"vortex", 1.0};
  return c;
}

const Check* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

// --------------------------------------------------------------------------

Outcome exact_decay() {
  const auto g = make_grid(32, 32, 64, 0.5);
  const double A = 1.0, t_end = 0.1;
  auto shear = [&](double amp) {
    return vector_field(g, [](double, double, double) { return 0.0; },
                        [amp](double x, double, double) { return amp * std::cos(2 * pi * x); });
  };
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory tr = integrate(make_state(shear(A), PhysicsParams{0.0, 0.5}), StepControl{5e-4, 0.5}, t_end);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double err = rel_l2(tr.final.v, shear(A * std::exp(-4 * pi * pi * t_end)));
  return {err <= 1e-7 && secs < 60.0,
          fmt("rel error %.3e (<= 1e-7), %zu steps in %.1f s (< 60 s)", err, tr.steps, secs)};
}

Outcome rotation_decay() {
  const double h = 0.5, f0 = 1.0, A = 1.0;
  const auto g = make_grid(32, 32, 64, h);
  auto exact = [&](double t) {
    const double d = A * std::exp(-(pi / h) * (pi / h) * t);
    return vector_field(
        g, [=](double, double, double z) { return d * std::cos(f0 * t) * std::cos(pi * z / h); },
        [=](double, double, double z) { return -d * std::sin(f0 * t) * std::cos(pi * z / h); });
  };
  double worst = 0.0;
  IntegrateOptions o;
  o.on_step = [&](const SolverState& s, const StepInfo&) {
    worst = std::max(worst, rel_l2(s.v, exact(s.t)));
  };
  integrate(make_state(exact(0.0), PhysicsParams{f0, h}), StepControl{5e-4, 0.5}, 0.1, o);
  return {worst <= 1e-6, fmt("max rel error over [0, 0.1] %.3e (<= 1e-6)", worst)};
}

Outcome energy_identity() {
  RunConfig c;
  c.experiment = ExperimentKind::energy_identity;
  c.grid = {16, 16, 32};
  c.physics.f0 = 1.0;
  c.initial.analytic = {"vortex", 1.0};
  c.energy.halvings = 2;
  const Report r = exp_energy_identity(c, workdir() / "energy");
  const auto& res = r.metrics["max_energy_residual"];
  const auto& ratios = r.metrics["order_ratios"];
  std::string ratio_text;
  for (const auto& x : ratios) ratio_text += fmt(" %.2f", x.get<double>());
  return {r.all_pass() && ratios.size() == 2,
          fmt("residual %.3e at dt=5e-4 (<= 1e-7); halving ratios%s (>= 6)",
              res[0].get<double>(), ratio_text.c_str())};
}

Outcome continuity() {
  const double h = 0.5;
  const auto g = make_grid(32, 32, 64, h);
  AnalyticParams p{"vortex", 1.0};
  double worst_div = 0.0, worst_wall = 0.0;
  IntegrateOptions o;
  o.on_step = [&](const SolverState& s, const StepInfo&) {
    const SpectralField w = recover_w(s.v);
    const SpectralField div = div_h(s.v);
    const double scale = l2_norm(div);
    if (scale > 0.0) worst_div = std::max(worst_div, l2_norm(derivative(w, Axis::z) + div) / scale);
    const WallTrace t = w_wall_trace(s.v, w);
    worst_wall = std::max({worst_wall, t.bottom, t.top});
  };
  integrate(make_state(analytic_field(g, p), PhysicsParams{1.0, h}), StepControl{5e-4, 0.5}, 0.1, o);
  return {worst_div <= 1e-12 && worst_wall <= 1e-10,
          fmt("max |dz w + div_H v| / |div_H v| %.3e (<= 1e-12); max |w(+-h)| %.3e (<= 1e-10)",
              worst_div, worst_wall)};
}

struct DecompositionRuns {
  Report report;
  bool ok = false;
  std::string error;
};

const DecompositionRuns& decomposition_runs() {
  static const DecompositionRuns runs = [] {
    DecompositionRuns d;
    RunConfig c = layered_config(ExperimentKind::decomposition);
    c.grid = {32, 32, 32};
    c.decomposition.refine_nz = 64;
    try {
      d.report = exp_decomposition(c, workdir() / "decomposition");
      d.ok = true;
    } catch (const std::exception& e) {
      d.error = e.what();
    }
    return d;
  }();
  return runs;
}

Outcome reconstruction() {
  const auto& d = decomposition_runs();
  if (!d.ok) return {false, d.error};
  const double a = d.report.metrics["max_recon_residual"].get<double>();
  const double b = d.report.metrics["max_recon_residual_refined"].get<double>();
  return {a <= 1e-8 && b <= 1e-8,
          fmt("sup_t |v - (vbar + V)| / |v| = %.3e (nz=32), %.3e (nz=64) (<= 1e-8)", a, b)};
}

Outcome linf_of_V() {
  const auto& d = decomposition_runs();
  if (!d.ok) return {false, d.error};
  const Check* ratio = find(d.report, "fitted_C0_refinement_ratio");
  const Check* bounded = find(d.report, "linf_V_bounded");
  const bool pass = ratio && bounded && ratio->pass && bounded->pass;
  return {pass, fmt("sup_t |V|_inf %.4f; fitted C0 %.4e (nz=32) / %.4e (nz=64), ratio %.4f "
                    "(within +-20%%)",
                    d.report.metrics["sup_linf_V"].get<double>(),
                    d.report.metrics["fitted_C0"].get<double>(),
                    d.report.metrics["fitted_C0_refined"].get<double>(),
                    ratio ? ratio->value : std::nan(""))};
}

const Report& lemma_report() {
  static const Report r = [] {
    RunConfig c;
    c.experiment = ExperimentKind::lemma_suite;
    c.lemma.moser_instances = 10000;
    c.lemma.moser_kmax = 40;
    c.lemma.moser_m0_max = 10.0;
    c.lemma.triples = 200;
    c.lemma.nz = {32, 64};
    return exp_lemma_suite(c, workdir() / "lemma");
  }();
  return r;
}

Outcome moser() {
  const Report& r = lemma_report();
  bool pass = true;
  for (const char* n : {"moser_bound_violations", "moser_hypothesis_violations", "moser_a1_identity",
                        "moser_exponent_inequality"}) {
    const Check* c = find(r, n);
    pass = pass && c && c->pass;
  }
  return {pass, fmt("%d instances, %d bound violations, %d hypothesis violations, "
                    "max |a1 / (M0 delta0^2) - 1| = %.2e",
                    r.metrics["moser_instances"].get<int>(),
                    r.metrics["moser_bound_violations"].get<int>(),
                    r.metrics["moser_hypothesis_violations"].get<int>(),
                    r.metrics["moser_a1_max_relative_error"].get<double>())};
}

Outcome ladyzhenskaya() {
  const Report& r = lemma_report();
  bool pass = true;
  for (const char* n : {"ladyzhenskaya_ratio_finite", "ladyzhenskaya_drift", "ladyzhenskaya_constant"}) {
    const Check* c = find(r, n);
    pass = pass && c && c->pass;
  }
  const auto& m = r.metrics["ladyzhenskaya_max_ratio"];
  return {pass, fmt("max ratio %.4f (nz=32) / %.4f (nz=64), drift %.2e (<= 0.1); constant fields "
                    "ratio %.15f (1 +- 1e-12)",
                    m["first"][0].get<double>(), m["first"][1].get<double>(),
                    r.metrics["ladyzhenskaya_drift"].get<double>(),
                    r.metrics["ladyzhenskaya_constant_ratio"].get<double>())};
}

Outcome stability() {
  RunConfig c = layered_config(ExperimentKind::stability);
  c.stability.perturbation = 0.05;
  c.stability.eta = 0.1;
  const Report r = exp_stability(c, workdir() / "stability");
  return {r.all_pass(), fmt("final |v - v'| ratio (sigma vs sigma/2) %.4f in [1.5, 2.5]; "
                            "max difference %.3e",
                            r.metrics["final_difference_ratio"].get<double>(),
                            find(r, "difference_bounded")->value)};
}

Outcome mollification() {
  RunConfig c = layered_config(ExperimentKind::mollification);
  c.mollification.epsilons = {0.2, 0.1, 0.05};
  const Report r = exp_mollification_convergence(c, workdir() / "mollification");
  std::string text;
  for (const auto& row : r.metrics["distances"]) {
    text += fmt(" t=%.3g:", row["t"].get<double>());
    for (const auto& d : row["distances"]) text += fmt(" %.3e", d.get<double>());
  }
  return {r.all_pass(), "pair distances" + text + " (strictly decreasing)"};
}

Outcome determinism() {
  RunConfig lemma;
  lemma.experiment = ExperimentKind::lemma_suite;
  lemma.seed = 2024;
  lemma.lemma.moser_instances = 2000;
  lemma.lemma.triples = 20;
  RunConfig decomp = layered_config(ExperimentKind::decomposition);
  decomp.grid = {16, 16, 32};
  decomp.t_end = 0.02;
  decomp.snapshot_times = {0.01};
  bool same = true;
  std::size_t compared = 0;
  for (const auto& [name, cfg] : {std::pair{"lemma", lemma}, std::pair{"decomposition", decomp}}) {
    const fs::path a = workdir() / (std::string("det_") + name + "_a");
    const fs::path b = workdir() / (std::string("det_") + name + "_b");
    execute_run(cfg, a);
    execute_run(cfg, b);
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
      const fs::path rel = fs::relative(e.path(), a);
      same = same && slurp(a / rel) == slurp(b / rel);
      ++compared;
    }
  }
  return {same && compared > 0, fmt("%zu files compared across repeated seeded runs (CSV, "
                                    "manifests, reports, snapshots)",
                                    compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"exact shear decay", exact_decay},
      {"rotation-decay with Coriolis", rotation_decay},
      {"discrete energy identity", energy_identity},
      {"continuity and w reconstruction", continuity},
      {"decomposition reconstruction", reconstruction},
      {"L-infinity bound on V", linf_of_V},
      {"iteration lemma ensemble", moser},
      {"anisotropic interpolation ensemble", ladyzhenskaya},
      {"stability under perturbation", stability},
      {"mollification Cauchy property", mollification},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
