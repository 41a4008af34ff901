#include "hydrostat/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "hydrostat/errors.hpp"
#include "hydrostat/kernels.hpp"
#include "hydrostat/spectral_ops.hpp"
#include "hydrostat/transform.hpp"

namespace hydrostat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// Pointwise magnitude of a refined multi-component field, or the single
/// component itself.
struct Magnitude {
  std::vector<double> storage;
  std::span<const double> a, b;
};

Magnitude magnitude(const PhysicalField& f) {
  Magnitude m;
  if (f.components() <= 2) {
    m.a = f.component(0);
    if (f.components() == 2) m.b = f.component(1);
    return m;
  }
  const std::size_t n = f.grid().physical_size();
  m.storage.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c) s += f.component(c)[p] * f.component(c)[p];
    m.storage[p] = std::sqrt(s);
  }
  m.a = m.storage;
  return m;
}

double lq_from_lattice(const Magnitude& m, const Grid& g, double q) {
  if (std::isinf(q)) return kernels::omp::max_abs(m.a, m.b);
  const double s = kernels::omp::sum_abs_pow(m.a, m.b, q);
  return std::pow(s * g.volume() / static_cast<double>(g.physical_size()), 1.0 / q);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

double lq_norm(const SpectralField& f, double q, int oversample) {
  if (!(q >= 1.0)) throw ParameterError("lq_norm: need q >= 1");
  if (q == 2.0) return l2_norm(f);
  const PhysicalField fine = to_physical_refined(f, oversample);
  return lq_from_lattice(magnitude(fine), fine.grid(), q);
}

double linf_norm(const SpectralField& f, int oversample) {
  return lq_norm(f, kInf, oversample);
}

NormRecord norms(const SpectralField& v, std::span<const double> qs) {
  NormRecord r;
  r.l2 = l2_norm(v);
  r.grad_l2 = std::sqrt(grad_norm_squared(v));
  const PhysicalField fine = to_physical_refined(v, kNormOversample);
  const Magnitude m = magnitude(fine);
  r.l4 = lq_from_lattice(m, fine.grid(), 4.0);
  r.l6 = lq_from_lattice(m, fine.grid(), 6.0);
  r.linf = lq_from_lattice(m, fine.grid(), kInf);
  for (double q : qs) {
    if (!(q >= 1.0)) throw ParameterError("norms: need q >= 1");
    r.lq.emplace_back(q, q == 2.0 ? r.l2 : lq_from_lattice(m, fine.grid(), q));
  }
  const SpectralField dz = derivative(v, Axis::z);
  r.dz_l2 = l2_norm(dz);
  r.gradh_dz_l2 = std::sqrt(grad_h_norm_squared(dz));
  r.dz_vbar_l2 = r.dz_l2;
  return r;
}

void DiagnosticsSeries::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << kCsvHeader << '\n';
  for (const NormRecord& r : records) {
    os << fmt17(r.t) << ',' << fmt17(r.l2) << ',' << fmt17(r.grad_l2) << ','
       << fmt17(r.l4) << ',' << fmt17(r.l6) << ',' << fmt17(r.linf_V) << ','
       << fmt17(r.dz_vbar_l2) << ',' << fmt17(r.energy_residual) << ','
       << fmt17(r.recon_residual) << '\n';
  }
  if (!os) throw ConfigError("write failed for " + path.string());
}

DiagnosticsSeries DiagnosticsSeries::read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw DataError("unexpected CSV header in " + path.string());
  }
  DiagnosticsSeries s;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw DataError("bad CSV cell '" + cell + "' in " + path.string());
      }
      vals.push_back(v);
    }
    if (vals.size() != 9) throw DataError("bad CSV row width in " + path.string());
    NormRecord r;
    r.t = vals[0];
    r.l2 = vals[1];
    r.grad_l2 = vals[2];
    r.l4 = vals[3];
    r.l6 = vals[4];
    r.linf_V = vals[5];
    r.dz_vbar_l2 = vals[6];
    r.energy_residual = vals[7];
    r.recon_residual = vals[8];
    s.records.push_back(r);
  }
  return s;
}

// ---------------------------------------------------------------------------

void validate(const BoundParams& p) {
  if (!(p.C0 > 0.0) || !(p.C > 0.0) || !(p.C0star > 0.0) || !(p.h > 0.0)) {
    throw ParameterError("bound constants and h must be positive");
  }
}

namespace {

double log_mu_form(double c, double t, double n4) {
  const double base = 1.0 + n4;
  return std::log(c) + 40.0 * std::log(base) + 2.0 * std::log(t + 1.0) +
         c * std::exp(2.0 * t) * (t + 1.0) * std::pow(base, 4);
}

}  // namespace

double log_mu_of_t(double t, double n4, const BoundParams& p) {
  validate(p);
  return log_mu_form(p.C0, t, n4);
}

double mu_of_t(double t, double n4, const BoundParams& p) {
  return std::exp(log_mu_of_t(t, n4, p));
}

double log_k3_of_t(double t, double n4, const BoundParams& p) {
  validate(p);
  return log_mu_form(p.C, t, n4);
}

double k3_of_t(double t, double n4, const BoundParams& p) {
  return std::exp(log_k3_of_t(t, n4, p));
}

double rho_of_s(double s, double n4, double h, const BoundParams& p) {
  validate(p);
  if (s == 0.0) return 0.0;
  const double x = 1.0 + n4 + std::pow(2.0 * h, 0.25) * s;
  return std::exp(std::log(p.C0) + 40.0 * std::log(x) + p.C0 * std::pow(x, 4)) * s;
}

double log_s0_of_t(double t, double n4, const BoundParams& p) {
  validate(p);
  const double base = 1.0 + n4;
  return 20.0 * (std::log(base) +
                 p.C * std::exp(2.0 * t) * (t + 1.0) * std::pow(base, 4));
}

double log_s1_of_t(double t, double n4, const BoundParams& p) {
  if (t < 0.0) throw ParameterError("log_s1_of_t: need t >= 0");
  if (t == 0.0) return -kInf;
  constexpr int kPanels = 8192;
  const double dt = t / kPanels;
  double acc = -kInf;
  for (int n = 0; n <= kPanels; ++n) {
    const double w = (n == 0 || n == kPanels) ? 1.0 : (n % 2 ? 4.0 : 2.0);
    acc = logaddexp(acc, std::log(w) + log_s0_of_t(n * dt, n4, p));
  }
  return acc + std::log(dt / 3.0);
}

double log_m0_from_s1(double log_s1, const BoundParams& p) {
  validate(p);
  const double big = std::log1p(p.C0star) + 80.0 * std::numbers::ln2 +
                     logaddexp(0.0, log_s1);
  return logaddexp(std::log(2.0 * p.h), big);
}

double log_m0_of_t(double t, double n4, const BoundParams& p) {
  return log_m0_from_s1(log_s1_of_t(t, n4, p), p);
}

// ---------------------------------------------------------------------------

double log_moser_bound(int k, double M0, double delta0) {
  const double lm = std::log(M0);
  return -(k + 2) * lm +
         std::ldexp(1.0, k - 1) * (4.0 * lm + 2.0 * std::log(delta0));
}

namespace {

bool log_le(double a, double b) {
  if (a == -kInf) return true;
  if (b == kInf) return true;
  return a <= b + 1e-12 * std::max(1.0, std::abs(b));
}

}  // namespace

MoserVerdict moser_bound_check(const IterationInstance& inst) {
  MoserVerdict v;
  const int K = static_cast<int>(inst.log_A.size());
  if (!(inst.M0 >= 2.0) || !(inst.delta0 > 0.0)) {
    v.status = MoserStatus::hypothesis_violated;
    v.first_failure = K > 0 ? 1 : 0;
    return v;
  }
  const double lm = std::log(inst.M0);
  const double ld = std::log(inst.delta0);
  for (int k = 1; k <= K; ++k) v.log_bound.push_back(log_moser_bound(k, inst.M0, inst.delta0));

  for (int k = 1; k <= K; ++k) {
    const double la = inst.log_A[k - 1];
    if (std::isnan(la)) {
      v.status = MoserStatus::hypothesis_violated;
      v.first_failure = k;
      return v;
    }
    double allowed;
    if (k == 1) {
      allowed = lm + 2.0 * ld;
    } else {
      const int j = k - 1;
      allowed = logaddexp(lm + std::ldexp(1.0, j + 1) * ld,
                          j * lm + 2.0 * inst.log_A[j - 1]);
    }
    if (!log_le(la, allowed)) {
      v.status = MoserStatus::hypothesis_violated;
      v.first_failure = k;
      return v;
    }
  }
  for (int k = 1; k <= K; ++k) {
    if (!log_le(inst.log_A[k - 1], v.log_bound[k - 1])) {
      v.status = MoserStatus::bound_violated;
      v.first_failure = k;
      return v;
    }
  }
  return v;
}

IterationInstance random_iteration_instance(std::mt19937_64& rng, double M0,
                                            double delta0, int kmax,
                                            bool saturate) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto log_u = [&] { return saturate ? 0.0 : std::log(1.0 - unif(rng)); };
  IterationInstance inst{M0, delta0, {}};
  const double lm = std::log(M0);
  const double ld = std::log(delta0);
  double la = lm + 2.0 * ld + log_u();
  inst.log_A.push_back(la);
  for (int k = 1; k < kmax; ++k) {
    la = logaddexp(lm + std::ldexp(1.0, k + 1) * ld, k * lm + 2.0 * la) + log_u();
    inst.log_A.push_back(la);
  }
  return inst;
}

bool moser_exponent_inequality(int k) {
  if (k < 1 || k > 60) throw ParameterError("moser_exponent_inequality: k in [1, 60]");
  const std::int64_t lhs = 4 * (std::int64_t{1} << k) - (k + 3);
  return lhs >= 3 * static_cast<std::int64_t>(k) + 1;
}

// ---------------------------------------------------------------------------

LadyzhenskayaResult ladyzhenskaya_ratio(const SpectralField& phi,
                                        const SpectralField& psi,
                                        const SpectralField& chi,
                                        int oversample) {
  if (phi.components() != 1 || psi.components() != 1 || chi.components() != 1) {
    throw ArityError("ladyzhenskaya_ratio: scalar fields required");
  }
  if (!phi.grid().same_shape(psi.grid()) || !phi.grid().same_shape(chi.grid())) {
    throw ConfigError("ladyzhenskaya_ratio: grid mismatch");
  }
  const PhysicalField a = to_physical_refined(phi, oversample);
  const PhysicalField b = to_physical_refined(psi, oversample);
  const PhysicalField c = to_physical_refined(chi, oversample);
  const Grid& g = a.grid();
  const double dz = 2.0 * g.h() / g.nz();
  const double dxy = 1.0 / (static_cast<double>(g.nx()) * g.ny());

  LadyzhenskayaResult r;
  double lhs = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      double ia = 0.0, ibc = 0.0;
      for (int k = 0; k < g.nz(); ++k) {
        ia += std::abs(a.at(0, i, j, k));
        ibc += std::abs(b.at(0, i, j, k) * c.at(0, i, j, k));
      }
      lhs += ia * ibc;
    }
  }
  r.lhs = lhs * dz * dz * dxy;

  auto h1 = [](const SpectralField& f) {
    const double n = l2_norm(f);
    return std::sqrt(n * (n + std::sqrt(grad_h_norm_squared(f))));
  };
  const double n_phi = l2_norm(phi), n_chi = l2_norm(chi);
  r.rhs_first = n_phi * h1(psi) * h1(chi);
  r.rhs_second = h1(phi) * h1(psi) * n_chi;
  r.ratio_first = r.rhs_first > 0.0 ? r.lhs / r.rhs_first : 0.0;
  r.ratio_second = r.rhs_second > 0.0 ? r.lhs / r.rhs_second : 0.0;
  return r;
}

SpectralField random_band_limited(const GridPtr& grid, int band,
                                  std::mt19937_64& rng) {
  const Grid& g = *grid;
  if (band < 0 || 3 * band > std::min({g.nx(), g.ny(), g.nz()})) {
    throw ParameterError("random_band_limited: band not resolved by the grid");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(grid, 1);
  for (int m = -band; m <= band; ++m) {
    for (int n = -band; n <= band; ++n) {
      for (int l = 0; l <= band; ++l) {
        if (l == 0 && (m < 0 || (m == 0 && n < 0))) continue;
        const double amp = 1.0 / (1.0 + m * m + n * n + l * l);
        const double re = normal(rng);
        const double im = (m == 0 && n == 0 && l == 0) ? 0.0 : normal(rng);
        f.set_mode(0, m, n, l, amp * Complex(re, im));
      }
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

double fit_envelope(std::span<const double> t, std::span<const double> values,
                    EnvelopeForm form, const EnvelopeContext& ctx) {
  if (values.empty()) throw DataError("fit_envelope: empty series");
  if (t.size() != values.size()) throw DataError("fit_envelope: length mismatch");
  if (form == EnvelopeForm::gronwall && ctx.integral.size() != values.size()) {
    throw DataError("fit_envelope: gronwall form needs one integral per sample");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("fit_envelope: non-finite sample");
  }

  double best = 0.0;
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double v = values[n];
    switch (form) {
      case EnvelopeForm::constant:
        best = std::max(best, v);
        break;
      case EnvelopeForm::mu:
      case EnvelopeForm::k3: {
        if (v <= 0.0) break;
        const double base = 1.0 + ctx.n4;
        const double a = 40.0 * std::log(base) + 2.0 * std::log(t[n] + 1.0);
        const double b = std::exp(2.0 * t[n]) * (t[n] + 1.0) * std::pow(base, 4);
        const double r = std::log(v / ctx.scale);
        // u + b e^u + a >= r, increasing in u = log C.
        double lo = -745.0, hi = 700.0;
        if (lo + b * std::exp(lo) + a >= r) break;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid + b * std::exp(mid) + a >= r) hi = mid; else lo = mid;
        }
        best = std::max(best, std::exp(hi));
        break;
      }
      case EnvelopeForm::gronwall: {
        const double I = ctx.integral[n];
        const double lv = v > 0.0 ? std::log(v) : -kInf;
        if (lv <= 0.0) break;
        if (!(I > 0.0)) return kInf;
        best = std::max(best, lv / I);
        break;
      }
    }
  }
  return best;
}

}  // namespace hydrostat
