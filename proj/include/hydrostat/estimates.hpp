#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydrostat/field.hpp"

namespace hydrostat {

// ---------------------------------------------------------------------------
// Norms and the per-step diagnostics record

/// One row of a trajectory's diagnostics. Norms are unnormalized integrals
/// over M x (-h,h).
struct NormRecord {
  double t = 0.0;
  double l2 = 0.0;
  double grad_l2 = 0.0;
  double l4 = 0.0;
  double l6 = 0.0;
  double linf = 0.0;
  /// (q, ||v||_q) for any extra exponents requested.
  std::vector<std::pair<double, double>> lq;
  double dz_l2 = 0.0;       // ||dz v||_2
  double gradh_dz_l2 = 0.0; // ||grad_H dz v||_2
  double dz_vbar_l2 = 0.0;  // ||dz vbar||_2 (equals dz_l2 without a split)
  double linf_V = 0.0;
  double dissipation = 0.0;      // int_0^t ||grad v||_2^2
  double grad_dz_vbar_int = 0.0; // int_0^t ||grad dz vbar||_2^2
  double energy_residual = 0.0;  // 1/2|v|^2(t) + dissipation - 1/2|v0|^2
  double step_energy_residual = 0.0;
  double recon_residual = 0.0;   // ||v - (vbar + V)||_2 / ||v||_2
};

/// Time-ordered diagnostics of one trajectory.
struct DiagnosticsSeries {
  std::vector<NormRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  const NormRecord& back() const { return records.back(); }

  /// Column order is fixed: t, l2, grad_l2, l4, l6, linf_V, dz_vbar_l2,
  /// energy_residual, recon_residual; 17 significant digits.
  void write_csv(const std::filesystem::path& path) const;
  static DiagnosticsSeries read_csv(const std::filesystem::path& path);
};

inline constexpr const char* kCsvHeader =
    "t,l2,grad_l2,l4,l6,linf_V,dz_vbar_l2,energy_residual,recon_residual";

/// Lattice refinement used for L^q (q != 2) and L^inf evaluation.
inline constexpr int kNormOversample = 2;

/// ||f||_q of the pointwise magnitude |f| (all components). q = infinity
/// gives the max over the oversampled lattice.
double lq_norm(const SpectralField& f, double q, int oversample = kNormOversample);
double linf_norm(const SpectralField& f, int oversample = kNormOversample);

/// L2 and gradient norms by Parseval; L4, L6, L^inf and the extra `qs`
/// on the oversampled lattice.
NormRecord norms(const SpectralField& v, std::span<const double> qs = {});

// ---------------------------------------------------------------------------
// Closed-form bound functions (constants are configuration values)

struct BoundParams {
  double C0 = 1.0;
  double C = 1.0;
  double C0star = 1.0;
  double h = 0.5;
};

void validate(const BoundParams& p);

/// log mu(t) with mu(t) = C0 (1+n4)^40 (t+1)^2 exp{C0 e^{2t} (t+1) (1+n4)^4};
/// n4 = ||v0||_4.
double log_mu_of_t(double t, double n4, const BoundParams& p);
double mu_of_t(double t, double n4, const BoundParams& p);

/// Same structure as mu with the constant C.
double log_k3_of_t(double t, double n4, const BoundParams& p);
double k3_of_t(double t, double n4, const BoundParams& p);

/// rho(s) = C0 (1 + n4 + (2h)^{1/4} s)^40 exp{C0 (1 + n4 + (2h)^{1/4} s)^4} s.
double rho_of_s(double s, double n4, double h, const BoundParams& p);

/// log S0(t), S0(t) = [(1+n4) exp{C e^{2t} (t+1) (1+n4)^4}]^20.
double log_s0_of_t(double t, double n4, const BoundParams& p);
/// log S1(t), S1(t) = int_0^t S0 (composite Simpson in log space).
double log_s1_of_t(double t, double n4, const BoundParams& p);

/// log M0 with M0 = 2h + (1 + C0*) 2^80 (1 + S1), S1 given in log form.
double log_m0_from_s1(double log_s1, const BoundParams& p);
double log_m0_of_t(double t, double n4, const BoundParams& p);

// ---------------------------------------------------------------------------
// Iteration lemma

/// Sequence A_1..A_K stored as natural logs (-inf for zero entries).
struct IterationInstance {
  double M0 = 2.0;
  double delta0 = 0.5;
  std::vector<double> log_A;
};

enum class MoserStatus { pass, hypothesis_violated, bound_violated };

struct MoserVerdict {
  MoserStatus status = MoserStatus::pass;
  /// log a_k, a_k = M0^{-(k+2)} (M0^4 delta0^2)^{2^{k-1}}, k = 1..K.
  std::vector<double> log_bound;
  /// 1-based index of the first failing k (0 when none).
  int first_failure = 0;
};

double log_moser_bound(int k, double M0, double delta0);

/// Checks the recursive hypothesis, then A_k <= a_k for every supplied k.
/// Comparisons are in log space with a relative slack of 1e-12.
MoserVerdict moser_bound_check(const IterationInstance& inst);

/// Rolls out A_{k+1} = u_k (M0 delta0^{2^{k+1}} + M0^k A_k^2),
/// A_1 = u_0 M0 delta0^2, with u_k drawn from (0, 1]; `saturate` forces
/// every u_k = 1.
IterationInstance random_iteration_instance(std::mt19937_64& rng, double M0,
                                            double delta0, int kmax,
                                            bool saturate);

/// 4 * 2^k - (k + 3) >= 3k + 1, evaluated exactly in integers.
bool moser_exponent_inequality(int k);

// ---------------------------------------------------------------------------
// Anisotropic interpolation inequality

struct LadyzhenskayaResult {
  double lhs = 0.0;
  /// Right-hand sides without the constant.
  double rhs_first = 0.0;
  double rhs_second = 0.0;
  double ratio_first = 0.0;
  double ratio_second = 0.0;
};

/// lhs = int_M (int |phi| dz)(int |psi chi| dz) dx^H by oversampled
/// quadrature; right-hand sides from Parseval norms.
LadyzhenskayaResult ladyzhenskaya_ratio(const SpectralField& phi,
                                        const SpectralField& psi,
                                        const SpectralField& chi,
                                        int oversample = kNormOversample);

/// Real scalar field with modes |m|, |n|, |l| <= band drawn in a fixed
/// order, so the same generator state yields the same function on any grid
/// that resolves the band.
SpectralField random_band_limited(const GridPtr& grid, int band,
                                  std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Envelope fitting

enum class EnvelopeForm {
  constant,  // value <= C
  mu,        // value <= scale * mu(t; C0 = C)
  k3,        // value <= scale * K3(t; C) (same structure as mu)
  gronwall,  // value <= exp(C * I(t)), I supplied per sample
};

struct EnvelopeContext {
  double scale = 1.0;
  double n4 = 0.0;
  /// Integrals I(t_i) for the gronwall form.
  std::vector<double> integral;
};

/// Smallest constant for which the bound dominates every sample. Throws
/// DataError on an empty series.
double fit_envelope(std::span<const double> t, std::span<const double> values,
                    EnvelopeForm form, const EnvelopeContext& ctx = {});

}  // namespace hydrostat
