#include "hydrostat/transform.hpp"

#include <fftw3.h>
#include <omp.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "hydrostat/errors.hpp"
#include "hydrostat/kernels.hpp"
#include "hydrostat/spectral_ops.hpp"

namespace hydrostat {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// The FFTW planner is not thread-safe; executing an existing plan on new
// arrays is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(const Grid& g) {
    const int threads = kernels::thread_count();
    const auto key = std::make_tuple(g.nx(), g.ny(), g.nz(), threads);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    fftw_plan_with_nthreads(threads);
    double* real = fftw_alloc_real(g.physical_size());
    fftw_complex* cplx = fftw_alloc_complex(g.spectral_size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_3d(g.nx(), g.ny(), g.nz(), real, cplx, flags);
    p.inverse = fftw_plan_dft_c2r_3d(g.nx(), g.ny(), g.nz(), cplx, real,
                                     flags | FFTW_DESTROY_INPUT);
    fftw_free(real);
    fftw_free(cplx);
    if (!p.forward || !p.inverse) throw ConfigError("fftw: planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() { fftw_init_threads(); }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, PlanPair> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// (-1)^l re-references the z phase from the lattice origin z = -h to the
// mid-plane.
inline double z_phase(int l) { return (l & 1) ? -1.0 : 1.0; }

}  // namespace

PhysicalField to_physical(const SpectralField& f) {
  const Grid& g = f.grid();
  const PlanPair plan = PlanCache::instance().get(g);
  PhysicalField out(f.grid_ptr(), f.components());
  std::vector<Complex> scratch(g.spectral_size());
  const int nzc = g.nzc();
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(g.nx()) * g.ny();
  for (int c = 0; c < f.components(); ++c) {
    auto in = f.component(c);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
      for (int l = 0; l < nzc; ++l) {
        scratch[r * nzc + l] = z_phase(l) * in[r * nzc + l];
      }
    }
    fftw_execute_dft_c2r(plan.inverse, as_fftw(scratch.data()),
                         out.component(c).data());
  }
  return out;
}

SpectralField to_spectral(const PhysicalField& f, Symmetry tag) {
  if (!f.all_finite()) throw DataError("to_spectral: non-finite lattice value");
  const Grid& g = f.grid();
  const PlanPair plan = PlanCache::instance().get(g);
  SpectralField out(f.grid_ptr(), f.components());
  std::vector<double> scratch(g.physical_size());
  const double inv_n = 1.0 / static_cast<double>(g.physical_size());
  const int nzc = g.nzc();
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(g.nx()) * g.ny();
  for (int c = 0; c < f.components(); ++c) {
    // fftw_execute_dft_r2c takes a non-const input pointer.
    std::ranges::copy(f.component(c), scratch.begin());
    auto o = out.component(c);
    fftw_execute_dft_r2c(plan.forward, scratch.data(), as_fftw(o.data()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
      for (int l = 0; l < nzc; ++l) o[r * nzc + l] *= z_phase(l) * inv_n;
    }
  }
  if (tag != Symmetry::none) return symmetrize(out, tag);
  return out;
}

SpectralField resample(const SpectralField& f, const GridPtr& target) {
  const Grid& src = f.grid();
  const Grid& dst = *target;
  if (src.h() != dst.h()) throw ConfigError("resample: half-heights differ");
  SpectralField out(target, f.components(), f.symmetry());
  const int mx = std::min(src.nx(), dst.nx()) / 2;
  const int my = std::min(src.ny(), dst.ny()) / 2;
  const int mz = std::min(src.nz(), dst.nz()) / 2;
  for (int c = 0; c < f.components(); ++c) {
    for (int m = -mx + 1; m < mx; ++m) {
      const int is = (m + src.nx()) % src.nx();
      const int id = (m + dst.nx()) % dst.nx();
      for (int n = -my + 1; n < my; ++n) {
        const int js = (n + src.ny()) % src.ny();
        const int jd = (n + dst.ny()) % dst.ny();
        for (int l = 0; l < mz; ++l) {
          out.at(c, id, jd, l) = f.at(c, is, js, l);
        }
      }
    }
  }
  return out;
}

PhysicalField to_physical_refined(const SpectralField& f, int factor) {
  if (factor == 1) return to_physical(f);
  return to_physical(resample(f, refined(f.grid(), factor)));
}

}  // namespace hydrostat
