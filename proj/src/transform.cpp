#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "rmhd/spectral.hpp"

namespace rmhd {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
// Plans are built once per shape and reused by every caller.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

  PlanPair get(int nx, int ny, int nz) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(nx, ny, nz);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const std::size_t n = std::size_t(nx) * ny * nz;
    const std::size_t m = std::size_t(nx) * ny * (nz / 2 + 1);
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(m);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_3d(nx, ny, nz, real, cplx, flags);
    p.inverse = fftw_plan_dft_c2r_3d(nx, ny, nz, cplx, real, flags);
    fftw_free(real);
    fftw_free(cplx);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

SpectralField to_spectral(const ScalarField& f) {
  const GridSpec& g = f.grid();
  SpectralField F(g);
  auto plan = cache().get(g.nx, g.ny, g.nz).forward;
  // r2c does not modify its input, but the interface is non-const
  auto* in = const_cast<double*>(f.values().data());
  auto* out = reinterpret_cast<fftw_complex*>(F.coeffs().data());
  fftw_execute_dft_r2c(plan, in, out);
  F *= Complex(1.0 / double(g.points()));
  return F;
}

ScalarField to_physical(const SpectralField& F) {
  const GridSpec& g = F.grid();
  ScalarField f(g);
  std::vector<Complex> work(F.coeffs().begin(), F.coeffs().end());  // c2r clobbers input
  auto plan = cache().get(g.nx, g.ny, g.nz).inverse;
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(work.data()), f.values().data());
  return f;
}

SpectralVector to_spectral(const VectorField& f) {
  return {to_spectral(f[0]), to_spectral(f[1]), to_spectral(f[2])};
}

VectorField to_physical(const SpectralVector& F) {
  return {to_physical(F[0]), to_physical(F[1]), to_physical(F[2])};
}

}  // namespace rmhd
