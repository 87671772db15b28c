#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "displab/grid.hpp"

namespace displab {

enum class TransformDirection { forward, inverse };

namespace detail {

/// Process-wide FFTW plan cache.  Plans are created once per (shape,
/// direction) under a lock with FFTW_ESTIMATE | FFTW_UNALIGNED, which keeps
/// planning deterministic and lets the cached plan run on any buffer via the
/// new-array interface.  Execution is lock-free and safe from multiple
/// threads as long as each call uses its own arrays.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const std::vector<int>& dims, int sign) {
    const std::pair<std::vector<int>, int> key{dims, sign};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);
    std::vector<cplx> a(total), b(total);
    fftw_plan p = fftw_plan_dft(
        static_cast<int>(dims.size()), dims.data(),
        reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(b.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("PlanCache: fftw planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unitary discrete Fourier transform over all grid axes.  Forward and
/// inverse both carry the 1/sqrt(n_total) factor, so the round trip is the
/// identity and the discrete Plancherel identity holds between samples and
/// spectrum.  Spectral storage order along each axis is the FFT-native one;
/// TorusGrid::frequency maps storage index to the signed frequency.
inline Field transform(const Field& f, TransformDirection dir) {
  std::vector<int> dims(f.grid.dim());
  for (int i = 0; i < f.grid.dim(); ++i) dims[i] = f.grid.axis(i).points;
  const int sign =
      dir == TransformDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = detail::PlanCache::instance().get(dims, sign);
  Field out(f.grid);
  fftw_execute_dft(
      plan,
      reinterpret_cast<fftw_complex*>(const_cast<cplx*>(f.samples.data())),
      reinterpret_cast<fftw_complex*>(out.samples.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
  for (cplx& v : out.samples) v *= scale;
  return out;
}

inline Field forward_transform(const Field& f) {
  return transform(f, TransformDirection::forward);
}
inline Field inverse_transform(const Field& f) {
  return transform(f, TransformDirection::inverse);
}

}  // namespace displab
