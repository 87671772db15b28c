#pragma once

#include <cmath>

#include "displab/fft.hpp"
#include "displab/grid.hpp"
#include "displab/rng.hpp"

namespace displab {

/// Plane wave e^{i zeta_m . z} for integer mode numbers m (one per axis).
inline Field pure_mode(const TorusGrid& g, const std::vector<int>& mode) {
  if (static_cast<int>(mode.size()) != g.dim())
    throw std::invalid_argument("pure_mode: mode size != grid dim");
  Field f(g);
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    double phase = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      phase += 2.0 * M_PI * mode[i] * idx[i] / g.axis(i).points;
    f[flat] = cplx(std::cos(phase), std::sin(phase));
  });
  return f;
}

/// Gaussian bump exp(-|z - center|^2 / (2 width^2)), center defaulting to
/// the middle of the torus.  Distances use the nearest periodic image.
inline Field gaussian_field(const TorusGrid& g, double width) {
  Field f(g);
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    double r2 = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      const double L = g.axis(i).extent;
      double dz = g.sample_coordinate(i, idx[i]) - 0.5 * L;
      dz -= L * std::round(dz / L);
      r2 += dz * dz;
    }
    f[flat] = std::exp(-r2 / (2.0 * width * width));
  });
  return f;
}

/// Stable per-mode key from signed mode numbers; identical on any grid that
/// contains the mode, which keeps spectral synthesis consistent under
/// refinement.
inline std::uint64_t mode_key(const int* signed_mode, int dim) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (int i = 0; i < dim; ++i)
    h = splitmix64(h ^ static_cast<std::uint64_t>(
                           static_cast<std::int64_t>(signed_mode[i]) + (1 << 20)));
  return h;
}

/// Random band-limited field: unit-variance complex Gaussian coefficients on
/// all modes with |m_i| <= mode_radius per axis (zero mode excluded),
/// deterministic in (seed, stream).  Normalized to unit L^2 norm.
inline Field random_band_field(const TorusGrid& g, int mode_radius,
                               std::uint64_t seed, std::uint64_t stream) {
  const KeyedRng rng(seed, stream);
  Field spec(g);
  const int d = g.dim();
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    std::array<int, 8> m{};
    bool inside = true, origin = true;
    for (int i = 0; i < d; ++i) {
      const int n = g.axis(i).points;
      m[i] = idx[i] < n / 2 ? idx[i] : idx[i] - n;
      if (std::abs(m[i]) > mode_radius) inside = false;
      if (m[i] != 0) origin = false;
    }
    spec[flat] = (inside && !origin) ? rng.gaussian(mode_key(m.data(), d))
                                     : cplx(0.0, 0.0);
  });
  Field f = inverse_transform(spec);
  double sum = 0.0;
  for (const cplx& v : f.samples) sum += std::norm(v);
  const double l2 = std::sqrt(sum * g.cell_volume());
  if (l2 > 0.0)
    for (cplx& v : f.samples) v *= 1.0 / l2;
  return f;
}

/// Projects the zero frequency out (subtracts the mean).
inline Field remove_mean(const Field& f) {
  cplx mean(0.0, 0.0);
  for (const cplx& v : f.samples) mean += v;
  mean /= static_cast<double>(f.size());
  Field out(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] - mean;
  return out;
}

}  // namespace displab
