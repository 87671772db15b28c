#pragma once

#include <cmath>
#include <functional>

#include "displab/cutoff.hpp"
#include "displab/fft.hpp"
#include "displab/grid.hpp"

namespace displab {

/// Multiplies the spectrum in place: m receives the frequency vector.
/// `spectrum` must hold forward-transform data on its grid.  A multiplier
/// that evaluates non-finite anywhere on the lattice is rejected.
template <class M>
void multiply_spectrum(Field& spectrum, M&& m) {
  const TorusGrid& g = spectrum.grid;
  const int d = g.dim();
  std::array<const double*, 8> freq{};
  std::vector<std::vector<double>> tables(d);
  for (int i = 0; i < d; ++i) {
    tables[i] = g.frequencies(i);
    freq[i] = tables[i].data();
  }
  std::array<double, 8> zeta{};
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    for (int i = 0; i < d; ++i) zeta[i] = freq[i][idx[i]];
    const cplx value = m(zeta.data(), d);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw std::domain_error(
          "multiply_spectrum: non-finite multiplier value on the lattice");
    spectrum[flat] *= value;
  });
}

/// Fourier multiplier operator: transform, multiply by m(zeta), transform
/// back.  All propagators, projectors and fractional derivatives factor
/// through this.
template <class M>
Field apply_multiplier(const Field& f, M&& m) {
  Field spec = forward_transform(f);
  multiply_spectrum(spec, std::forward<M>(m));
  return inverse_transform(spec);
}

namespace detail {
inline double norm2(const double* zeta, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += zeta[i] * zeta[i];
  return s;
}
inline double norm2_tail(const double* zeta, int d, int from) {
  double s = 0.0;
  for (int i = from; i < d; ++i) s += zeta[i] * zeta[i];
  return s;
}
}  // namespace detail

/// Littlewood-Paley projector P_j: spectrum multiplied by psi(2^-j |zeta|).
inline Field lp_project(const Field& f, int j, const SpectralCutoff& cutoff) {
  const double scale = std::ldexp(1.0, -j);
  return apply_multiplier(f, [&](const double* zeta, int d) {
    return cutoff.psi(scale * std::sqrt(detail::norm2(zeta, d)));
  });
}

inline Field lp_project(const Field& f, FrequencyBand band,
                        const SpectralCutoff& cutoff) {
  return lp_project(f, band.j, cutoff);
}

inline void lp_project_spectrum(Field& spectrum, int j,
                                const SpectralCutoff& cutoff) {
  const double scale = std::ldexp(1.0, -j);
  multiply_spectrum(spectrum, [&](const double* zeta, int d) {
    return cutoff.psi(scale * std::sqrt(detail::norm2(zeta, d)));
  });
}

enum class DerivativeAxes { all, y_only };
enum class DerivativeFlavor { homogeneous, inhomogeneous };

/// Spectral fractional derivative.  Homogeneous flavor |zeta_sel|^s
/// annihilates the zero frequency of the selected block; inhomogeneous
/// flavor is (1 + |zeta_sel|^2)^(s/2).
inline Field fractional_derivative(const Field& f, double s,
                                   DerivativeAxes axes,
                                   DerivativeFlavor flavor) {
  if (!(s > -1.0 && s <= 1.0))
    throw std::invalid_argument("fractional_derivative: s in (-1, 1] required");
  Field spec = forward_transform(f);
  const int from = axes == DerivativeAxes::all ? 0 : f.grid.x_dim();
  multiply_spectrum(spec, [=](const double* zeta, int d) -> double {
    const double u = detail::norm2_tail(zeta, d, from);
    if (flavor == DerivativeFlavor::inhomogeneous)
      return std::pow(1.0 + u, 0.5 * s);
    if (u == 0.0) return 0.0;
    return std::pow(u, 0.5 * s);
  });
  return inverse_transform(spec);
}

/// Half-wave / Schroedinger-type flow e^{it(-Laplace)^(sigma/2)}: unimodular
/// multiplier e^{it |zeta|^sigma}.  (The NLS solver applies it with t -> -t,
/// which is the conjugate flow e^{it Laplace}.)
inline Field propagate(const Field& f, double t, int sigma) {
  if (sigma != 1 && sigma != 2)
    throw std::invalid_argument("propagate: sigma must be 1 or 2");
  Field spec = forward_transform(f);
  multiply_spectrum(spec, [=](const double* zeta, int d) {
    const double u = detail::norm2(zeta, d);
    const double phase = t * (sigma == 2 ? u : std::sqrt(u));
    return cplx(std::cos(phase), std::sin(phase));
  });
  return inverse_transform(spec);
}

/// Dyadic rescaling f_delta(z) = delta^amplitude_exp f(delta z).  The lattice
/// maps to itself with the extent divided by delta, so resampling is exact:
/// the returned field has the same sample array (scaled) on the shrunk or
/// stretched torus.
inline Field rescale_field(const Field& f, double delta,
                           double amplitude_exp) {
  int exponent = 0;
  const double mantissa = std::frexp(delta, &exponent);
  if (mantissa != 0.5 || delta <= 0.0)
    throw std::invalid_argument("rescale_field: delta must be a power of two");
  std::vector<Axis> axes = f.grid.axes();
  for (Axis& a : axes) a.extent /= delta;
  Field out(TorusGrid(std::move(axes), f.grid.split()));
  const double amp = std::pow(delta, amplitude_exp);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = amp * f[i];
  return out;
}

}  // namespace displab
