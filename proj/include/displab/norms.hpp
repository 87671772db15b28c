#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "displab/exponents.hpp"
#include "displab/spectral.hpp"

namespace displab {

/// Time-sampled field path on [0, T] with quadrature weights (composite
/// trapezoid on uniform samples by default; weights sum to T).
struct Trajectory {
  TorusGrid grid;
  std::vector<double> times;
  std::vector<double> weights;
  std::vector<Field> states;

  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  std::size_t samples() const { return times.size(); }

  void validate() const {
    if (times.empty() || times.size() != weights.size() ||
        times.size() != states.size())
      throw std::invalid_argument("Trajectory: inconsistent sample arrays");
    double wsum = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i > 0 && !(times[i] > times[i - 1]))
        throw std::invalid_argument("Trajectory: times must increase");
      if (!(weights[i] > 0.0))
        throw std::invalid_argument("Trajectory: weights must be positive");
      wsum += weights[i];
      if (!(states[i].grid == grid))
        throw std::invalid_argument("Trajectory: state grid mismatch");
    }
    const double T = horizon();
    if (T > 0.0 && std::abs(wsum - T) > 1e-9 * T)
      throw std::invalid_argument("Trajectory: weights do not sum to T");
  }

  /// Empty states, uniform times 0..T, trapezoid weights.
  static Trajectory uniform(const TorusGrid& g, double T, int n_samples) {
    if (n_samples < 2 || !(T > 0.0))
      throw std::invalid_argument("Trajectory::uniform: need T > 0, >= 2 samples");
    Trajectory u;
    u.grid = g;
    const double dt = T / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
      u.times.push_back(i * dt);
      u.weights.push_back((i == 0 || i == n_samples - 1) ? 0.5 * dt : dt);
    }
    return u;
  }
};

/// Free flow sampled on [0, T]: states[i] = e^{i t_i sign (-Lap)^(sigma/2)} f.
/// One inverse transform per sample; the data spectrum is computed once.
inline Trajectory free_evolution(const Field& f, double T, int n_samples,
                                 int sigma, double time_sign = 1.0) {
  Trajectory u = Trajectory::uniform(f.grid, T, n_samples);
  const Field spec = forward_transform(f);
  for (double t : u.times) {
    Field st = spec;
    multiply_spectrum(st, [&](const double* zeta, int d) {
      const double r2 = detail::norm2(zeta, d);
      const double phase = time_sign * t * (sigma == 2 ? r2 : std::sqrt(r2));
      return cplx(std::cos(phase), std::sin(phase));
    });
    u.states.push_back(inverse_transform(st));
  }
  return u;
}

// ---------------------------------------------------------------------------
// Spatial norms
// ---------------------------------------------------------------------------

/// Iterated Riemann norm (int_x (int_y |f|^r~ dy)^(r/r~) dx)^(1/r).
/// Infinite exponents take grid maxima.  The y-block is the trailing,
/// contiguous block of axes.
inline double mixed_space_norm(const Field& f, const Rational& r,
                               const Rational& r_tilde) {
  if ((!r.is_infinite() && r < Rational(1)) ||
      (!r_tilde.is_infinite() && r_tilde < Rational(1)))
    throw std::invalid_argument("mixed_space_norm: exponents must be >= 1");
  const TorusGrid& g = f.grid;
  std::size_t ycount = 1;
  for (int i = g.x_dim(); i < g.dim(); ++i)
    ycount *= static_cast<std::size_t>(g.axis(i).points);
  const std::size_t xcount = f.size() / ycount;
  const double ycell = g.y_cell(), xcell = g.x_cell();

  const bool r_inf = r.is_infinite(), rt_inf = r_tilde.is_infinite();
  const double rd = r_inf ? 0.0 : r.to_double();
  const double rtd = rt_inf ? 0.0 : r_tilde.to_double();

  double outer = 0.0;  // sum for finite r, running max for r = inf
  for (std::size_t xs = 0; xs < xcount; ++xs) {
    const cplx* block = f.samples.data() + xs * ycount;
    double inner;
    if (rt_inf) {
      inner = 0.0;
      for (std::size_t i = 0; i < ycount; ++i)
        inner = std::max(inner, std::abs(block[i]));
    } else if (rtd == 2.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < ycount; ++i) s += std::norm(block[i]);
      inner = std::sqrt(s * ycell);
    } else {
      double s = 0.0;
      for (std::size_t i = 0; i < ycount; ++i)
        s += std::pow(std::abs(block[i]), rtd);
      inner = std::pow(s * ycell, 1.0 / rtd);
    }
    if (r_inf)
      outer = std::max(outer, inner);
    else
      outer += std::pow(inner, rd);
  }
  return r_inf ? outer : std::pow(outer * xcell, 1.0 / rd);
}

inline double l2_norm(const Field& f) {
  return mixed_space_norm(f, Rational(2), Rational(2));
}

/// Plain L^p Riemann norm with a real exponent (for exponents like a(p-1)
/// that are not rational run parameters).
inline double plain_lp_norm(const Field& f, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("plain_lp_norm: p >= 1 required");
  double s = 0.0;
  for (const cplx& v : f.samples) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

/// L^2 norm of the fractional derivative of f, evaluated spectrally
/// (one transform, Plancherel).  sobolev_norm(f, s, inhomogeneous, y_only)
/// is the partial-regularity norm of f measured jointly in x and y.
inline double sobolev_norm(const Field& f, double s, DerivativeFlavor flavor,
                           DerivativeAxes axes = DerivativeAxes::all) {
  if (!(s > -1.0 && s <= 1.0))
    throw std::invalid_argument("sobolev_norm: s in (-1, 1] required");
  const Field spec = forward_transform(f);
  const TorusGrid& g = f.grid;
  const int from = axes == DerivativeAxes::all ? 0 : g.x_dim();
  const int d = g.dim();
  std::vector<std::vector<double>> tables(d);
  for (int i = 0; i < d; ++i) tables[i] = g.frequencies(i);
  double sum = 0.0;
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    double u = 0.0;
    for (int i = from; i < d; ++i) {
      const double z = tables[i][idx[i]];
      u += z * z;
    }
    double m2;
    if (flavor == DerivativeFlavor::inhomogeneous)
      m2 = std::pow(1.0 + u, s);
    else
      m2 = (u == 0.0) ? 0.0 : std::pow(u, s);
    sum += m2 * std::norm(spec[flat]);
  });
  return std::sqrt(sum * g.cell_volume());
}

// ---------------------------------------------------------------------------
// Space-time norms
// ---------------------------------------------------------------------------

enum class NormDerivative { none, y_only, all };

/// Composite norm L^q_t L^r_x W^(s,r~)_y (or without the derivative).
struct NormSpec {
  Rational q = Rational::infinity();
  Rational r = Rational(2);
  Rational r_tilde = Rational(2);
  double s = 0.0;
  NormDerivative derivative = NormDerivative::none;
  DerivativeFlavor flavor = DerivativeFlavor::inhomogeneous;

  void validate() const {
    if ((!q.is_infinite() && q < Rational(1)) ||
        (!r.is_infinite() && r < Rational(1)) ||
        (!r_tilde.is_infinite() && r_tilde < Rational(1)))
      throw std::invalid_argument("NormSpec: exponents must be >= 1");
  }

  static NormSpec from_triple(const ExponentTriple& t) {
    return NormSpec{t.q, t.r, t.r_tilde, 0.0, NormDerivative::none,
                    DerivativeFlavor::inhomogeneous};
  }
  static NormSpec from_triple_with_derivative(const ExponentTriple& t,
                                              double s, NormDerivative der) {
    return NormSpec{t.q, t.r, t.r_tilde, s, der,
                    DerivativeFlavor::inhomogeneous};
  }
};

inline double spatial_norm(const Field& f, const NormSpec& spec) {
  if (spec.derivative == NormDerivative::none || spec.s == 0.0)
    return mixed_space_norm(f, spec.r, spec.r_tilde);
  const DerivativeAxes axes = spec.derivative == NormDerivative::all
                                  ? DerivativeAxes::all
                                  : DerivativeAxes::y_only;
  return mixed_space_norm(fractional_derivative(f, spec.s, axes, spec.flavor),
                          spec.r, spec.r_tilde);
}

/// (sum_i w_i inner(state_i)^q)^(1/q); q = inf takes the max over samples.
inline double spacetime_norm(const Trajectory& u, const NormSpec& spec) {
  spec.validate();
  if (u.states.empty())
    throw std::invalid_argument("spacetime_norm: empty trajectory");
  if (spec.q.is_infinite()) {
    double m = 0.0;
    for (const Field& st : u.states) m = std::max(m, spatial_norm(st, spec));
    return m;
  }
  const double qd = spec.q.to_double();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.states.size(); ++i)
    sum += u.weights[i] * std::pow(spatial_norm(u.states[i], spec), qd);
  return std::pow(sum, 1.0 / qd);
}

/// Empirical Strichartz constant of a datum: the space-time norm of its free
/// evolution over [0, T] divided by the homogeneous Sobolev norm at the
/// regularity the triple implies through the scaling relation.
inline double strichartz_quotient(const Field& f, const EquationParams& ep,
                                  const ExponentTriple& t, double T,
                                  int time_samples) {
  const Thm1Report rep = check_thm1_conditions(ep, t);
  const double denom =
      sobolev_norm(f, rep.implied_s.to_double(), DerivativeFlavor::homogeneous);
  if (!(denom > 0.0))
    throw std::invalid_argument("strichartz_quotient: datum has zero norm");
  const Trajectory u = free_evolution(f, T, time_samples, ep.sigma);
  return spacetime_norm(u, NormSpec::from_triple(t)) / denom;
}

/// Contraction metric: max over the supplied triples of the mixed space-time
/// norm of u - v (the finite surrogate for the sup over the admissible
/// class).
inline double contraction_distance(const Trajectory& u, const Trajectory& v,
                                   const std::vector<ExponentTriple>& triples) {
  if (triples.empty())
    throw std::invalid_argument("contraction_distance: no triples");
  if (!(u.grid == v.grid) || u.times != v.times)
    throw std::invalid_argument("contraction_distance: trajectory mismatch");
  Trajectory diff;
  diff.grid = u.grid;
  diff.times = u.times;
  diff.weights = u.weights;
  diff.states.reserve(u.states.size());
  for (std::size_t i = 0; i < u.states.size(); ++i)
    diff.states.push_back(u.states[i] - v.states[i]);
  double d = 0.0;
  for (const ExponentTriple& t : triples)
    d = std::max(d, spacetime_norm(diff, NormSpec::from_triple(t)));
  return d;
}

/// Empirical Sobolev-embedding constant: slice-wise in y, the ratio
/// ||f(x,.)||_{L^target_y} / ||f(x,.)||_{W^(s,r~)_y}, reduced by max over x.
inline double embedding_check(const Field& f, double s,
                              const Rational& r_tilde,
                              const Rational& target_exponent, int y_dim) {
  if (y_dim != f.grid.split())
    throw std::invalid_argument("embedding_check: y_dim != grid split");
  const Field der = fractional_derivative(f, s, DerivativeAxes::y_only,
                                          DerivativeFlavor::inhomogeneous);
  const TorusGrid& g = f.grid;
  std::size_t ycount = 1;
  for (int i = g.x_dim(); i < g.dim(); ++i)
    ycount *= static_cast<std::size_t>(g.axis(i).points);
  const std::size_t xcount = f.size() / ycount;
  const double ycell = g.y_cell();
  const double tgt = target_exponent.to_double();
  const double rt = r_tilde.to_double();

  double best = 0.0;
  bool any = false;
  for (std::size_t xs = 0; xs < xcount; ++xs) {
    const cplx* fb = f.samples.data() + xs * ycount;
    const cplx* db = der.samples.data() + xs * ycount;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ycount; ++i) {
      num += std::pow(std::abs(fb[i]), tgt);
      den += std::pow(std::abs(db[i]), rt);
    }
    num = std::pow(num * ycell, 1.0 / tgt);
    den = std::pow(den * ycell, 1.0 / rt);
    if (den < 1e-14) continue;
    best = std::max(best, num / den);
    any = true;
  }
  if (!any)
    throw std::invalid_argument("embedding_check: zero denominator on every slice");
  return best;
}

}  // namespace displab
