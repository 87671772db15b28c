#pragma once

#include <variant>

#include "displab/nonlinearity.hpp"
#include "displab/norms.hpp"
#include "displab/synth.hpp"

namespace displab {

// ---------------------------------------------------------------------------
// Cauchy data
// ---------------------------------------------------------------------------

struct CauchyDataS {
  Field f;
};

/// Wave data (f, g).  g is projected mean-zero on construction (torus
/// surrogate for the homogeneous |grad|^{-1} smoothing); the removed mass is
/// recorded.
struct CauchyDataW {
  Field f;
  Field g;
  double projected_g_mean = 0.0;

  static CauchyDataW make(const Field& f, const Field& g) {
    CauchyDataW d;
    d.f = f;
    cplx mean(0.0, 0.0);
    for (const cplx& v : g.samples) mean += v;
    mean /= static_cast<double>(g.size());
    d.projected_g_mean = std::abs(mean);
    d.g = Field(g.grid);
    for (std::size_t i = 0; i < g.size(); ++i) d.g[i] = g[i] - mean;
    return d;
  }
};

using CauchyData = std::variant<CauchyDataS, CauchyDataW>;

/// Internal regularity: wave runs take the user's s in (1/2, 1] and work
/// with s - 1/2; Schroedinger runs use s directly.
inline double internal_regularity(const EquationParams& ep) {
  const double s = ep.s.to_double();
  return ep.sigma == 1 ? s - 0.5 : s;
}

// ---------------------------------------------------------------------------
// Free evolutions and Duhamel maps
// ---------------------------------------------------------------------------

namespace detail {

/// |zeta|^sigma on the lattice, flat-indexed.
inline std::vector<double> dispersion_symbol(const TorusGrid& g, int sigma) {
  std::vector<double> w(g.size());
  const int d = g.dim();
  std::vector<std::vector<double>> freq(d);
  for (int i = 0; i < d; ++i) freq[i] = g.frequencies(i);
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    double u = 0.0;
    for (int i = 0; i < d; ++i) u += freq[i][idx[i]] * freq[i][idx[i]];
    w[flat] = sigma == 2 ? u : std::sqrt(u);
  });
  return w;
}

}  // namespace detail

/// Schroedinger free flow e^{it Laplace} f on uniform samples of [0, T].
inline Trajectory nls_free_evolution(const Field& f, double T, int samples) {
  return free_evolution(f, T, samples, 2, -1.0);
}

/// Wave free flow cos(t sqrt(-Lap)) f + (sin(t sqrt(-Lap))/sqrt(-Lap)) g.
inline Trajectory wave_free_evolution(const Field& f, const Field& g,
                                      double T, int samples) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("wave_free_evolution: grid mismatch");
  Trajectory u = Trajectory::uniform(f.grid, T, samples);
  const Field fs = forward_transform(f);
  const Field gs = forward_transform(g);
  const std::vector<double> rho = detail::dispersion_symbol(f.grid, 1);
  for (double t : u.times) {
    Field st(f.grid);
    for (std::size_t i = 0; i < st.size(); ++i) {
      const double r = rho[i];
      const double sinc = r == 0.0 ? t : std::sin(t * r) / r;
      st[i] = std::cos(t * r) * fs[i] + sinc * gs[i];
    }
    u.states.push_back(inverse_transform(st));
  }
  return u;
}

/// Duhamel map for NLS:
///   Phi(u)(t) = e^{itL} f - i int_0^t e^{i(t-tau)L} F_p(u(tau)) dtau,
/// the tau-integral by the trajectory's cumulative trapezoid rule.
inline Trajectory duhamel_map_S(const Field& f, const Trajectory& u,
                                const Nonlinearity& nl, double T) {
  u.validate();
  if (std::abs(u.horizon() - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("duhamel_map_S: trajectory horizon != T");
  const std::vector<double> omega = detail::dispersion_symbol(f.grid, 2);
  const Field fs = forward_transform(f);
  Trajectory out;
  out.grid = u.grid;
  out.times = u.times;
  out.weights = u.weights;

  const std::size_t n = f.size();
  std::vector<cplx> running(n, cplx(0, 0));  // int_0^{t_i} e^{i tau w} F^ dtau
  std::vector<cplx> prev(n);                 // e^{i tau w} F^ at previous tau
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    const double t = u.times[i];
    Field fhat = forward_transform(evaluate_nonlinearity(nl, u.states[i]));
    for (std::size_t m = 0; m < n; ++m) {
      const double ph = t * omega[m];
      fhat[m] *= cplx(std::cos(ph), std::sin(ph));
    }
    if (i > 0) {
      const double half_dt = 0.5 * (u.times[i] - u.times[i - 1]);
      for (std::size_t m = 0; m < n; ++m)
        running[m] += half_dt * (prev[m] + fhat[m]);
    }
    prev = fhat.samples;

    Field phi(f.grid);
    for (std::size_t m = 0; m < n; ++m) {
      const double ph = -t * omega[m];
      phi[m] = cplx(std::cos(ph), std::sin(ph)) *
               (fs[m] - cplx(0.0, 1.0) * running[m]);
    }
    out.states.push_back(inverse_transform(phi));
  }
  return out;
}

/// Duhamel map for NLW in half-wave form:
///   Phi(u)(t) = cos(t w) f + sinc(t w) g + int_0^t sin((t-tau) w)/w F dtau,
/// with w = sqrt(-Lap); sin(t w)/w evaluates to t at the zero frequency
/// (removable), so the zero mode needs no projection of F_p.
inline Trajectory duhamel_map_W(const Field& f, const Field& g,
                                const Trajectory& u, const Nonlinearity& nl,
                                double T) {
  u.validate();
  if (std::abs(u.horizon() - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("duhamel_map_W: trajectory horizon != T");
  const std::vector<double> rho = detail::dispersion_symbol(f.grid, 1);
  const Field fs = forward_transform(f);
  const Field gs = forward_transform(g);
  Trajectory out;
  out.grid = u.grid;
  out.times = u.times;
  out.weights = u.weights;

  const std::size_t n = f.size();
  std::vector<cplx> run_cos(n, cplx(0, 0));  // int cos(tau w) F^ dtau
  std::vector<cplx> run_sin(n, cplx(0, 0));  // int sin(tau w) F^ dtau
  cplx run_mass(0, 0);                       // int F^_0 dtau (zero mode)
  cplx run_tmass(0, 0);                      // int tau F^_0 dtau
  std::vector<cplx> prev(n);
  cplx prev0(0, 0);
  double prev_t = 0.0;

  for (std::size_t i = 0; i < u.times.size(); ++i) {
    const double t = u.times[i];
    const Field fhat = forward_transform(evaluate_nonlinearity(nl, u.states[i]));
    if (i > 0) {
      const double half_dt = 0.5 * (t - prev_t);
      for (std::size_t m = 0; m < n; ++m) {
        if (rho[m] == 0.0) continue;
        run_cos[m] += half_dt * (std::cos(prev_t * rho[m]) * prev[m] +
                                 std::cos(t * rho[m]) * fhat[m]);
        run_sin[m] += half_dt * (std::sin(prev_t * rho[m]) * prev[m] +
                                 std::sin(t * rho[m]) * fhat[m]);
      }
      run_mass += half_dt * (prev0 + fhat[0]);
      run_tmass += half_dt * (prev_t * prev0 + t * fhat[0]);
    }
    prev = fhat.samples;
    prev0 = fhat[0];
    prev_t = t;

    Field phi(f.grid);
    for (std::size_t m = 0; m < n; ++m) {
      const double r = rho[m];
      if (r == 0.0) {
        // cos -> 1, sinc -> t, Duhamel kernel -> (t - tau)
        phi[m] = fs[m] + t * gs[m] + (t * run_mass - run_tmass);
      } else {
        const double c = std::cos(t * r), s = std::sin(t * r);
        phi[m] = c * fs[m] + (s / r) * gs[m] +
                 (s * run_cos[m] - c * run_sin[m]) / r;
      }
    }
    out.states.push_back(inverse_transform(phi));
  }
  return out;
}

inline Trajectory apply_solution_map(const CauchyData& data,
                                     const Trajectory& u,
                                     const Nonlinearity& nl, double T) {
  if (std::holds_alternative<CauchyDataS>(data))
    return duhamel_map_S(std::get<CauchyDataS>(data).f, u, nl, T);
  const auto& w = std::get<CauchyDataW>(data);
  return duhamel_map_W(w.f, w.g, u, nl, T);
}

inline Trajectory free_evolution_of(const CauchyData& data, double T,
                                    int samples) {
  if (std::holds_alternative<CauchyDataS>(data))
    return nls_free_evolution(std::get<CauchyDataS>(data).f, T, samples);
  const auto& w = std::get<CauchyDataW>(data);
  return wave_free_evolution(w.f, w.g, T, samples);
}

// ---------------------------------------------------------------------------
// Solution-space norms and data norms
// ---------------------------------------------------------------------------

/// Distance triples: the q = infinity corner of the admissible class plus
/// the selection-lemma triple for (N, s, p).
inline std::vector<ExponentTriple> default_distance_triples(
    const EquationParams& ep) {
  std::vector<ExponentTriple> triples;
  if (ep.sigma == 2) {
    triples.push_back({Rational::infinity(), Rational(2), Rational(2)});
    triples.push_back(
        select_schrodinger_exponents(ep.N, ep.s, ep.p).triple);
  } else {
    // r = r~ corner at q = inf: r = 2N/(N-1)
    triples.push_back({Rational::infinity(), Rational(2 * ep.N, ep.N - 1),
                       Rational(2 * ep.N, ep.N - 1)});
    triples.push_back(
        select_wave_exponents(ep.N, ep.s - Rational(1, 2), ep.p).triple);
  }
  return triples;
}

/// || <d_y>^s f ||_{Hdot^h}: spectral norm with the mixed inhomogeneous /
/// homogeneous weight; the zero mode is excluded by the homogeneous factor.
inline double weighted_sobolev_norm(const Field& f, double s_y, double h) {
  const Field spec = forward_transform(f);
  const TorusGrid& g = f.grid;
  const int d = g.dim();
  const int yfrom = g.x_dim();
  std::vector<std::vector<double>> freq(d);
  for (int i = 0; i < d; ++i) freq[i] = g.frequencies(i);
  double sum = 0.0;
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    double all = 0.0, yy = 0.0;
    for (int i = 0; i < d; ++i) {
      const double z = freq[i][idx[i]];
      all += z * z;
      if (i >= yfrom) yy += z * z;
    }
    if (all == 0.0) return;  // homogeneous weight kills the zero mode
    sum += std::pow(1.0 + yy, s_y) * std::pow(all, h) * std::norm(spec[flat]);
  });
  return std::sqrt(sum * g.cell_volume());
}

/// The X(T, A) norm: for NLS the sup over the triple set of
/// L^q_t L^r_x W^(s,r~)_y, for NLW the same norms of <d_y>^s u plus the
/// C_t Hdot^{1/2} component.
inline double solution_space_norm(const Trajectory& u, const EquationParams& ep,
                                  const std::vector<ExponentTriple>& triples) {
  const double s = internal_regularity(ep);
  double best = 0.0;
  for (const ExponentTriple& t : triples) {
    const NormSpec spec = NormSpec::from_triple_with_derivative(
        t, s, NormDerivative::y_only);
    best = std::max(best, spacetime_norm(u, spec));
  }
  if (ep.sigma == 1) {
    for (const Field& st : u.states)
      best = std::max(best, weighted_sobolev_norm(st, s, 0.5));
  }
  return best;
}

/// The data norm matched to the run: || f ||_{L^2_x H^s_y} for NLS,
/// || <d_y>^s f ||_{Hdot^{1/2}} + || <d_y>^s g ||_{Hdot^{-1/2}} for NLW.
inline double data_norm(const CauchyData& data, const EquationParams& ep) {
  const double s = internal_regularity(ep);
  if (std::holds_alternative<CauchyDataS>(data))
    return sobolev_norm(std::get<CauchyDataS>(data).f, s,
                        DerivativeFlavor::inhomogeneous,
                        DerivativeAxes::y_only);
  const auto& w = std::get<CauchyDataW>(data);
  return weighted_sobolev_norm(w.f, s, 0.5) +
         weighted_sobolev_norm(w.g, s, -0.5);
}

// ---------------------------------------------------------------------------
// Picard iteration and contraction experiments
// ---------------------------------------------------------------------------

/// Evidence record for one contraction run: pairwise ratios, Picard gaps,
/// and the invariance budget C~ ||data|| + C^ T^beta A^p <= A with measured
/// constants.
struct ContractionReport {
  double T = 0.0;
  double A = 0.0;
  std::vector<double> ratios;
  double budget_lhs = 0.0;
  double budget_rhs = 0.0;
  bool converged = false;
  std::vector<double> iterates_gap;
  bool diverged = false;
  int iterations = 0;
  double data_norm_value = 0.0;
  double c_free = 0.0;       // measured free-evolution constant C~
  double c_duhamel = 0.0;    // measured inhomogeneous constant C^
  double beta = 0.0;
};

struct PicardResult {
  Trajectory solution;
  ContractionReport report;
};

/// Picard iteration u^{n+1} = Phi(u^n) from the free evolution, stopping at
/// gap < tol or max_iter; flags divergence after three consecutive growing
/// gaps.
inline PicardResult picard_solve(const CauchyData& data,
                                 const Nonlinearity& nl,
                                 const EquationParams& ep, double T,
                                 int max_iter, double tol,
                                 int time_samples = 65,
                                 std::vector<ExponentTriple> triples = {}) {
  validate(ep);
  if (triples.empty()) triples = default_distance_triples(ep);
  PicardResult res;
  res.report.T = T;
  res.report.data_norm_value = data_norm(data, ep);

  Trajectory current = free_evolution_of(data, T, time_samples);
  int grow_streak = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Trajectory next = apply_solution_map(data, current, nl, T);
    const double gap = contraction_distance(next, current, triples);
    res.report.iterates_gap.push_back(gap);
    res.report.iterations = iter + 1;
    if (res.report.iterates_gap.size() >= 2) {
      const double prev =
          res.report.iterates_gap[res.report.iterates_gap.size() - 2];
      res.report.ratios.push_back(prev > 0.0 ? gap / prev : 0.0);
      grow_streak = gap > prev ? grow_streak + 1 : 0;
      if (grow_streak >= 3) {
        res.report.diverged = true;
        res.solution = std::move(next);
        return res;
      }
    }
    current = std::move(next);
    if (gap < tol) {
      res.report.converged = true;
      break;
    }
  }
  res.solution = std::move(current);
  return res;
}

inline Trajectory scale_trajectory(const Trajectory& u, double a) {
  Trajectory out = u;
  for (Field& st : out.states)
    for (cplx& v : st.samples) v *= a;
  return out;
}

/// Restriction to [0, T]: keeps the samples with t <= T and rebuilds the
/// trapezoid weights on the surviving times.
inline Trajectory restrict_trajectory(const Trajectory& u, double T) {
  Trajectory out;
  out.grid = u.grid;
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    if (u.times[i] > T + 1e-12) break;
    out.times.push_back(u.times[i]);
    out.states.push_back(u.states[i]);
  }
  const std::size_t m = out.times.size();
  if (m < 2)
    throw std::invalid_argument("restrict_trajectory: fewer than 2 samples");
  out.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i == 0 ? out.times[0] : out.times[i - 1];
    const double right = i + 1 == m ? out.times[m - 1] : out.times[i + 1];
    out.weights[i] = 0.5 * (right - left);
  }
  return out;
}

/// Empirical constant of the nonlinear estimate: the dual-exponent norm of
/// <grad_y>^s F_p(u) against T^beta ||u||^p in the selected triple's norm.
/// Returns 0 for the zero trajectory.
inline double nonlinear_estimate_check(const Trajectory& u,
                                       const Nonlinearity& nl,
                                       const EquationParams& ep,
                                       const SelectionResult& sel, double T) {
  const double s = internal_regularity(ep);
  const Trajectory ut = restrict_trajectory(u, T);
  Trajectory fu;
  fu.grid = ut.grid;
  fu.times = ut.times;
  fu.weights = ut.weights;
  for (const Field& st : ut.states)
    fu.states.push_back(evaluate_nonlinearity(nl, st));

  auto dual = [](const Rational& x) {
    return (Rational(1) - x.reciprocal()).reciprocal();
  };
  const NormSpec lhs_spec{dual(sel.triple.q), dual(sel.triple.r),
                          dual(sel.triple.r_tilde), s, NormDerivative::y_only,
                          DerivativeFlavor::inhomogeneous};
  const double lhs = spacetime_norm(fu, lhs_spec);

  const NormSpec rhs_spec = NormSpec::from_triple_with_derivative(
      sel.triple, s, NormDerivative::y_only);
  const double unorm = spacetime_norm(ut, rhs_spec);
  const double rhs = std::pow(T, sel.beta.to_double()) * std::pow(unorm, nl.p);
  if (!(rhs > 0.0)) return 0.0;
  return lhs / rhs;
}

/// Samples trajectory pairs in the ball X(T, A), applies the solution map to
/// both, and reports the contraction ratios together with the measured
/// invariance budget.  A = 2 C~ ||data||, with C~ the measured free-evolution
/// constant for this datum and grid.
inline ContractionReport contraction_experiment(
    const CauchyData& data, const Nonlinearity& nl, const EquationParams& ep,
    double T, int n_pairs, std::uint64_t seed = 1, int time_samples = 33,
    std::vector<ExponentTriple> triples = {}) {
  validate(ep);
  if (n_pairs < 2)
    throw std::invalid_argument("contraction_experiment: n_pairs >= 2");
  if (triples.empty()) triples = default_distance_triples(ep);

  ContractionReport rep;
  rep.T = T;
  rep.data_norm_value = data_norm(data, ep);
  const SelectionResult sel =
      ep.sigma == 2
          ? select_schrodinger_exponents(ep.N, ep.s, ep.p)
          : select_wave_exponents(ep.N, ep.s - Rational(1, 2), ep.p);
  rep.beta = sel.beta.to_double();

  const Trajectory free_traj = free_evolution_of(data, T, time_samples);
  const double free_x = solution_space_norm(free_traj, ep, triples);
  rep.c_free = free_x / rep.data_norm_value;
  rep.A = 2.0 * free_x;

  const int mode_radius = 3;
  auto random_ball_trajectory = [&](std::uint64_t stream, double xnorm) {
    Trajectory t;
    if (std::holds_alternative<CauchyDataS>(data)) {
      const Field rf =
          random_band_field(free_traj.grid, mode_radius, seed, stream);
      t = nls_free_evolution(rf, T, time_samples);
    } else {
      const Field rf = remove_mean(
          random_band_field(free_traj.grid, mode_radius, seed, stream));
      const Field rg = remove_mean(
          random_band_field(free_traj.grid, mode_radius, seed, stream + 1000));
      t = wave_free_evolution(rf, rg, T, time_samples);
    }
    const double x = solution_space_norm(t, ep, triples);
    return scale_trajectory(t, x > 0.0 ? xnorm / x : 0.0);
  };

  double max_duhamel = 0.0;
  const KeyedRng rng(seed, 0xc0ffee);
  for (int pair = 0; pair < n_pairs; ++pair) {
    Trajectory u, v;
    if (pair == 0) {
      // distance ~ A: antipodal pair on the ball surface
      u = random_ball_trajectory(2 * pair, 0.5 * rep.A);
      v = scale_trajectory(u, -1.0);
    } else if (pair == 1) {
      // distance ~ A/100: small perturbation of one trajectory
      u = random_ball_trajectory(2 * pair, 0.9 * rep.A);
      const Trajectory w = random_ball_trajectory(2 * pair + 1, rep.A / 200.0);
      v = u;
      for (std::size_t i = 0; i < v.states.size(); ++i)
        v.states[i] = v.states[i] + w.states[i];
    } else {
      u = random_ball_trajectory(2 * pair,
                                 rep.A * (0.2 + 0.8 * rng.uniform(pair)));
      v = random_ball_trajectory(2 * pair + 1,
                                 rep.A * (0.2 + 0.8 * rng.uniform(pair + 77)));
    }
    const double duv = contraction_distance(u, v, triples);
    if (!(duv > 0.0)) continue;
    const Trajectory phi_u = apply_solution_map(data, u, nl, T);
    const Trajectory phi_v = apply_solution_map(data, v, nl, T);
    rep.ratios.push_back(contraction_distance(phi_u, phi_v, triples) / duv);

    // inhomogeneous-part constant from the same samples
    Trajectory duh = phi_u;
    for (std::size_t i = 0; i < duh.states.size(); ++i)
      duh.states[i] = duh.states[i] - free_traj.states[i];
    const double ux = solution_space_norm(u, ep, triples);
    if (ux > 0.0)
      max_duhamel = std::max(
          max_duhamel, solution_space_norm(duh, ep, triples) /
                           (std::pow(T, rep.beta) * std::pow(ux, nl.p)));
  }
  rep.c_duhamel = max_duhamel;
  rep.budget_lhs = rep.c_free * rep.data_norm_value +
                   rep.c_duhamel * std::pow(T, rep.beta) *
                       std::pow(rep.A, nl.p);
  rep.budget_rhs = rep.A;
  bool ratios_ok = !rep.ratios.empty();
  for (double r : rep.ratios) ratios_ok = ratios_ok && r <= 0.5;
  rep.converged = ratios_ok && rep.budget_lhs <= rep.budget_rhs;
  return rep;
}

// ---------------------------------------------------------------------------
// Partially regular data
// ---------------------------------------------------------------------------

struct RoughDataProfile {
  double rough_x_exponent = 1.0;  // spectral decay power of the x-profile
  double smooth_y_width = 0.0;    // gaussian width; 0 = extent/8
};

struct RoughDataDiagnostics {
  double phi1_l2 = 0.0, phi1_l2_doubled = 0.0;
  double phi1_hs = 0.0, phi1_hs_doubled = 0.0;
  double mixed = 0.0, mixed_doubled = 0.0;    // || f ||_{L^2_x H^s_y}
  double full_hs = 0.0, full_hs_doubled = 0.0;  // || f ||_{H^s}
};

namespace detail {

/// Random-phase spectral synthesis with amplitude |xi|^-decay on every
/// lattice mode up to Nyquist.  Coefficients are keyed by the signed mode,
/// so refining the grid extends the spectrum without touching the modes
/// already present.
inline Field rough_profile(const TorusGrid& g, double decay,
                           std::uint64_t seed) {
  const KeyedRng rng(seed, 0x0f15);
  Field spec(g);
  const int d = g.dim();
  const double amp_to_unitary = std::sqrt(static_cast<double>(g.size()));
  for_each_index(g, [&](std::size_t flat, const int* idx) {
    std::array<int, 8> m{};
    double xi2 = 0.0;
    bool origin = true;
    for (int i = 0; i < d; ++i) {
      const int n = g.axis(i).points;
      m[i] = idx[i] < n / 2 ? idx[i] : idx[i] - n;
      if (m[i] != 0) origin = false;
      const double z = g.frequency(i, idx[i]);
      xi2 += z * z;
    }
    if (origin) {
      spec[flat] = 0.0;
      return;
    }
    const double amp = std::pow(xi2, -0.5 * decay);
    spec[flat] =
        amp_to_unitary * amp * rng.phase(mode_key(m.data(), d));
  });
  return inverse_transform(spec);
}

inline TorusGrid doubled(const TorusGrid& g) {
  std::vector<Axis> axes = g.axes();
  for (Axis& a : axes) a.points *= 2;
  return TorusGrid(std::move(axes), g.split());
}

}  // namespace detail

/// Builds f = phi1(x) (x) phi2(y): phi1 rough (square-summable coefficients
/// whose H^s sum diverges in the continuum limit), phi2 a smooth gaussian.
/// Diagnostics carry the same norms on the doubled grid; the partial norm
/// must be refinement-stable while || phi1 ||_{H^s} grows.
inline std::pair<Field, RoughDataDiagnostics> rough_data_builder(
    const RoughDataProfile& profile, const TorusGrid& grid, double s,
    std::uint64_t seed = 1) {
  const int d = grid.dim();
  const int k = grid.split();
  if (k >= d)
    throw std::invalid_argument("rough_data_builder: need x axes (k < dim)");

  auto assemble = [&](const TorusGrid& g) {
    std::vector<Axis> x_axes(g.axes().begin(), g.axes().end() - k);
    std::vector<Axis> y_axes(g.axes().end() - k, g.axes().end());
    const TorusGrid gx(x_axes, static_cast<int>(x_axes.size()));
    const TorusGrid gy(y_axes, k);
    const Field phi1 =
        detail::rough_profile(gx, profile.rough_x_exponent, seed);
    const double width = profile.smooth_y_width > 0.0
                             ? profile.smooth_y_width
                             : y_axes.front().extent / 8.0;
    const Field phi2 = gaussian_field(gy, width);
    Field f(g);
    const std::size_t ycount = gy.size();
    for (std::size_t xs = 0; xs < gx.size(); ++xs)
      for (std::size_t ys = 0; ys < ycount; ++ys)
        f[xs * ycount + ys] = phi1[xs] * phi2[ys];
    return std::tuple{f, phi1};
  };

  const auto [f, phi1] = assemble(grid);
  const auto [f2, phi1_2] = assemble(detail::doubled(grid));

  RoughDataDiagnostics diag;
  diag.phi1_l2 = l2_norm(phi1);
  diag.phi1_l2_doubled = l2_norm(phi1_2);
  diag.phi1_hs = sobolev_norm(phi1, s, DerivativeFlavor::inhomogeneous);
  diag.phi1_hs_doubled =
      sobolev_norm(phi1_2, s, DerivativeFlavor::inhomogeneous);
  diag.mixed = sobolev_norm(f, s, DerivativeFlavor::inhomogeneous,
                            DerivativeAxes::y_only);
  diag.mixed_doubled = sobolev_norm(f2, s, DerivativeFlavor::inhomogeneous,
                                    DerivativeAxes::y_only);
  diag.full_hs = sobolev_norm(f, s, DerivativeFlavor::inhomogeneous);
  diag.full_hs_doubled =
      sobolev_norm(f2, s, DerivativeFlavor::inhomogeneous);
  return {f, diag};
}

}  // namespace displab
