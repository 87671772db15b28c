#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "displab/cutoff.hpp"
#include "displab/grid.hpp"
#include "displab/parallel.hpp"
#include "displab/quadrature.hpp"
#include "displab/smallmat.hpp"

namespace displab {

// ---------------------------------------------------------------------------
// Band-0 dispersive kernel
//   K_sigma(x, y, t) = (2pi)^-N  int e^{i (x,y).(xi,eta)} e^{i t |(xi,eta)|^sigma}
//                      psi(xi, eta) d eta d xi
// and its partial transform K~_sigma(x, eta, t) (the y-integral replaced by a
// frozen eta), both by tensor-product Gauss-Legendre over the bounding box of
// the annulus with psi supplying the cutoff.  Axes whose probe component is
// zero are folded onto [0, 2] (the integrand is even there), and the
// sigma = 2 phase splits into per-axis factors.
// ---------------------------------------------------------------------------

/// Per-axis node count resolving the oscillation at >= 4 nodes per period
/// across the box: the axis phase derivative is bounded by
/// sigma 2^{sigma-1} |t| + |z_i|.  The base floor resolves the cutoff
/// profile itself (the mollifier needs ~10^2 nodes per axis before the
/// spectral convergence of the rule sets in).
inline int kernel_quad_points(double t, double probe_linf, int sigma,
                              int base = 128) {
  const double deriv = std::abs(t) * (sigma == 2 ? 4.0 : 1.0) + probe_linf;
  const int n = static_cast<int>(std::ceil(8.0 * deriv / M_PI));
  return std::max(base, n);
}

namespace detail {

struct AxisRule {
  std::vector<double> sq;       // zeta^2 at the nodes
  std::vector<cplx> factor;     // weight * e^{i z zeta} (* e^{i t zeta^2})
};

inline AxisRule make_axis_rule(double z, double t, int sigma, int n) {
  const bool fold = (z == 0.0);
  const GaussLegendre rule =
      fold ? gauss_legendre_on((n + 1) / 2, 0.0, 2.0)
           : gauss_legendre_on(n, -2.0, 2.0);
  AxisRule ax;
  const std::size_t m = rule.nodes.size();
  ax.sq.resize(m);
  ax.factor.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double zeta = rule.nodes[i];
    ax.sq[i] = zeta * zeta;
    double w = rule.weights[i] * (fold ? 2.0 : 1.0);
    double phase = z * zeta;
    if (sigma == 2) phase += t * zeta * zeta;
    ax.factor[i] = w * cplx(std::cos(phase), std::sin(phase));
  }
  return ax;
}

/// integral over [-2,2]^d of e^{i z . zeta} e^{i t (|zeta|^2 + u0)^{sigma/2}}
/// psi(sqrt(|zeta|^2 + u0)) d zeta, for sigma = 2 without the constant
/// e^{i t u0} factor (the caller applies it).
inline cplx annulus_oscillatory_integral(const std::vector<double>& probe,
                                         double t, int sigma,
                                         const SpectralCutoff& cut,
                                         int nodes_per_axis, double u0) {
  const int d = static_cast<int>(probe.size());
  std::vector<AxisRule> ax;
  ax.reserve(d);
  for (int i = 0; i < d; ++i)
    ax.push_back(make_axis_rule(probe[i], t, sigma, nodes_per_axis));

  const AxisRule& inner = ax.back();
  const std::size_t inner_n = inner.sq.size();
  std::size_t outer = 1;
  for (int i = 0; i + 1 < d; ++i) outer *= ax[i].sq.size();

  return parallel_sum<cplx>(outer, 64, [&](std::size_t oi) {
    // decompose the flattened outer index into axis indices
    double u_pre = u0;
    cplx pref(1.0, 0.0);
    std::size_t rem = oi;
    for (int axi = d - 2; axi >= 0; --axi) {
      const std::size_t n = ax[axi].sq.size();
      const std::size_t ii = rem % n;
      rem /= n;
      u_pre += ax[axi].sq[ii];
      pref *= ax[axi].factor[ii];
    }
    cplx acc(0.0, 0.0);
    if (sigma == 2) {
      for (std::size_t i = 0; i < inner_n; ++i) {
        const double u = u_pre + inner.sq[i];
        const double psi = cut.psi_radius2(u);
        if (psi != 0.0) acc += psi * inner.factor[i];
      }
    } else {
      for (std::size_t i = 0; i < inner_n; ++i) {
        const double u = u_pre + inner.sq[i];
        const double psi = cut.psi_radius2(u);
        if (psi != 0.0) {
          const double ph = t * std::sqrt(u);
          acc += psi * inner.factor[i] * cplx(std::cos(ph), std::sin(ph));
        }
      }
    }
    return pref * acc;
  });
}

inline void check_kernel_args(int dim, int sigma, int quad_points) {
  if (dim < 1 || dim > 4)
    throw std::invalid_argument("kernel: dimension must be 1..4");
  if (sigma != 1 && sigma != 2)
    throw std::invalid_argument("kernel: sigma must be 1 or 2");
  if (quad_points < 2)
    throw std::invalid_argument("kernel: quad_points >= 2 required");
}

}  // namespace detail

inline cplx kernel_value(const std::vector<double>& x,
                         const std::vector<double>& y, double t, int sigma,
                         const SpectralCutoff& cutoff, int quad_points) {
  std::vector<double> probe = x;
  probe.insert(probe.end(), y.begin(), y.end());
  const int N = static_cast<int>(probe.size());
  detail::check_kernel_args(N, sigma, quad_points);
  const cplx integral = detail::annulus_oscillatory_integral(
      probe, t, sigma, cutoff, quad_points, 0.0);
  return integral * std::pow(2.0 * M_PI, -N);
}

inline cplx partial_kernel_value(const std::vector<double>& x,
                                 const std::vector<double>& eta, double t,
                                 int sigma, const SpectralCutoff& cutoff,
                                 int quad_points) {
  const int d = static_cast<int>(x.size());
  const int N = d + static_cast<int>(eta.size());
  detail::check_kernel_args(d, sigma, quad_points);
  double u0 = 0.0;
  for (double e : eta) u0 += e * e;
  if (u0 >= 4.0) return cplx(0.0, 0.0);  // empty xi-section of supp psi
  cplx integral = detail::annulus_oscillatory_integral(x, t, sigma, cutoff,
                                                       quad_points, u0);
  if (sigma == 2) {
    const double ph = t * u0;
    integral *= cplx(std::cos(ph), std::sin(ph));
  }
  return integral * std::pow(2.0 * M_PI, -N);
}

/// Kernel value together with the relative shift under doubled quadrature.
struct KernelEval {
  cplx value;
  double refinement_shift = 0.0;
  bool converged = true;
};

inline KernelEval kernel_value_checked(const std::vector<double>& x,
                                       const std::vector<double>& y, double t,
                                       int sigma, const SpectralCutoff& cutoff,
                                       int quad_points, double rel_tol = 1e-4) {
  KernelEval ev;
  ev.value = kernel_value(x, y, t, sigma, cutoff, quad_points);
  const cplx fine = kernel_value(x, y, t, sigma, cutoff, 2 * quad_points);
  const double scale = std::max(std::abs(fine), 1e-300);
  ev.refinement_shift = std::abs(ev.value - fine) / scale;
  ev.converged = ev.refinement_shift <= rel_tol;
  ev.value = fine;
  return ev;
}

// ---------------------------------------------------------------------------
// Phase Hessians
// ---------------------------------------------------------------------------

/// Phase phi_{sigma,eta}(xi) = |(xi, eta)|^sigma with the y-frequency eta
/// frozen; an empty eta is the full phase on R^N.
struct PhaseSpec {
  int sigma = 2;
  std::vector<double> eta;
};

inline double phase_value(const PhaseSpec& spec, const double* xi, int d) {
  double u = 0.0;
  for (int i = 0; i < d; ++i) u += xi[i] * xi[i];
  for (double e : spec.eta) u += e * e;
  return spec.sigma == 2 ? u : std::sqrt(u);
}

namespace detail {
inline double annulus_radius(const PhaseSpec& spec,
                             const std::vector<double>& xi) {
  double u = 0.0;
  for (double v : xi) u += v * v;
  for (double e : spec.eta) u += e * e;
  return std::sqrt(u);
}
}  // namespace detail

/// Analytic Hessian of phi_{sigma,eta} at xi: 2 I for sigma = 2, and
/// (rho^2 delta_ij - xi_i xi_j) / rho^3 with rho = |(xi, eta)| for sigma = 1.
/// (xi, eta) must lie in the closed annulus 1/2 <= |(xi,eta)| <= 2.
inline SymMatrix hessian_of_phase(const PhaseSpec& spec,
                                  const std::vector<double>& xi) {
  if (spec.sigma != 1 && spec.sigma != 2)
    throw std::invalid_argument("hessian_of_phase: sigma must be 1 or 2");
  if (xi.empty())
    throw std::invalid_argument("hessian_of_phase: empty frequency");
  const double rho = detail::annulus_radius(spec, xi);
  if (rho < 0.5 - 1e-12 || rho > 2.0 + 1e-12)
    throw std::domain_error("hessian_of_phase: point outside the annulus");
  const int d = static_cast<int>(xi.size());
  SymMatrix h(d);
  if (spec.sigma == 2) {
    for (int i = 0; i < d; ++i) h.at(i, i) = 2.0;
    return h;
  }
  const double inv_r3 = 1.0 / (rho * rho * rho);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      h.at(i, j) = ((i == j ? rho * rho : 0.0) - xi[i] * xi[j]) * inv_r3;
  return h;
}

/// Numerical rank: eigenvalues above tol x the largest magnitude.
inline int hessian_rank(const PhaseSpec& spec, const std::vector<double>& xi,
                        double tol = 1e-8) {
  return rank_from_eigenvalues(sym_eigenvalues(hessian_of_phase(spec, xi)),
                               tol);
}

// ---------------------------------------------------------------------------
// Decay fits
// ---------------------------------------------------------------------------

enum class KernelNormMode { sup_xy, sup_x_l2_eta };
enum class RefinementCheck { none, spot, all };

struct DecayFitReport {
  double fitted_slope = 0.0;
  double predicted_beta = 0.0;
  std::pair<double, double> t_range{0.0, 0.0};
  double residual = 0.0;
  std::vector<double> t_values;
  std::vector<double> norm_values;
  double envelope_constant = 0.0;  // max value * (1+t)^predicted_beta
  bool quadrature_converged = true;
  double max_refinement_shift = 0.0;
};

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i)
    t[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return t;
}

namespace detail {

/// Probe radii tracking the dispersive peak: the stationary frequency of
/// t |zeta|^sigma + z . zeta sweeps the annulus at |z| ~ sigma 2^{sigma-1} t
/// (sigma = 2) resp. exactly |z| = t (sigma = 1), so a probe set frozen in
/// space would only see the superpolynomial tail of the smooth cutoff.
/// The origin stays in the set.
inline std::vector<double> probe_radii(int sigma, double t,
                                       KernelNormMode mode) {
  if (mode == KernelNormMode::sup_x_l2_eta)
    return {0.0, 1.5 * t, 2.0 * t, 2.5 * t, 3.0 * t};
  if (sigma == 2) return {0.0, 1.5 * t, 2.0 * t, 2.4 * t};
  return {0.0, 0.9 * t, 1.0 * t, 1.05 * t};
}

struct ProbeEval {
  double value = 0.0;
  double shift = 0.0;
};

}  // namespace detail

/// Log-log decay fit of the band-0 kernel against t.  sup_xy reports the max
/// of |K_sigma| over the probe set, sup_x_l2_eta the max over x-probes of the
/// radial L^2_eta aggregate of the partial kernel over |eta| <= 2.
inline DecayFitReport decay_fit(int sigma, int N, int k, KernelNormMode mode,
                                const std::vector<double>& t_grid,
                                const SpectralCutoff& cutoff, int quad_base,
                                RefinementCheck check = RefinementCheck::spot) {
  if (t_grid.size() < 8)
    throw std::invalid_argument("decay_fit: need >= 8 t samples");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 1.0 || t_grid[i] > 100.0)
      throw std::invalid_argument("decay_fit: t_grid must lie in [1, 100]");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("decay_fit: t_grid must increase");
  }
  if (k < 1 || k >= N)
    throw std::invalid_argument("decay_fit: 1 <= k < N required");

  DecayFitReport rep;
  rep.t_range = {t_grid.front(), t_grid.back()};
  rep.predicted_beta = mode == KernelNormMode::sup_xy
                           ? 0.5 * (N - 2 + sigma)
                           : 0.5 * (N - k - 2 + sigma);

  auto eval_at = [&](double t, int mult) {
    double best = 0.0;
    for (double radius : detail::probe_radii(sigma, t, mode)) {
      const int n =
          mult * kernel_quad_points(t, radius, sigma, quad_base);
      if (mode == KernelNormMode::sup_xy) {
        std::vector<double> x(N - k, 0.0), y(k, 0.0);
        x[0] = radius;
        best = std::max(best,
                        std::abs(kernel_value(x, y, t, sigma, cutoff, n)));
      } else {
        std::vector<double> x(N - k, 0.0);
        x[0] = radius;
        // radial L^2 over |eta| <= 2: surface(S^{k-1}) int rho^{k-1} |K~|^2
        const GaussLegendre gl = gauss_legendre_on(48, 0.0, 2.0);
        const double surface = k == 1 ? 2.0 : 2.0 * M_PI;
        double sum = 0.0;
        for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
          std::vector<double> eta(k, 0.0);
          eta[0] = gl.nodes[g];
          const cplx kv = partial_kernel_value(x, eta, t, sigma, cutoff, n);
          sum += gl.weights[g] * std::pow(gl.nodes[g], k - 1) * std::norm(kv);
        }
        best = std::max(best, std::sqrt(surface * sum));
      }
    }
    return best;
  };

  for (double t : t_grid) {
    rep.t_values.push_back(t);
    rep.norm_values.push_back(eval_at(t, 1));
  }

  // refinement control: doubled quadrature at spot t values or everywhere
  std::vector<std::size_t> check_idx;
  if (check == RefinementCheck::spot)
    check_idx = {0, t_grid.size() / 2};
  else if (check == RefinementCheck::all)
    for (std::size_t i = 0; i < t_grid.size(); ++i) check_idx.push_back(i);
  for (std::size_t i : check_idx) {
    const double fine = eval_at(t_grid[i], 2);
    const double shift =
        std::abs(rep.norm_values[i] - fine) / std::max(fine, 1e-300);
    rep.max_refinement_shift = std::max(rep.max_refinement_shift, shift);
    if (shift > 1e-4) rep.quadrature_converged = false;
  }

  // least-squares slope of log(value) vs log(t)
  const std::size_t n = t_grid.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += std::log(rep.t_values[i]);
    sy += std::log(rep.norm_values[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(rep.t_values[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(rep.norm_values[i]) - my);
  }
  rep.fitted_slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = my + rep.fitted_slope * (std::log(rep.t_values[i]) - mx);
    const double r = std::log(rep.norm_values[i]) - fit;
    ss += r * r;
  }
  rep.residual = std::sqrt(ss / n);

  for (std::size_t i = 0; i < n; ++i)
    rep.envelope_constant =
        std::max(rep.envelope_constant,
                 rep.norm_values[i] *
                     std::pow(1.0 + rep.t_values[i], rep.predicted_beta));
  return rep;
}

}  // namespace displab
