#pragma once

#include <cmath>

#include "displab/norms.hpp"

namespace displab {

enum class NonlinearForm { power_preserving, power_modulus };

/// Power nonlinearity F_p: lambda |u|^{p-1} u (gauge invariant) or
/// lambda |u|^p.  Both satisfy |F_p(u)| = |lambda| |u|^p and
/// |u| |F_p'(u)| ~ |F_p(u)| with the Wirtinger-derivative magnitude
/// |d_u F| + |d_ubar F| = |lambda| p |u|^{p-1}.
struct Nonlinearity {
  double p = 3.0;
  double lambda = 1.0;
  NonlinearForm form = NonlinearForm::power_preserving;

  cplx operator()(cplx u) const {
    const double mag = std::abs(u);
    if (mag == 0.0) return {0.0, 0.0};
    if (form == NonlinearForm::power_preserving)
      return lambda * std::pow(mag, p - 1.0) * u;
    return {lambda * std::pow(mag, p), 0.0};
  }

  double derivative_magnitude(cplx u) const {
    const double mag = std::abs(u);
    if (mag == 0.0) return 0.0;
    return std::abs(lambda) * p * std::pow(mag, p - 1.0);
  }
};

inline Field evaluate_nonlinearity(const Nonlinearity& nl, const Field& u) {
  Field out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = nl(u[i]);
  return out;
}

/// Pointwise Lipschitz-structure constant: the max over samples of
/// |F(u) - F(v)| / ((|u|^{p-1} + |v|^{p-1}) |u - v|), skipping points where
/// the denominator is below 1e-14.
inline double lipschitz_check(const Nonlinearity& nl, const Field& u,
                              const Field& v) {
  if (!(u.grid == v.grid))
    throw std::invalid_argument("lipschitz_check: grid mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double mu = std::abs(u[i]), mv = std::abs(v[i]);
    const double denom = (std::pow(mu, nl.p - 1.0) + std::pow(mv, nl.p - 1.0)) *
                         std::abs(u[i] - v[i]);
    if (denom < 1e-14) continue;
    best = std::max(best, std::abs(nl(u[i]) - nl(v[i])) / denom);
  }
  return best;
}

/// Empirical chain-rule constant
///   || |grad|^s F(u) ||_{L^c} / ( ||u||^{p-1}_{L^{a(p-1)}} || |grad|^s u ||_{L^b} )
/// under the exponent relation 1/c = 1/a + 1/b (checked exactly).
inline double chain_rule_check(const Nonlinearity& nl, const Field& u,
                               double s, const Rational& a, const Rational& b,
                               const Rational& c) {
  if (c.reciprocal() != a.reciprocal() + b.reciprocal())
    throw std::invalid_argument("chain_rule_check: 1/c != 1/a + 1/b");
  if (a <= Rational(1) || b <= Rational(1) || c <= Rational(1) ||
      a.is_infinite() || b.is_infinite() || c.is_infinite())
    throw std::invalid_argument("chain_rule_check: exponents must be in (1, inf)");
  if (!(s > 0.0 && s <= 1.0))
    throw std::invalid_argument("chain_rule_check: s in (0, 1] required");
  const Field fu = evaluate_nonlinearity(nl, u);
  const Field dfu = fractional_derivative(fu, s, DerivativeAxes::all,
                                          DerivativeFlavor::homogeneous);
  const Field du = fractional_derivative(u, s, DerivativeAxes::all,
                                         DerivativeFlavor::homogeneous);
  const double num = mixed_space_norm(dfu, c, c);
  // a(p-1) is a real exponent: p is a run parameter, not a rational.
  const double den = std::pow(plain_lp_norm(u, a.to_double() * (nl.p - 1.0)),
                              nl.p - 1.0) *
                     mixed_space_norm(du, b, b);
  if (!(den > 0.0))
    throw std::invalid_argument("chain_rule_check: zero denominator");
  return num / den;
}

}  // namespace displab
