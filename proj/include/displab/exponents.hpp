#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "displab/rational.hpp"

namespace displab {

/// Mixed-norm exponent triple (q, r, r~): q in time, r over the x-block,
/// r~ over the y-block.
struct ExponentTriple {
  Rational q;
  Rational r;
  Rational r_tilde;

  bool operator==(const ExponentTriple&) const = default;
};

/// Equation/data parameters: total dimension N, y-block dimension k,
/// flow order sigma (1 = half-wave, 2 = Schroedinger), data regularity s,
/// nonlinearity power p.
struct EquationParams {
  int N = 3;
  int k = 2;
  int sigma = 2;
  Rational s = Rational(1);
  Rational p = Rational(3);
};

inline void validate(const EquationParams& ep) {
  if (ep.N < 1) throw std::invalid_argument("EquationParams: N >= 1 required");
  if (ep.k < 1 || ep.k > ep.N)
    throw std::invalid_argument("EquationParams: 1 <= k <= N required");
  if (ep.sigma != 1 && ep.sigma != 2)
    throw std::invalid_argument("EquationParams: sigma must be 1 or 2");
  if (ep.p <= Rational(1))
    throw std::invalid_argument("EquationParams: p > 1 required");
}

/// Critical regularity s_c = N/2 - 2/(p-1).
inline Rational critical_index(int N, const Rational& p) {
  if (N < 1) throw std::invalid_argument("critical_index: N >= 1 required");
  if (p <= Rational(1))
    throw std::invalid_argument("critical_index: p > 1 required");
  return Rational(N, 2) - Rational(2) / (p - Rational(1));
}

/// Power of delta in the homogeneous Sobolev norm of rescaled data:
/// 2/(p-1) + s - N/2.  Vanishes exactly at s = s_c.
inline Rational scaling_exponent(int N, const Rational& p, const Rational& s) {
  if (N < 1) throw std::invalid_argument("scaling_exponent: N >= 1 required");
  if (p <= Rational(1))
    throw std::invalid_argument("scaling_exponent: p > 1 required");
  return Rational(2) / (p - Rational(1)) + s - Rational(N, 2);
}

namespace detail {
inline bool triple_range_ok(const ExponentTriple& t) {
  // 2 < q <= inf, 2 <= r~ <= r < inf.
  return t.q > Rational(2) && t.r_tilde >= Rational(2) &&
         t.r >= t.r_tilde && !t.r.is_infinite() && !t.r_tilde.is_infinite();
}
}  // namespace detail

/// Membership in the Schroedinger class: 2 < q <= inf, 2 <= r~ <= r < inf,
/// 2/q + (N-k)/r + k/r~ = N/2.
inline bool in_class_S(int N, int k, const ExponentTriple& t) {
  if (k < 1 || k >= N)
    throw std::invalid_argument("in_class_S: 1 <= k < N required");
  if (!detail::triple_range_ok(t)) return false;
  const Rational lhs = Rational(2) * t.q.reciprocal() +
                       Rational(N - k) * t.r.reciprocal() +
                       Rational(k) * t.r_tilde.reciprocal();
  return lhs == Rational(N, 2);
}

/// Membership in the wave class: additionally to the range constraints,
/// 1/q + (N-k)/r + k/r~ = (N-1)/2 and 2/q + (N-k-1)/r + k/r~ <= (N-1)/2.
inline bool in_class_W(int N, int k, const ExponentTriple& t) {
  if (k < 1 || k >= N)
    throw std::invalid_argument("in_class_W: 1 <= k < N required");
  if (!detail::triple_range_ok(t)) return false;
  const Rational half_n1 = Rational(N - 1, 2);
  const Rational eq = t.q.reciprocal() + Rational(N - k) * t.r.reciprocal() +
                      Rational(k) * t.r_tilde.reciprocal();
  if (eq != half_n1) return false;
  const Rational ineq = Rational(2) * t.q.reciprocal() +
                        Rational(N - k - 1) * t.r.reciprocal() +
                        Rational(k) * t.r_tilde.reciprocal();
  return ineq <= half_n1;
}

/// Fixed-time decay rate
/// beta_sigma(r, r~) = (N-k-2+sigma)(1/2 - 1/r) + k(1/2 - 1/r~).
inline Rational dispersive_beta(int N, int k, int sigma, const Rational& r,
                                const Rational& r_tilde) {
  if (k < 1 || k > N)
    throw std::invalid_argument("dispersive_beta: 1 <= k <= N required");
  if (sigma != 1 && sigma != 2)
    throw std::invalid_argument("dispersive_beta: sigma must be 1 or 2");
  if (r_tilde < Rational(2) || r < r_tilde)
    throw std::invalid_argument("dispersive_beta: require 2 <= r~ <= r");
  const Rational half(1, 2);
  return Rational(N - k - 2 + sigma) * (half - r.reciprocal()) +
         Rational(k) * (half - r_tilde.reciprocal());
}

/// Outcome of checking a triple against the dispersive/scaling conditions:
/// condition_sc2 is 2/q <= (N-2-k+sigma)(1/2-1/r) + k(1/2-1/r~);
/// implied_s solves sigma/q = (N-k)(1/2-1/r) + k(1/2-1/r~) - s.
struct Thm1Report {
  bool condition_sc2 = false;
  Rational implied_s;
  bool strict = false;
};

inline Thm1Report check_thm1_conditions(const EquationParams& ep,
                                        const ExponentTriple& t) {
  validate(ep);
  if (!detail::triple_range_ok(t))
    throw std::invalid_argument(
        "check_thm1_conditions: triple outside 2 < q <= inf, 2 <= r~ <= r < inf");
  const Rational half(1, 2);
  const Rational inv_q = t.q.reciprocal();
  const Rational rhs = Rational(ep.N - 2 - ep.k + ep.sigma) *
                           (half - t.r.reciprocal()) +
                       Rational(ep.k) * (half - t.r_tilde.reciprocal());
  Thm1Report rep;
  rep.condition_sc2 = Rational(2) * inv_q <= rhs;
  rep.strict = Rational(2) * inv_q < rhs;
  rep.implied_s = Rational(ep.N - ep.k) * (half - t.r.reciprocal()) +
                  Rational(ep.k) * (half - t.r_tilde.reciprocal()) -
                  Rational(ep.sigma) * inv_q;
  return rep;
}

/// Epsilon choice inside the open selection window.
struct PickRule {
  enum class Kind { midpoint, fixed } kind = Kind::midpoint;
  Rational value;  // used when kind == fixed

  static PickRule midpoint() { return {}; }
  static PickRule fixed(const Rational& eps) {
    return {Kind::fixed, eps};
  }
};

/// Output of the exponent-selection procedures: the chosen epsilon, the
/// open window it came from, the resulting triple, and the time gain beta.
struct SelectionResult {
  Rational epsilon;
  Rational window_lo;
  Rational window_hi;
  ExponentTriple triple;
  Rational beta;
};

struct EmptyWindowError : std::domain_error {
  using std::domain_error::domain_error;
};

namespace detail {
inline Rational pick_epsilon(const PickRule& pick, const Rational& lo,
                             const Rational& hi, const char* who) {
  if (lo >= hi)
    throw EmptyWindowError(std::string(who) +
                           ": empty epsilon window (" + lo.str() + ", " +
                           hi.str() + ") -- parameters outside hypotheses");
  Rational eps;
  if (pick.kind == PickRule::Kind::midpoint) {
    eps = (lo + hi) / Rational(2);
  } else {
    eps = pick.value;
    if (eps <= lo || eps >= hi)
      throw EmptyWindowError(std::string(who) + ": requested epsilon " +
                             eps.str() + " outside open window (" + lo.str() +
                             ", " + hi.str() + ")");
  }
  return eps;
}
}  // namespace detail

/// Selects (q0, r0, r0~) in the Schroedinger class with k = 2 for given
/// (N, s, p), together with beta_0 = 1 - (p+1)/q0 > 0.  The window for
/// epsilon_0 is ((1-s)(p-1)/2, min{(N-2)/4 (1 + 4/(N-2) - p), (p-1)/2}).
inline SelectionResult select_schrodinger_exponents(
    int N, const Rational& s, const Rational& p,
    const PickRule& pick = PickRule::midpoint()) {
  if (N < 3)
    throw std::invalid_argument("select_schrodinger_exponents: N >= 3");
  if (s <= Rational(0) || s > Rational(1))
    throw std::invalid_argument("select_schrodinger_exponents: 0 < s <= 1");
  if (p <= Rational(1))
    throw std::invalid_argument("select_schrodinger_exponents: p > 1");

  const Rational one(1), two(2), four(4);
  const Rational lo = (one - s) * (p - one) / two;
  const Rational slack =
      Rational(N - 2, 4) * (one + four / Rational(N - 2) - p);
  const Rational hi = min(slack, (p - one) / two);
  SelectionResult out;
  out.window_lo = lo;
  out.window_hi = hi;
  out.epsilon =
      detail::pick_epsilon(pick, lo, hi, "select_schrodinger_exponents");

  const Rational inv_p1 = (p + one).reciprocal();
  const Rational inv_r = inv_p1;
  const Rational inv_rt = Rational(1, 2) - out.epsilon * inv_p1;
  const Rational inv_q = Rational(N - 2, 4) -
                         Rational(N - 2) / (two * (p + one)) +
                         out.epsilon * inv_p1;
  out.triple = {inv_q.reciprocal(), inv_r.reciprocal(), inv_rt.reciprocal()};
  out.beta = one - (p + one) * inv_q;

  if (!in_class_S(N, 2, out.triple))
    throw std::logic_error(
        "select_schrodinger_exponents: selected triple not admissible");
  if (out.beta <= Rational(0) || out.beta != slack - out.epsilon)
    throw std::logic_error(
        "select_schrodinger_exponents: beta identity violated");
  return out;
}

/// Selects (q1, r1, r1~) in the wave class with k = 1 for given (N, s, p),
/// with beta_1 = 1 - (p+1)/q1 > 0.  The window for epsilon_1 is
/// (max{(1-2s)(p-1)/2, 1-(N-2)(p-1)/2}, min{(p-1)/2, 2-(N-2)(p-1)/2}).
inline SelectionResult select_wave_exponents(
    int N, const Rational& s, const Rational& p,
    const PickRule& pick = PickRule::midpoint()) {
  if (N < 2) throw std::invalid_argument("select_wave_exponents: N >= 2");
  if (s <= Rational(0) || s > Rational(1, 2))
    throw std::invalid_argument("select_wave_exponents: 0 < s <= 1/2");
  const Rational one(1), two(2);
  if (p <= one + two / Rational(N - 1))
    throw EmptyWindowError(
        "select_wave_exponents: p <= 1 + 2/(N-1), below admissible range");
  // Upper p-bound 1 + 4/(N-1-2s), vacuous when N-1-2s <= 0.
  const Rational denom = Rational(N - 1) - two * s;
  if (denom > Rational(0) && p >= one + Rational(4) / denom)
    throw EmptyWindowError(
        "select_wave_exponents: p at or beyond the critical endpoint");

  const Rational half_gap = Rational(N - 2) * (p - one) / two;
  const Rational lo = max((one - two * s) * (p - one) / two, one - half_gap);
  const Rational hi = min((p - one) / two, two - half_gap);
  SelectionResult out;
  out.window_lo = lo;
  out.window_hi = hi;
  out.epsilon = detail::pick_epsilon(pick, lo, hi, "select_wave_exponents");

  const Rational inv_p1 = (p + one).reciprocal();
  const Rational inv_r = inv_p1;
  const Rational inv_rt = Rational(1, 2) - out.epsilon * inv_p1;
  const Rational inv_q = Rational(N - 2, 2) - Rational(N - 1) * inv_p1 +
                         out.epsilon * inv_p1;
  out.triple = {inv_q.reciprocal(), inv_r.reciprocal(), inv_rt.reciprocal()};
  out.beta = one - (p + one) * inv_q;

  if (!in_class_W(N, 1, out.triple))
    throw std::logic_error(
        "select_wave_exponents: selected triple not admissible");
  if (out.beta <= Rational(0))
    throw std::logic_error("select_wave_exponents: beta not positive");
  return out;
}

enum class AdmissibleFlavor { S, W };

/// Enumerates admissible triples whose reciprocals 1/q, 1/r, 1/r~ are
/// fractions with denominator <= denom_bound (1/q = 0 covers q = inf).
/// Enumerating reciprocal denominators keeps the set finite for every
/// (N, k); results are sorted ascending by (q, r, r~) with inf greatest.
inline std::vector<ExponentTriple> admissible_enumerate(int N, int k,
                                                        AdmissibleFlavor f,
                                                        int denom_bound) {
  if (denom_bound < 2)
    throw std::invalid_argument("admissible_enumerate: denom_bound >= 2");
  std::vector<Rational> inv_vals;  // candidate values of 1/q, 1/r, 1/r~
  inv_vals.emplace_back(0);
  for (int den = 1; den <= denom_bound; ++den)
    for (int num = 1; 2 * num <= den; ++num)
      inv_vals.emplace_back(num, den);
  std::sort(inv_vals.begin(), inv_vals.end());
  inv_vals.erase(std::unique(inv_vals.begin(), inv_vals.end()),
                 inv_vals.end());

  std::vector<ExponentTriple> result;
  for (const auto& iq : inv_vals)
    for (const auto& ir : inv_vals)
      for (const auto& irt : inv_vals) {
        if (ir.is_zero() || irt.is_zero()) continue;  // r, r~ finite
        ExponentTriple t{iq.reciprocal(), ir.reciprocal(), irt.reciprocal()};
        const bool ok = (f == AdmissibleFlavor::S) ? in_class_S(N, k, t)
                                                   : in_class_W(N, k, t);
        if (ok) result.push_back(t);
      }
  std::sort(result.begin(), result.end(),
            [](const ExponentTriple& a, const ExponentTriple& b) {
              if (a.q != b.q) return a.q < b.q;
              if (a.r != b.r) return a.r < b.r;
              return a.r_tilde < b.r_tilde;
            });
  return result;
}

}  // namespace displab
