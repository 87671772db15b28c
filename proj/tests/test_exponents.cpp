#include <catch2/catch_amalgamated.hpp>

#include "displab/exponents.hpp"
#include "displab/rational.hpp"

using namespace displab;

namespace {

// Independent fraction evaluator used as oracle for the exact arithmetic.
// Deliberately separate from displab::Rational: plain long long, no
// infinity handling, reduction via std::gcd on construction only.
struct Frac {
  long long n = 0, d = 1;
  Frac(long long nn, long long dd) : n(nn), d(dd) {
    if (d < 0) { n = -n; d = -d; }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
  }
  friend Frac operator+(Frac a, Frac b) { return {a.n * b.d + b.n * a.d, a.d * b.d}; }
  friend Frac operator-(Frac a, Frac b) { return {a.n * b.d - b.n * a.d, a.d * b.d}; }
  friend Frac operator*(Frac a, Frac b) { return {a.n * b.n, a.d * b.d}; }
  friend bool operator==(Frac a, Frac b) { return a.n == b.n && a.d == b.d; }
};

bool equals(const Rational& r, long long n, long long d) {
  const Frac f(n, d);
  return !r.is_infinite() && r.num() == f.n && r.den() == f.d;
}

Rational rat(long long n, long long d = 1) { return Rational(n, d); }
const Rational inf = Rational::infinity();

}  // namespace

TEST_CASE("rational basics") {
  CHECK(rat(6, 4) == rat(3, 2));
  CHECK(rat(-6, -4) == rat(3, 2));
  CHECK(rat(6, -4) == rat(-3, 2));
  CHECK((rat(1, 3) + rat(1, 6)) == rat(1, 2));
  CHECK((rat(1, 2) - rat(2, 3)) == rat(-1, 6));
  CHECK((rat(3, 4) * rat(2, 9)) == rat(1, 6));
  CHECK((rat(3, 4) / rat(3, 2)) == rat(1, 2));
  CHECK(rat(1, 2) < rat(2, 3));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational infinity conventions") {
  CHECK(inf.is_infinite());
  CHECK(inf.reciprocal() == rat(0));
  CHECK(rat(0).reciprocal().is_infinite());
  CHECK(inf > rat(1000000));
  CHECK(displab::min(inf, rat(7)) == rat(7));
  CHECK(inf.str() == "inf");
  CHECK(rat(16, 7).str() == "16/7");
  CHECK_THROWS_AS(inf - inf, std::domain_error);
  CHECK_THROWS_AS(inf * rat(0), std::domain_error);
}

TEST_CASE("critical index against independent evaluator") {
  // s_c = N/2 - 2/(p-1), recomputed with the Frac oracle.
  auto oracle = [](long long N, Frac p) {
    const Frac pm1 = p - Frac(1, 1);
    // 2/(p-1) = 2*den/num of pm1
    return Frac(N, 2) - Frac(2 * pm1.d, pm1.n);
  };
  struct Case { int N; Rational p; } cases[] = {
      {3, rat(3)}, {4, rat(3)}, {2, rat(5)}, {3, rat(7, 2)}, {5, rat(2)}};
  for (const auto& c : cases) {
    const Frac expect = oracle(c.N, Frac(c.p.num(), c.p.den()));
    const Rational got = critical_index(c.N, c.p);
    CHECK(equals(got, expect.n, expect.d));
  }
  CHECK(equals(critical_index(3, rat(3)), 1, 2));
  CHECK(equals(critical_index(4, rat(3)), 1, 1));
  CHECK(equals(critical_index(2, rat(5)), 1, 2));
  CHECK_THROWS_AS(critical_index(3, rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(critical_index(3, rat(1, 2)), std::invalid_argument);
}

TEST_CASE("scaling exponent") {
  CHECK(scaling_exponent(3, rat(3), rat(1, 2)) == rat(0));  // s = s_c
  CHECK(scaling_exponent(3, rat(3), rat(1)) == rat(1, 2));
  CHECK(scaling_exponent(4, rat(2), rat(0)) == rat(0));
  // Invariant: vanishes exactly at the critical index for every (N, p).
  for (int N = 1; N <= 6; ++N)
    for (long long pn = 3; pn <= 9; ++pn) {
      const Rational p(pn, 2);
      CHECK(scaling_exponent(N, p, critical_index(N, p)) == rat(0));
    }
}

TEST_CASE("class membership, Schroedinger flavor") {
  CHECK(in_class_S(3, 2, {inf, rat(2), rat(2)}));
  CHECK_FALSE(in_class_S(3, 2, {rat(4), rat(4), rat(4)}));
  CHECK(in_class_S(3, 2, {rat(4), rat(4), rat(8, 3)}));
  // Boundary q = 2 is excluded even when the trace identity holds.
  CHECK_FALSE(in_class_S(4, 2, {rat(2), rat(4), rat(4)}));
  // r = inf excluded.
  CHECK_FALSE(in_class_S(3, 2, {rat(4), inf, rat(2)}));

  // With r = r~ the class reduces to 2/q + N/r = N/2 with q > 2.
  for (long long qn = 5; qn <= 24; ++qn) {
    const Rational q(qn, 2);
    if (q <= rat(2)) continue;
    // solve N/r = N/2 - 2/q for r
    const Rational inv_r = (rat(3, 2) - rat(2) / q) / rat(3);
    if (inv_r <= rat(0) || inv_r > rat(1, 2)) continue;
    const Rational r = inv_r.reciprocal();
    CHECK(in_class_S(3, 1, {q, r, r}));
    CHECK(in_class_S(3, 2, {q, r, r}));
  }
}

TEST_CASE("class membership, wave flavor") {
  CHECK(in_class_W(2, 1, {inf, rat(4), rat(4)}));
  CHECK(in_class_W(3, 1, {rat(4), rat(4), rat(4)}));
  CHECK_FALSE(in_class_W(2, 1, {rat(8), rat(4), rat(8)}));  // r~ > r
  CHECK(in_class_W(2, 1, {rat(20), rat(5), rat(4)}));
}

TEST_CASE("dispersive beta") {
  CHECK(dispersive_beta(3, 2, 2, inf, inf) == rat(3, 2));
  CHECK(dispersive_beta(3, 2, 2, inf, rat(2)) == rat(1, 2));
  CHECK(dispersive_beta(5, 1, 1, rat(2), rat(2)) == rat(0));
  // beta_sigma(inf, inf) = (N-2+sigma)/2 for all (N, k).
  for (int N = 2; N <= 5; ++N)
    for (int k = 1; k <= N; ++k)
      for (int sigma : {1, 2})
        CHECK(dispersive_beta(N, k, sigma, inf, inf) ==
              Rational(N - 2 + sigma, 2));
  // Monotone nondecreasing in r and r~ when N-k-2+sigma >= 0.
  const Rational rs[] = {rat(2), rat(5, 2), rat(3), rat(4), rat(8), inf};
  for (size_t i = 0; i + 1 < std::size(rs); ++i)
    for (size_t j = 0; j <= i; ++j) {
      CHECK(dispersive_beta(4, 2, 1, rs[i + 1], rs[j]) >=
            dispersive_beta(4, 2, 1, rs[i], rs[j]));
      CHECK(dispersive_beta(4, 2, 1, rs[i], rs[j]) >=
            dispersive_beta(4, 2, 1, rs[i], rs[j == 0 ? 0 : j - 1]));
    }
  CHECK_THROWS_AS(dispersive_beta(3, 2, 2, rat(3, 2), rat(2)),
                  std::invalid_argument);
}

TEST_CASE("thm1 condition report") {
  {
    const auto rep = check_thm1_conditions({3, 2, 2, rat(0), rat(3)},
                                           {inf, rat(2), rat(2)});
    CHECK(rep.condition_sc2);
    CHECK(rep.implied_s == rat(0));
    CHECK_FALSE(rep.strict);
  }
  {
    const auto rep = check_thm1_conditions({3, 1, 1, rat(0), rat(3)},
                                           {rat(4), rat(4), rat(4)});
    CHECK(rep.condition_sc2);
    CHECK(rep.implied_s == rat(1, 2));
    CHECK_FALSE(rep.strict);
  }
  {
    const auto rep = check_thm1_conditions({3, 2, 2, rat(0), rat(3)},
                                           {rat(4), rat(4), rat(4)});
    CHECK(rep.condition_sc2);
    CHECK(rep.implied_s == rat(1, 4));
    CHECK(rep.strict);
  }
  // Every S-class triple implies s = 0, every W-class triple s = 1/2.
  for (const auto& t : admissible_enumerate(3, 2, AdmissibleFlavor::S, 6)) {
    const auto rep = check_thm1_conditions({3, 2, 2, rat(0), rat(3)}, t);
    CHECK(rep.implied_s == rat(0));
    CHECK(rep.condition_sc2);
  }
  for (const auto& t : admissible_enumerate(3, 1, AdmissibleFlavor::W, 6)) {
    const auto rep = check_thm1_conditions({3, 1, 1, rat(0), rat(3)}, t);
    CHECK(rep.implied_s == rat(1, 2));
    CHECK(rep.condition_sc2);
  }
}

TEST_CASE("schroedinger exponent selection") {
  {
    const auto sel = select_schrodinger_exponents(3, rat(1), rat(3));
    CHECK(sel.window_lo == rat(0));
    CHECK(sel.window_hi == rat(1, 2));
    CHECK(sel.epsilon == rat(1, 4));
    CHECK(sel.triple.q == rat(16, 3));
    CHECK(sel.triple.r == rat(4));
    CHECK(sel.triple.r_tilde == rat(16, 7));
    CHECK(sel.beta == rat(1, 4));
    CHECK(sel.beta == rat(1, 2) - sel.epsilon);
    CHECK(in_class_S(3, 2, sel.triple));
  }
  // p = 1 + 4/(N-2s) is the excluded critical endpoint.
  CHECK_THROWS_AS(select_schrodinger_exponents(3, rat(1), rat(5)),
                  EmptyWindowError);
  {
    const auto sel = select_schrodinger_exponents(4, rat(1), rat(2));
    CHECK(sel.window_lo == rat(0));
    CHECK(sel.window_hi == rat(1, 2));
    CHECK(sel.beta > rat(0));
    CHECK(in_class_S(4, 2, sel.triple));
  }
  // Sweep: postconditions hold across the admissible (N, s, p) range.
  for (int N = 3; N <= 5; ++N)
    for (long long sn = 1; sn <= 4; ++sn)
      for (long long pn = 9; pn <= 20; ++pn) {
        const Rational s(sn, 4), p(pn, 8);
        const Rational pmax = rat(1) + rat(4) / (Rational(N) - rat(2) * s);
        if (p >= pmax) continue;
        SelectionResult sel;
        try {
          sel = select_schrodinger_exponents(N, s, p);
        } catch (const EmptyWindowError&) {
          continue;  // hypotheses can still fail via the lower window edge
        }
        CHECK(in_class_S(N, 2, sel.triple));
        CHECK(sel.beta > rat(0));
        const Rational slack =
            Rational(N - 2, 4) * (rat(1) + rat(4) / rat(N - 2) - p);
        CHECK(sel.beta == slack - sel.epsilon);
        CHECK(sel.beta == rat(1) - (p + rat(1)) / sel.triple.q);
      }
}

TEST_CASE("wave exponent selection") {
  {
    const auto sel =
        select_wave_exponents(2, rat(1, 2), rat(4), PickRule::fixed(rat(5, 4)));
    CHECK(sel.window_lo == rat(1));
    CHECK(sel.window_hi == rat(3, 2));
    CHECK(sel.triple.q == rat(20));
    CHECK(sel.triple.r == rat(5));
    CHECK(sel.triple.r_tilde == rat(4));
    CHECK(sel.beta == rat(3, 4));
    CHECK(in_class_W(2, 1, sel.triple));
  }
  // p = 1 + 2/(N-1) is the excluded lower endpoint.
  CHECK_THROWS_AS(select_wave_exponents(2, rat(1, 2), rat(3)),
                  EmptyWindowError);
  {
    const auto sel = select_wave_exponents(3, rat(1, 2), rat(3));
    CHECK(sel.beta > rat(0));
    CHECK(in_class_W(3, 1, sel.triple));
    CHECK(sel.beta == rat(1) - (rat(4)) / sel.triple.q);
  }
  for (int N = 2; N <= 4; ++N)
    for (long long sn = 1; sn <= 2; ++sn)
      for (long long pn = 17; pn <= 40; ++pn) {
        const Rational s(sn, 4), p(pn, 8);
        SelectionResult sel;
        try {
          sel = select_wave_exponents(N, s, p);
        } catch (const EmptyWindowError&) {
          continue;
        }
        CHECK(in_class_W(N, 1, sel.triple));
        CHECK(sel.beta == rat(1) - (p + rat(1)) / sel.triple.q);
        CHECK(sel.beta > rat(0));
      }
}

TEST_CASE("admissible enumeration") {
  const auto s32 = admissible_enumerate(3, 2, AdmissibleFlavor::S, 2);
  CHECK(std::find(s32.begin(), s32.end(),
                  ExponentTriple{inf, rat(2), rat(2)}) != s32.end());
  const auto w21 = admissible_enumerate(2, 1, AdmissibleFlavor::W, 4);
  CHECK(std::find(w21.begin(), w21.end(),
                  ExponentTriple{inf, rat(4), rat(4)}) != w21.end());
  // Round trip: every returned triple re-passes the membership predicate.
  for (const auto& t : admissible_enumerate(4, 2, AdmissibleFlavor::S, 8))
    CHECK(in_class_S(4, 2, t));
  for (const auto& t : admissible_enumerate(3, 1, AdmissibleFlavor::W, 8))
    CHECK(in_class_W(3, 1, t));
  // Deterministic ordering.
  const auto again = admissible_enumerate(3, 2, AdmissibleFlavor::S, 8);
  CHECK(again == admissible_enumerate(3, 2, AdmissibleFlavor::S, 8));
  for (size_t i = 0; i + 1 < again.size(); ++i) {
    const bool le = (again[i].q < again[i + 1].q) ||
                    (again[i].q == again[i + 1].q &&
                     (again[i].r < again[i + 1].r ||
                      (again[i].r == again[i + 1].r &&
                       again[i].r_tilde < again[i + 1].r_tilde)));
    CHECK(le);
  }
}
