#include <catch2/catch_amalgamated.hpp>

#include "displab/solver.hpp"

using namespace displab;

namespace {

Rational rat(long long n, long long d = 1) { return Rational(n, d); }

Field constant_field(const TorusGrid& g, cplx c) {
  Field f(g);
  for (auto& v : f.samples) v = c;
  return f;
}

double max_state_diff(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    for (std::size_t j = 0; j < a.states[i].size(); ++j)
      m = std::max(m, std::abs(a.states[i][j] - b.states[i][j]));
  return m;
}

// Scalar brute-force oracle for the Lipschitz structure constant of F_p:
// max over a polar grid of |u|, |v| <= 10 and relative phases.
double scalar_lipschitz_oracle(const Nonlinearity& nl) {
  double best = 0.0;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j)
      for (int a = 0; a < 48; ++a) {
        const double ru = 10.0 * i / 40.0, rv = 10.0 * j / 40.0;
        const double phi = 2.0 * M_PI * a / 48.0;
        const cplx u = ru, v = rv * cplx(std::cos(phi), std::sin(phi));
        const double denom =
            (std::pow(ru, nl.p - 1.0) + std::pow(rv, nl.p - 1.0)) *
            std::abs(u - v);
        if (denom < 1e-12) continue;
        best = std::max(best, std::abs(nl(u) - nl(v)) / denom);
      }
  return best;
}

EquationParams nls_params() { return {3, 2, 2, rat(1), rat(3)}; }
EquationParams nlw_params() { return {2, 1, 1, rat(1), rat(4)}; }

}  // namespace

TEST_CASE("nonlinearity evaluation") {
  const TorusGrid g = TorusGrid::isotropic(2, 1, 2.0 * M_PI, 8);
  const Nonlinearity nl{3.0, -1.0, NonlinearForm::power_preserving};

  CHECK(std::abs(nl(cplx(0, 0))) == 0.0);

  const Field c = constant_field(g, cplx(0.4, -0.3));
  const Field fc = evaluate_nonlinearity(nl, c);
  const cplx expect = -std::pow(0.5, 2.0) * cplx(0.4, -0.3);
  for (const cplx& v : fc.samples) CHECK(std::abs(v - expect) < 1e-14);

  const Field u = random_band_field(g, 3, 5, 0);
  for (const auto form :
       {NonlinearForm::power_preserving, NonlinearForm::power_modulus}) {
    const Nonlinearity m{2.5, 0.7, form};
    const Field fu = evaluate_nonlinearity(m, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(std::abs(std::abs(fu[i]) - 0.7 * std::pow(std::abs(u[i]), 2.5)) <
            1e-12);
      if (std::abs(u[i]) > 1e-8) {
        const double ratio =
            std::abs(u[i]) * m.derivative_magnitude(u[i]) / std::abs(fu[i]);
        CHECK(ratio > m.p - 1.0);
        CHECK(ratio < m.p + 1.0);
      }
    }
  }
}

TEST_CASE("lipschitz structure constant") {
  const TorusGrid g = TorusGrid::isotropic(2, 1, 2.0 * M_PI, 16);
  const Nonlinearity nl{3.0, 1.0, NonlinearForm::power_preserving};
  const Field u = random_band_field(g, 5, 31, 0);
  const Field v = random_band_field(g, 5, 31, 1);

  CHECK(lipschitz_check(nl, u, u) == 0.0);

  Field zero(g);
  const double lam = lipschitz_check(nl, u, zero);
  CHECK(lam == Catch::Approx(1.0).epsilon(1e-12));

  const double oracle = scalar_lipschitz_oracle(nl);
  INFO("scalar oracle constant " << oracle);
  CHECK(oracle <= 2.0);
  CHECK(oracle == Catch::Approx(1.5).epsilon(0.01));
  CHECK(lipschitz_check(nl, u, v) <= oracle + 1e-9);
}

TEST_CASE("fractional chain-rule constant") {
  const Nonlinearity nl{3.0, 1.0, NonlinearForm::power_preserving};
  const Rational a(4), b(4), c(2);  // 1/c = 1/a + 1/b

  SECTION("exponent relation is enforced") {
    CHECK_THROWS_AS(
        chain_rule_check(nl, Field(TorusGrid::isotropic(2, 1, 6.0, 8)), 0.5,
                         rat(4), rat(4), rat(3)),
        std::invalid_argument);
  }

  SECTION("stable under refinement near s = 1") {
    double r[2];
    int i = 0;
    for (int n : {32, 64}) {
      const TorusGrid g = TorusGrid::isotropic(2, 1, 2.0 * M_PI, n);
      const Field u = random_band_field(g, 4, 77, 0);  // same modes both grids
      r[i++] = chain_rule_check(nl, u, 0.99, a, b, c);
    }
    CHECK(std::abs(r[0] - r[1]) / r[1] < 0.1);
  }

  SECTION("scalar invariance") {
    const TorusGrid g = TorusGrid::isotropic(2, 1, 2.0 * M_PI, 16);
    const Field u = random_band_field(g, 4, 9, 0);
    const double r1 = chain_rule_check(nl, u, 0.5, a, b, c);
    const double r2 = chain_rule_check(nl, cplx(2.0, 0.0) * u, 0.5, a, b, c);
    CHECK(r1 == Catch::Approx(r2).epsilon(1e-12));
  }

  SECTION("bounded over a random family") {
    const TorusGrid g = TorusGrid::isotropic(2, 1, 2.0 * M_PI, 16);
    double family = 0.0;
    for (std::uint64_t stream = 0; stream < 50; ++stream)
      family = std::max(
          family, chain_rule_check(nl, random_band_field(g, 4, 11, stream),
                                   0.5, a, b, c));
    INFO("recorded chain-rule constant " << family);
    CHECK(family > 0.0);
    CHECK(family < 10.0);
  }
}

TEST_CASE("schroedinger duhamel map") {
  const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 8);
  const Field f = random_band_field(g, 2, 3, 0);
  const double T = 0.5;
  const Trajectory u = nls_free_evolution(f, T, 17);

  SECTION("zero coupling reproduces the free flow") {
    const Nonlinearity off{3.0, 0.0};
    const Trajectory phi = duhamel_map_S(f, u, off, T);
    CHECK(max_state_diff(phi, u) < 1e-12);
  }

  SECTION("initial sample is the datum") {
    const Nonlinearity nl{3.0, 1.0};
    const Trajectory phi = duhamel_map_S(f, u, nl, T);
    for (std::size_t j = 0; j < f.size(); ++j)
      CHECK(std::abs(phi.states[0][j] - f[j]) < 1e-12);
  }

  SECTION("constant data closed form") {
    // For u identically c the integrand is constant in space and the
    // Laplacian drops out: Phi(u)(t) = c - i lambda |c|^{p-1} c t.
    const cplx c(0.8, 0.2);
    const Field cf = constant_field(g, c);
    Trajectory cu = Trajectory::uniform(g, T, 33);
    for (std::size_t i = 0; i < cu.times.size(); ++i) cu.states.push_back(cf);
    const Nonlinearity nl{3.0, 1.3};
    const Trajectory phi = duhamel_map_S(cf, cu, nl, T);
    const double mag2 = std::norm(c);
    for (std::size_t i = 0; i < phi.times.size(); ++i) {
      const cplx expect =
          c - cplx(0.0, 1.0) * (1.3 * mag2) * c * phi.times[i];
      for (std::size_t j = 0; j < cf.size(); ++j)
        CHECK(std::abs(phi.states[i][j] - expect) < 1e-10);
    }
  }
}

TEST_CASE("wave duhamel map") {
  const TorusGrid g = TorusGrid::isotropic(2, 1, 2.0 * M_PI, 16);
  const double T = 1.0;

  SECTION("cos and sinc multipliers are exact at zero coupling") {
    const Field f = remove_mean(random_band_field(g, 3, 5, 0));
    const Field gg = remove_mean(random_band_field(g, 3, 5, 1));
    Trajectory dummy = Trajectory::uniform(g, T, 17);
    for (std::size_t i = 0; i < dummy.times.size(); ++i)
      dummy.states.push_back(Field(g));
    const Trajectory phi =
        duhamel_map_W(f, gg, dummy, Nonlinearity{4.0, 0.0}, T);

    const Field fs = forward_transform(f);
    const Field gs = forward_transform(gg);
    for (std::size_t i = 0; i < phi.times.size(); ++i) {
      const double t = phi.times[i];
      Field expect(g);
      for_each_index(g, [&](std::size_t flat, const int* idx) {
        double r2 = 0.0;
        for (int ax = 0; ax < 2; ++ax) {
          const double z = g.frequency(ax, idx[ax]);
          r2 += z * z;
        }
        const double r = std::sqrt(r2);
        const double sinc = r == 0.0 ? t : std::sin(t * r) / r;
        expect[flat] = std::cos(t * r) * fs[flat] + sinc * gs[flat];
      });
      const Field expect_phys = inverse_transform(expect);
      for (std::size_t j = 0; j < expect_phys.size(); ++j)
        CHECK(std::abs(phi.states[i][j] - expect_phys[j]) < 1e-10);
    }
    // t = 0 sample equals f
    for (std::size_t j = 0; j < f.size(); ++j)
      CHECK(std::abs(phi.states[0][j] - f[j]) < 1e-12);
  }

  SECTION("pure velocity mode and the sinc eigenvalue") {
    const Field zero(g);
    const Field mode = pure_mode(g, {1, 0});  // |zeta0| = 1
    Trajectory dummy = Trajectory::uniform(g, T, 33);
    for (std::size_t i = 0; i < dummy.times.size(); ++i)
      dummy.states.push_back(Field(g));
    const Trajectory phi =
        duhamel_map_W(zero, mode, dummy, Nonlinearity{4.0, 0.0}, T);
    for (std::size_t i = 0; i < phi.times.size(); ++i) {
      const double t = phi.times[i];
      for (std::size_t j = 0; j < mode.size(); ++j)
        CHECK(std::abs(phi.states[i][j] - std::sin(t) * mode[j]) < 1e-10);
    }

    // discrete second difference satisfies the mode ODE to O(dt^2)
    const double dt = phi.times[1] - phi.times[0];
    for (std::size_t i = 1; i + 1 < phi.times.size(); ++i) {
      double resid = 0.0;
      for (std::size_t j = 0; j < mode.size(); ++j) {
        const cplx dd = (phi.states[i + 1][j] - 2.0 * phi.states[i][j] +
                         phi.states[i - 1][j]) /
                        (dt * dt);
        resid = std::max(resid, std::abs(dd + phi.states[i][j]));
      }
      CHECK(resid < 1e-3);
    }
  }
}

TEST_CASE("picard iteration") {
  SECTION("zero coupling converges immediately") {
    const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 8);
    const CauchyData data = CauchyDataS{random_band_field(g, 2, 13, 0)};
    const auto res = picard_solve(data, Nonlinearity{3.0, 0.0}, nls_params(),
                                  0.5, 10, 1e-10, 17);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    CHECK(max_state_diff(res.solution, free_evolution_of(data, 0.5, 17)) <
          1e-12);
  }

  SECTION("constant data matches the phase-rotation solution") {
    const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 4);
    const cplx c(1.0, 0.0);
    const CauchyData data = CauchyDataS{constant_field(g, c)};
    const Nonlinearity nl{3.0, 1.0};
    const double T = 0.25, tol = 1e-7;
    const auto res =
        picard_solve(data, nl, nls_params(), T, 40, tol, 257);
    REQUIRE(res.report.converged);
    double worst = 0.0;
    for (std::size_t i = 0; i < res.solution.times.size(); ++i) {
      const double t = res.solution.times[i];
      const cplx expect = c * std::exp(cplx(0.0, -1.0) * t);  // lambda|c|^2=1
      for (std::size_t j = 0; j < res.solution.states[i].size(); ++j)
        worst = std::max(worst, std::abs(res.solution.states[i][j] - expect));
    }
    CHECK(worst < 10.0 * tol);
  }

  SECTION("small data gives geometric gap decay and a consistent fixed point") {
    const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 16);
    Field f = random_band_field(g, 2, 21, 0);
    f = cplx(0.4, 0.0) * f;
    const CauchyData data = CauchyDataS{f};
    const Nonlinearity nl{3.0, 1.0};
    const double T = 0.25, tol = 1e-11;
    const auto res = picard_solve(data, nl, nls_params(), T, 30, tol, 17);
    REQUIRE(res.report.converged);
    CHECK_FALSE(res.report.diverged);
    const auto& gaps = res.report.iterates_gap;
    REQUIRE(gaps.size() >= 3);
    for (std::size_t i = 1; i + 1 < gaps.size(); ++i)
      if (gaps[i] > 0.0 && gaps[i + 1] > 0.0)
        CHECK(gaps[i + 1] / gaps[i] <= 0.5);

    // fixed-point consistency: d(Phi(u*), u*) < 10 tol
    const Trajectory phi = apply_solution_map(data, res.solution, nl, T);
    CHECK(contraction_distance(phi, res.solution,
                               default_distance_triples(nls_params())) <
          10.0 * tol);

    // mass conservation of the gauge-invariant flow
    const double m0 = l2_norm(res.solution.states.front());
    for (const Field& st : res.solution.states)
      CHECK(std::abs(l2_norm(st) - m0) / m0 < 0.01);
  }

  SECTION("oversized data flags divergence") {
    const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 8);
    Field f = random_band_field(g, 2, 4, 0);
    f = cplx(40.0, 0.0) * f;
    const CauchyData data = CauchyDataS{f};
    const auto res = picard_solve(data, Nonlinearity{3.0, 1.0}, nls_params(),
                                  1.0, 25, 1e-10, 17);
    CHECK((res.report.diverged || !res.report.converged));
  }

  SECTION("wave picard with mean-zero data") {
    const TorusGrid g = TorusGrid::isotropic(2, 1, 2.0 * M_PI, 16);
    Field f = remove_mean(random_band_field(g, 2, 8, 0));
    Field gg = remove_mean(random_band_field(g, 2, 8, 1));
    f = cplx(0.05, 0.0) * f;
    gg = cplx(0.05, 0.0) * gg;
    const CauchyData data = CauchyDataW::make(f, gg);
    const auto res = picard_solve(data, Nonlinearity{4.0, 1.0}, nlw_params(),
                                  0.25, 30, 1e-10, 17);
    CHECK(res.report.converged);
    const auto& gaps = res.report.iterates_gap;
    for (std::size_t i = 1; i + 1 < gaps.size(); ++i)
      if (gaps[i] > 0.0 && gaps[i + 1] > 0.0)
        CHECK(gaps[i + 1] / gaps[i] <= 0.9);
  }
}

TEST_CASE("nonlinear estimate ratios") {
  const EquationParams ep = nls_params();
  const auto sel = select_schrodinger_exponents(3, rat(1), rat(3));
  const Nonlinearity nl{3.0, 1.0};
  const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 16);

  SECTION("zero trajectory gives zero ratio") {
    Trajectory z = Trajectory::uniform(g, 1.0, 9);
    for (std::size_t i = 0; i < z.times.size(); ++i) z.states.push_back(Field(g));
    CHECK(nonlinear_estimate_check(z, nl, ep, sel, 1.0) == 0.0);
  }

  SECTION("scalar invariance") {
    const Trajectory u =
        nls_free_evolution(random_band_field(g, 2, 3, 7), 1.0, 17);
    const double r1 = nonlinear_estimate_check(u, nl, ep, sel, 1.0);
    const double r2 = nonlinear_estimate_check(scale_trajectory(u, 3.7), nl,
                                               ep, sel, 1.0);
    CHECK(std::abs(r1 - r2) <= 1e-8 * std::max(r1, r2));
  }

  SECTION("T-halving stays within a factor 4") {
    const Trajectory u =
        nls_free_evolution(random_band_field(g, 2, 3, 9), 1.0, 17);
    const double r_full = nonlinear_estimate_check(u, nl, ep, sel, 1.0);
    const double r_half = nonlinear_estimate_check(u, nl, ep, sel, 0.5);
    CHECK(r_full / r_half < 4.0);
    CHECK(r_half / r_full < 4.0);
  }

  SECTION("bounded over random trajectories") {
    double family = 0.0;
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
      const Trajectory u =
          nls_free_evolution(random_band_field(g, 2, 55, stream), 1.0, 9);
      family = std::max(family, nonlinear_estimate_check(u, nl, ep, sel, 1.0));
    }
    INFO("recorded nonlinear-estimate constant " << family);
    CHECK(family > 0.0);
    CHECK(family < 100.0);
  }
}

TEST_CASE("contraction experiment") {
  const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 8);
  Field f = random_band_field(g, 2, 99, 0);
  f = cplx(0.05, 0.0) * f;
  const CauchyData data = CauchyDataS{f};

  SECTION("zero coupling has zero ratios and a satisfied budget") {
    const auto rep = contraction_experiment(data, Nonlinearity{3.0, 0.0},
                                            nls_params(), 0.5, 4, 11, 9);
    for (double r : rep.ratios) CHECK(r == 0.0);
    CHECK(rep.converged);
    CHECK(rep.budget_lhs <= rep.budget_rhs);
    CHECK(rep.A == Catch::Approx(2.0 * rep.c_free * rep.data_norm_value));
  }

  SECTION("ratios shrink at least at the predicted rate under T halving") {
    const Nonlinearity nl{3.0, 1.0};
    double prev = -1.0;
    std::vector<double> maxima;
    for (double T : {0.8, 0.4, 0.2}) {
      const auto rep =
          contraction_experiment(data, nl, nls_params(), T, 5, 11, 17);
      double mx = 0.0;
      for (double r : rep.ratios) mx = std::max(mx, r);
      maxima.push_back(mx);
      if (prev > 0.0) CHECK(mx < prev);
      prev = mx;
    }
    // decay exponent at least beta within 30 percent slack (the bound
    // 2 C T^beta A^{p-1} is an upper envelope, so faster decay is fine)
    const double beta =
        select_schrodinger_exponents(3, rat(1), rat(3)).beta.to_double();
    const double slope = std::log2(maxima[0] / maxima[2]) / 2.0;
    CHECK(slope >= 0.7 * beta);
  }

  SECTION("small data contracts at small T") {
    const auto rep = contraction_experiment(data, Nonlinearity{3.0, 1.0},
                                            nls_params(), 0.25, 6, 5, 17);
    CHECK(rep.converged);
    for (double r : rep.ratios) CHECK(r <= 0.5);
    CHECK(rep.budget_lhs <= rep.budget_rhs);
  }
}

TEST_CASE("rough data builder") {
  const TorusGrid g = TorusGrid::isotropic(3, 2, 2.0 * M_PI, 64);
  const RoughDataProfile profile{1.0, 0.0};
  const auto [f, diag] = rough_data_builder(profile, g, 1.0, 42);

  SECTION("x-profile L2 is refinement-stable") {
    CHECK(std::abs(diag.phi1_l2 - diag.phi1_l2_doubled) / diag.phi1_l2 < 0.01);
  }

  SECTION("partial norm stable, full norm grows") {
    CHECK(std::abs(diag.mixed - diag.mixed_doubled) / diag.mixed < 0.02);
    CHECK(diag.full_hs_doubled / diag.full_hs >= 1.2);
    CHECK(diag.phi1_hs_doubled / diag.phi1_hs >= 1.2);
  }

  SECTION("field is the separable product") {
    // separability: f(x, y) f(x', y') = f(x, y') f(x', y)
    const std::size_t ycount = 64 * 64;
    const cplx a = f[3 * ycount + 5], b = f[10 * ycount + 77];
    const cplx c = f[3 * ycount + 77], d = f[10 * ycount + 5];
    CHECK(std::abs(a * b - c * d) < 1e-12 * std::abs(a * b));
  }
}
