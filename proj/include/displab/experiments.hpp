#pragma once

#include "displab/kernel.hpp"
#include "displab/report.hpp"
#include "displab/solver.hpp"

namespace displab::cli {

/// Invalid or missing configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const json& require_field(const json& j, const char* name) {
  if (!j.contains(name))
    throw ConfigError(std::string("config: missing required field `") + name +
                      "`");
  return j.at(name);
}

inline double require_num(const json& j, const char* name) {
  const json& v = require_field(j, name);
  if (!v.is_number())
    throw ConfigError(std::string("config: field `") + name +
                      "` must be a number");
  return v.get<double>();
}

inline std::int64_t require_int(const json& j, const char* name) {
  const json& v = require_field(j, name);
  if (!v.is_number_integer())
    throw ConfigError(std::string("config: field `") + name +
                      "` must be an integer");
  return v.get<std::int64_t>();
}

inline std::string require_str(const json& j, const char* name) {
  const json& v = require_field(j, name);
  if (!v.is_string())
    throw ConfigError(std::string("config: field `") + name +
                      "` must be a string");
  return v.get<std::string>();
}

inline double opt_num(const json& j, const char* name, double def) {
  return j.contains(name) ? require_num(j, name) : def;
}
inline std::int64_t opt_int(const json& j, const char* name,
                            std::int64_t def) {
  return j.contains(name) ? require_int(j, name) : def;
}
inline std::string opt_str(const json& j, const char* name,
                           const std::string& def) {
  return j.contains(name) ? require_str(j, name) : def;
}

/// Rationals in configs: integer, or a string "a/b" | "a" | "inf".
inline Rational parse_rational(const json& v, const char* name) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string())
    throw ConfigError(std::string("config: field `") + name +
                      "` must be an integer or a rational string like \"3/2\"");
  const std::string s = v.get<std::string>();
  if (s == "inf") return Rational::infinity();
  auto whole_number = [&](const std::string& part) {
    std::size_t pos = 0;
    const long long value = std::stoll(part, &pos);
    if (pos != part.size()) throw std::invalid_argument("trailing characters");
    return value;
  };
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(whole_number(s));
    return Rational(whole_number(s.substr(0, slash)),
                    whole_number(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ConfigError(std::string("config: cannot parse field `") + name +
                      "` as a rational");
  }
}

inline Rational require_rational(const json& j, const char* name) {
  return parse_rational(require_field(j, name), name);
}

inline std::uint64_t require_seed(const json& j) {
  const json& v = require_field(j, "seed");
  if (!v.is_number_unsigned() && !v.is_number_integer())
    throw ConfigError("config: field `seed` must be an unsigned integer");
  return v.get<std::uint64_t>();
}

inline json environment_json(const TorusGrid* g = nullptr) {
  json env{{"precision", "f64"}, {"threads", thread_count()}};
  if (g) {
    env["grid_points"] = g->axis(0).points;
    env["grid_extent"] = g->axis(0).extent;
    env["dim"] = g->dim();
    env["split"] = g->split();
  }
  return env;
}

// ---------------------------------------------------------------------------
// exponents
// ---------------------------------------------------------------------------

inline RunRecord run_exponents(const json& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const std::string equation = require_str(cfg, "equation");
  const int N = static_cast<int>(require_int(cfg, "N"));
  const Rational s = require_rational(cfg, "s");
  const Rational p = require_rational(cfg, "p");
  PickRule pick = PickRule::midpoint();
  if (cfg.contains("epsilon"))
    pick = PickRule::fixed(parse_rational(cfg.at("epsilon"), "epsilon"));
  if (equation != "nls" && equation != "nlw")
    throw ConfigError("config: field `equation` must be \"nls\" or \"nlw\"");

  RunRecord rec;
  rec.subcommand = "exponents";
  rec.anchor = "exponent-selection/" + equation;
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json();

  try {
    const SelectionResult sel =
        equation == "nls"
            ? select_schrodinger_exponents(N, s, p, pick)
            : select_wave_exponents(N, s - Rational(1, 2), p, pick);
    const bool admissible = equation == "nls"
                                ? in_class_S(N, 2, sel.triple)
                                : in_class_W(N, 1, sel.triple);
    rec.results = json{
        {"inputs", {{"N", N}, {"s", s.str()}, {"p", p.str()}}},
        {"window", {{"lo", rational_json(sel.window_lo)},
                    {"hi", rational_json(sel.window_hi)}}},
        {"epsilon", rational_json(sel.epsilon)},
        {"triple", {{"q", rational_json(sel.triple.q)},
                    {"r", rational_json(sel.triple.r)},
                    {"r_tilde", rational_json(sel.triple.r_tilde)}}},
        {"beta", rational_json(sel.beta)},
        {"admissible", admissible},
        {"headline", "beta=" + sel.beta.str()},
        {"tolerance", "exact"}};
    rec.status = admissible && sel.beta > Rational(0) ? "pass" : "fail";
  } catch (const EmptyWindowError& e) {
    rec.results = json{{"error", e.what()},
                       {"headline", "empty-window"},
                       {"tolerance", "exact"}};
    rec.status = "fail";
  }
  return rec;
}

// ---------------------------------------------------------------------------
// strichartz-scan
// ---------------------------------------------------------------------------

inline RunRecord run_strichartz_scan(const json& cfg, const std::string& dir) {
  const std::uint64_t seed = require_seed(cfg);
  const int N = static_cast<int>(require_int(cfg, "N"));
  const int k = static_cast<int>(require_int(cfg, "k"));
  const int sigma = static_cast<int>(require_int(cfg, "sigma"));
  const int n = static_cast<int>(require_int(cfg, "grid_points"));
  const double L = require_num(cfg, "grid_extent");
  const double T = require_num(cfg, "T");
  const int samples = static_cast<int>(opt_int(cfg, "time_samples", 17));
  const int mode_radius = static_cast<int>(opt_int(cfg, "mode_radius", n / 3));
  const double spread_tol = opt_num(cfg, "spread_tolerance", 0.2);
  const double conserved_tol = opt_num(cfg, "conserved_tolerance", 1e-8);
  std::vector<int> bands;
  for (const auto& b : require_field(cfg, "bands")) {
    if (!b.is_number_integer())
      throw ConfigError("config: field `bands` must hold integers");
    bands.push_back(b.get<int>());
  }
  if (bands.empty()) throw ConfigError("config: field `bands` is empty");

  std::vector<ExponentTriple> triples;
  triples.push_back({Rational::infinity(), Rational(2), Rational(2)});
  if (cfg.contains("s") && cfg.contains("p")) {
    const Rational s = require_rational(cfg, "s");
    const Rational p = require_rational(cfg, "p");
    triples.push_back(sigma == 2
                          ? select_schrodinger_exponents(N, s, p).triple
                          : select_wave_exponents(N, s, p).triple);
  }

  const TorusGrid grid = TorusGrid::isotropic(N, k, L, n);
  const SpectralCutoff cutoff = build_cutoff();
  const Field seed_field = random_band_field(grid, mode_radius, seed, 0);
  const EquationParams ep{N, k, sigma, Rational(0), Rational(3)};

  RunRecord rec;
  rec.subcommand = "strichartz-scan";
  rec.anchor = "strichartz-quotient/band-invariance";
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json(&grid);

  CsvTable csv;
  csv.header = {"j",     "q",      "r", "r_tilde", "s",
                "quotient", "grid_n", "grid_L", "T", "samples"};
  double max_spread = 0.0;
  double conserved_dev = 0.0;
  json per_triple = json::array();
  for (std::size_t ti = 0; ti < triples.size(); ++ti) {
    const ExponentTriple& t = triples[ti];
    const Rational implied_s = check_thm1_conditions(ep, t).implied_s;
    std::vector<double> quotients;
    for (int j : bands) {
      const Field fj = lp_project(seed_field, j, cutoff);
      const double q = strichartz_quotient(fj, ep, t, T, samples);
      quotients.push_back(q);
      csv.rows.push_back({std::to_string(j), t.q.str(), t.r.str(),
                          t.r_tilde.str(), implied_s.str(), format_double(q),
                          std::to_string(n), format_double(L),
                          format_double(T), std::to_string(samples)});
    }
    const double lo = *std::min_element(quotients.begin(), quotients.end());
    const double hi = *std::max_element(quotients.begin(), quotients.end());
    const double spread = (hi - lo) / hi;
    max_spread = std::max(max_spread, spread);
    const bool conserved =
        t.q.is_infinite() && t.r == Rational(2) && t.r_tilde == Rational(2);
    if (conserved)
      for (double q : quotients)
        conserved_dev = std::max(conserved_dev, std::abs(q - 1.0));
    per_triple.push_back(json{{"q", t.q.str()},
                              {"r", t.r.str()},
                              {"r_tilde", t.r_tilde.str()},
                              {"spread", spread},
                              {"quotients", quotients}});
  }
  const std::string csv_path = rec.id + "-series.csv";
  csv.write((std::filesystem::path(dir) / csv_path).string());

  rec.results = json{{"triples", per_triple},
                     {"max_spread", max_spread},
                     {"conserved_deviation", conserved_dev},
                     {"csv", csv_path},
                     {"headline", "max_spread=" + format_double(max_spread)},
                     {"tolerance", format_double(spread_tol)}};
  rec.status = (max_spread <= spread_tol && conserved_dev <= conserved_tol)
                   ? "pass"
                   : "fail";
  return rec;
}

// ---------------------------------------------------------------------------
// kernel-decay
// ---------------------------------------------------------------------------

inline RunRecord run_kernel_decay(const json& cfg, const std::string& dir) {
  const std::uint64_t seed = require_seed(cfg);
  const int sigma = static_cast<int>(require_int(cfg, "sigma"));
  const int N = static_cast<int>(require_int(cfg, "N"));
  const int k = static_cast<int>(require_int(cfg, "k"));
  const std::string mode_str = require_str(cfg, "mode");
  if (mode_str != "sup_xy" && mode_str != "sup_x_l2_eta")
    throw ConfigError("config: field `mode` must be sup_xy or sup_x_l2_eta");
  const KernelNormMode mode = mode_str == "sup_xy"
                                  ? KernelNormMode::sup_xy
                                  : KernelNormMode::sup_x_l2_eta;
  const double t_min = opt_num(cfg, "t_min", 20.0);
  const double t_max = opt_num(cfg, "t_max", 100.0);
  const int t_points = static_cast<int>(opt_int(cfg, "t_points", 10));
  const int quad_base = static_cast<int>(opt_int(cfg, "quad_base", 128));
  const double slope_tol = opt_num(cfg, "slope_tolerance", 0.15);
  const std::string refine = opt_str(cfg, "refinement", "spot");
  const RefinementCheck check = refine == "none" ? RefinementCheck::none
                                : refine == "all" ? RefinementCheck::all
                                                  : RefinementCheck::spot;
  const SpectralCutoff cutoff =
      build_cutoff(opt_num(cfg, "cutoff_sharpness", 1.0));

  const DecayFitReport rep =
      decay_fit(sigma, N, k, mode, log_spaced(t_min, t_max, t_points), cutoff,
                quad_base, check);

  RunRecord rec;
  rec.subcommand = "kernel-decay";
  rec.anchor = "kernel-decay/" + mode_str + "/sigma" + std::to_string(sigma) +
               "-N" + std::to_string(N) + "-k" + std::to_string(k);
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json();

  CsvTable csv;
  csv.header = {"sigma", "N", "k", "norm_mode", "t", "value"};
  for (std::size_t i = 0; i < rep.t_values.size(); ++i)
    csv.rows.push_back({std::to_string(sigma), std::to_string(N),
                        std::to_string(k), mode_str,
                        format_double(rep.t_values[i]),
                        format_double(rep.norm_values[i])});
  const std::string csv_path = rec.id + "-series.csv";
  csv.write((std::filesystem::path(dir) / csv_path).string());

  const double slope_err = std::abs(rep.fitted_slope + rep.predicted_beta);
  rec.results = json{
      {"fitted_slope", rep.fitted_slope},
      {"predicted_decay", -rep.predicted_beta},
      {"slope_error", slope_err},
      {"residual", rep.residual},
      {"envelope_constant", rep.envelope_constant},
      {"t_range", {rep.t_range.first, rep.t_range.second}},
      {"quadrature_converged", rep.quadrature_converged},
      {"max_refinement_shift", rep.max_refinement_shift},
      {"csv", csv_path},
      {"headline", "slope=" + format_double(rep.fitted_slope) + " vs " +
                       format_double(-rep.predicted_beta)},
      {"tolerance", format_double(slope_tol)}};
  if (!rep.quadrature_converged)
    rec.status = "inconclusive";
  else
    rec.status = slope_err <= slope_tol ? "pass" : "fail";
  return rec;
}

// ---------------------------------------------------------------------------
// hessian-scan
// ---------------------------------------------------------------------------

inline RunRecord run_hessian_scan(const json& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const int samples = static_cast<int>(opt_int(cfg, "samples", 1000));
  const double tol = opt_num(cfg, "tol", 1e-8);
  const double fd_tol = opt_num(cfg, "fd_tolerance", 1e-6);
  std::vector<std::pair<int, int>> cases;
  for (const auto& c : require_field(cfg, "cases"))
    cases.emplace_back(static_cast<int>(require_int(c, "N")),
                       static_cast<int>(require_int(c, "k")));
  if (cases.empty()) throw ConfigError("config: field `cases` is empty");

  RunRecord rec;
  rec.subcommand = "hessian-scan";
  rec.anchor = "phase-hessian-ranks";
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json();

  const KeyedRng rng(seed, 0x4355);
  std::uint64_t ctr = 0;
  auto sample_point = [&](int d, std::vector<double>& out) {
    out.resize(d);
    for (;;) {
      double u = 0.0;
      for (int i = 0; i < d; ++i) {
        out[i] = rng.uniform(ctr++, -2.0, 2.0);
        u += out[i] * out[i];
      }
      if (u >= 0.25 && u <= 4.0) return;
    }
  };

  bool ok = true;
  double max_fd_err = 0.0;
  json per_case = json::array();
  for (const auto& [N, k] : cases) {
    int min_rank_w = N;  // min over sigma = 1 samples
    bool rank_s_ok = true;
    std::vector<double> point, xi, eta;
    for (int trial = 0; trial < samples; ++trial) {
      sample_point(N, point);
      xi.assign(point.begin(), point.begin() + (N - k));
      eta.assign(point.begin() + (N - k), point.end());
      const int rank2 = hessian_rank({2, eta}, xi, tol);
      const int rank1 = hessian_rank({1, eta}, xi, tol);
      rank_s_ok = rank_s_ok && rank2 == N - k;
      min_rank_w = std::min(min_rank_w, rank1);
      if (trial % 64 == 0) {
        // analytic vs finite-difference spot check
        for (int sigma : {1, 2}) {
          const PhaseSpec spec{sigma, eta};
          const SymMatrix a = hessian_of_phase(spec, xi);
          const double h = 1e-4;
          for (int i = 0; i < a.n; ++i) {
            std::vector<double> q = xi;
            q[i] += h;
            const double fp = phase_value(spec, q.data(), a.n);
            q[i] -= 2 * h;
            const double fm = phase_value(spec, q.data(), a.n);
            const double fd =
                (fp - 2.0 * phase_value(spec, xi.data(), a.n) + fm) / (h * h);
            max_fd_err = std::max(max_fd_err, std::abs(fd - a.at(i, i)));
          }
        }
      }
    }
    const bool case_ok = rank_s_ok && min_rank_w >= N - k - 1;
    ok = ok && case_ok;
    per_case.push_back(json{{"N", N},
                            {"k", k},
                            {"rank_sigma2_constant", rank_s_ok},
                            {"min_rank_sigma1", min_rank_w},
                            {"pass", case_ok}});
  }
  ok = ok && max_fd_err <= fd_tol;

  rec.results = json{{"cases", per_case},
                     {"max_fd_error", max_fd_err},
                     {"headline", "max_fd_error=" + format_double(max_fd_err)},
                     {"tolerance", format_double(fd_tol)}};
  rec.status = ok ? "pass" : "fail";
  return rec;
}

// ---------------------------------------------------------------------------
// nonlinear-check
// ---------------------------------------------------------------------------

inline EquationParams params_from_config(const json& cfg) {
  const std::string equation = require_str(cfg, "equation");
  if (equation != "nls" && equation != "nlw")
    throw ConfigError("config: field `equation` must be \"nls\" or \"nlw\"");
  EquationParams ep;
  ep.N = static_cast<int>(require_int(cfg, "N"));
  ep.k = static_cast<int>(opt_int(cfg, "k", equation == "nls" ? 2 : 1));
  ep.sigma = equation == "nls" ? 2 : 1;
  ep.s = require_rational(cfg, "s");
  ep.p = require_rational(cfg, "p");
  validate(ep);
  return ep;
}

inline Nonlinearity nonlinearity_from_config(const json& cfg,
                                             const EquationParams& ep) {
  Nonlinearity nl;
  nl.p = ep.p.to_double();
  nl.lambda = opt_num(cfg, "lambda", 1.0);
  const std::string form = opt_str(cfg, "form", "power_preserving");
  if (form == "power_preserving")
    nl.form = NonlinearForm::power_preserving;
  else if (form == "power_modulus")
    nl.form = NonlinearForm::power_modulus;
  else
    throw ConfigError(
        "config: field `form` must be power_preserving or power_modulus");
  return nl;
}

inline SelectionResult selection_for(const EquationParams& ep) {
  return ep.sigma == 2
             ? select_schrodinger_exponents(ep.N, ep.s, ep.p)
             : select_wave_exponents(ep.N, ep.s - Rational(1, 2), ep.p);
}

inline RunRecord run_nonlinear_check(const json& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const EquationParams ep = params_from_config(cfg);
  const Nonlinearity nl = nonlinearity_from_config(cfg, ep);
  const int n = static_cast<int>(require_int(cfg, "grid_points"));
  const double L = require_num(cfg, "grid_extent");
  const double T = require_num(cfg, "T");
  const int samples = static_cast<int>(opt_int(cfg, "time_samples", 17));
  const int trajectories = static_cast<int>(opt_int(cfg, "trajectories", 20));
  const int mode_radius = static_cast<int>(opt_int(cfg, "mode_radius", 2));
  const double inv_tol = opt_num(cfg, "invariance_tolerance", 1e-8);
  const double halving_factor = opt_num(cfg, "halving_factor", 4.0);

  const TorusGrid grid = TorusGrid::isotropic(ep.N, ep.k, L, n);
  const SelectionResult sel = selection_for(ep);

  auto make_traj = [&](std::uint64_t stream) {
    const Field f = random_band_field(grid, mode_radius, seed, stream);
    return ep.sigma == 2
               ? nls_free_evolution(f, T, samples)
               : wave_free_evolution(
                     remove_mean(f),
                     remove_mean(random_band_field(grid, mode_radius, seed,
                                                   stream + 5000)),
                     T, samples);
  };

  double family_max = 0.0;
  std::vector<double> ratios;
  for (int i = 0; i < trajectories; ++i) {
    const double r =
        nonlinear_estimate_check(make_traj(i), nl, ep, sel, T);
    ratios.push_back(r);
    family_max = std::max(family_max, r);
  }
  const Trajectory probe = make_traj(0);
  const double r_base = nonlinear_estimate_check(probe, nl, ep, sel, T);
  const double r_scaled = nonlinear_estimate_check(scale_trajectory(probe, 2.5),
                                                   nl, ep, sel, T);
  const double invariance_dev =
      std::abs(r_base - r_scaled) / std::max(r_base, 1e-300);
  const double r_half = nonlinear_estimate_check(probe, nl, ep, sel, T / 2.0);
  const double halving_ratio =
      std::max(r_base / std::max(r_half, 1e-300), r_half / std::max(r_base, 1e-300));

  RunRecord rec;
  rec.subcommand = "nonlinear-check";
  rec.anchor = "nonlinear-estimate/" + require_str(cfg, "equation");
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json(&grid);
  rec.results =
      json{{"family_max", family_max},
           {"ratios", ratios},
           {"scalar_invariance_deviation", invariance_dev},
           {"halving_ratio", halving_ratio},
           {"selected_triple", {{"q", sel.triple.q.str()},
                                {"r", sel.triple.r.str()},
                                {"r_tilde", sel.triple.r_tilde.str()}}},
           {"beta", rational_json(sel.beta)},
           {"headline", "family_max=" + format_double(family_max)},
           {"tolerance", "invariance<=" + format_double(inv_tol) +
                             ",halving<=" + format_double(halving_factor)}};
  const bool ok = std::isfinite(family_max) && family_max > 0.0 &&
                  invariance_dev <= inv_tol && halving_ratio <= halving_factor;
  rec.status = ok ? "pass" : "fail";
  return rec;
}

// ---------------------------------------------------------------------------
// solve and contraction
// ---------------------------------------------------------------------------

inline CauchyData data_from_config(const json& cfg, const EquationParams& ep,
                                   const TorusGrid& grid,
                                   std::uint64_t seed) {
  const std::string kind = opt_str(cfg, "data", "random-band");
  const double amplitude = opt_num(cfg, "amplitude", 0.1);
  const int mode_radius = static_cast<int>(opt_int(cfg, "mode_radius", 2));
  if (kind == "constant") {
    Field f(grid);
    const cplx c(opt_num(cfg, "constant_re", 1.0),
                 opt_num(cfg, "constant_im", 0.0));
    for (auto& v : f.samples) v = c;
    if (ep.sigma == 1)
      throw ConfigError("config: constant data is only supported for nls");
    return CauchyDataS{f};
  }
  if (kind != "random-band")
    throw ConfigError("config: field `data` must be random-band or constant");
  Field f = random_band_field(grid, mode_radius, seed, 1);
  f = cplx(amplitude, 0.0) * f;
  if (ep.sigma == 2) return CauchyDataS{f};
  Field g = random_band_field(grid, mode_radius, seed, 2);
  g = cplx(amplitude, 0.0) * g;
  return CauchyDataW::make(remove_mean(f), g);
}

inline json report_json(const ContractionReport& r) {
  return json{{"T", r.T},
              {"A", r.A},
              {"ratios", r.ratios},
              {"budget_lhs", r.budget_lhs},
              {"budget_rhs", r.budget_rhs},
              {"converged", r.converged},
              {"iterates_gap", r.iterates_gap},
              {"diverged", r.diverged},
              {"iterations", r.iterations},
              {"data_norm", r.data_norm_value},
              {"c_free", r.c_free},
              {"c_duhamel", r.c_duhamel},
              {"beta", r.beta}};
}

inline RunRecord run_solve(const json& cfg, const std::string& dir) {
  const std::uint64_t seed = require_seed(cfg);
  const EquationParams ep = params_from_config(cfg);
  const Nonlinearity nl = nonlinearity_from_config(cfg, ep);
  const int n = static_cast<int>(require_int(cfg, "grid_points"));
  const double L = require_num(cfg, "grid_extent");
  const double T = require_num(cfg, "T");
  const int max_iter = static_cast<int>(opt_int(cfg, "max_iter", 30));
  const double tol = opt_num(cfg, "tol", 1e-10);
  const int samples = static_cast<int>(opt_int(cfg, "time_samples", 33));

  const TorusGrid grid = TorusGrid::isotropic(ep.N, ep.k, L, n);
  const CauchyData data = data_from_config(cfg, ep, grid, seed);
  const PicardResult res =
      picard_solve(data, nl, ep, T, max_iter, tol, samples);

  RunRecord rec;
  rec.subcommand = "solve";
  rec.anchor = "picard-solve/" + require_str(cfg, "equation");
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json(&grid);
  rec.results = report_json(res.report);
  rec.results["headline"] =
      "iterations=" + std::to_string(res.report.iterations);
  rec.results["tolerance"] = format_double(tol);
  // mass drift along the limit, flagged (a conservation law only for the
  // gauge-invariant form with real coupling)
  {
    const double m0 = l2_norm(res.solution.states.front());
    double drift = 0.0;
    for (const Field& st : res.solution.states)
      drift = std::max(drift, std::abs(l2_norm(st) - m0) / m0);
    rec.results["mass_drift"] = drift;
    rec.results["mass_conserving_form"] =
        nl.form == NonlinearForm::power_preserving;
  }
  if (opt_int(cfg, "save_fields", 0) != 0) {
    const std::string snap = rec.id + "-final.field";
    write_field(res.solution.states.back(),
                (std::filesystem::path(dir) / snap).string());
    rec.results["final_field"] = snap;
  }
  rec.status = res.report.diverged ? "fail"
               : res.report.converged ? "pass"
                                      : "inconclusive";
  return rec;
}

inline RunRecord run_contraction(const json& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const EquationParams ep = params_from_config(cfg);
  const Nonlinearity nl = nonlinearity_from_config(cfg, ep);
  const int n = static_cast<int>(require_int(cfg, "grid_points"));
  const double L = require_num(cfg, "grid_extent");
  const double T0 = require_num(cfg, "T");
  const int n_pairs = static_cast<int>(opt_int(cfg, "n_pairs", 6));
  const int max_halvings = static_cast<int>(opt_int(cfg, "max_halvings", 8));
  const int samples = static_cast<int>(opt_int(cfg, "time_samples", 17));
  const int max_iter = static_cast<int>(opt_int(cfg, "max_iter", 30));
  const double tol = opt_num(cfg, "tol", 1e-10);

  const TorusGrid grid = TorusGrid::isotropic(ep.N, ep.k, L, n);
  const CauchyData data = data_from_config(cfg, ep, grid, seed);

  RunRecord rec;
  rec.subcommand = "contraction";
  rec.anchor = "contraction/" + require_str(cfg, "equation");
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json(&grid);

  json attempts = json::array();
  double found_T = 0.0;
  json found_report;
  for (int halving = 0; halving <= max_halvings; ++halving) {
    const double T = T0 * std::ldexp(1.0, -halving);
    const ContractionReport pairs =
        contraction_experiment(data, nl, ep, T, n_pairs, seed, samples);
    const PicardResult pic = picard_solve(data, nl, ep, T, max_iter, tol,
                                          samples);
    bool geometric = pic.report.converged;
    const auto& gaps = pic.report.iterates_gap;
    for (std::size_t i = 1; i + 1 < gaps.size() && geometric; ++i)
      if (gaps[i] > 0.0 && gaps[i + 1] / gaps[i] > 0.9) geometric = false;
    json att{{"T", T},
             {"pairs", report_json(pairs)},
             {"picard", report_json(pic.report)},
             {"gap_decay_geometric", geometric}};
    attempts.push_back(att);
    if (pairs.converged && pic.report.converged && geometric) {
      found_T = T;
      found_report = att;
      break;
    }
  }
  rec.results = json{{"attempts", attempts},
                     {"found_T", found_T},
                     {"found", found_T > 0.0},
                     {"headline", found_T > 0.0
                                      ? "T=" + format_double(found_T)
                                      : "no contracting T found"},
                     {"tolerance", "ratios<=1/2,budget"}};
  if (found_T > 0.0) rec.results["witness"] = found_report;
  rec.status = found_T > 0.0 ? "pass" : "fail";
  return rec;
}

// ---------------------------------------------------------------------------
// rough-data
// ---------------------------------------------------------------------------

inline RunRecord run_rough_data(const json& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const int N = static_cast<int>(require_int(cfg, "N"));
  const int k = static_cast<int>(require_int(cfg, "k"));
  const int n = static_cast<int>(require_int(cfg, "grid_points"));
  const double L = require_num(cfg, "grid_extent");
  const double s = require_num(cfg, "s");
  RoughDataProfile profile;
  profile.rough_x_exponent = opt_num(cfg, "rough_exponent", 1.0);
  profile.smooth_y_width = opt_num(cfg, "smooth_y_width", 0.0);
  const double stability_tol = opt_num(cfg, "stability_tolerance", 0.02);
  const double growth_min = opt_num(cfg, "growth_min", 1.2);

  const TorusGrid grid = TorusGrid::isotropic(N, k, L, n);
  const auto [field, diag] = rough_data_builder(profile, grid, s, seed);
  (void)field;

  const double mixed_change =
      std::abs(diag.mixed - diag.mixed_doubled) / diag.mixed;
  const double growth = diag.full_hs_doubled / diag.full_hs;

  RunRecord rec;
  rec.subcommand = "rough-data";
  rec.anchor = "partial-regularity-separation";
  rec.id = make_run_id(rec.subcommand, seed);
  rec.timestamp = utc_timestamp();
  rec.config = cfg;
  rec.environment = environment_json(&grid);
  rec.results = json{
      {"phi1_l2", diag.phi1_l2},
      {"phi1_l2_doubled", diag.phi1_l2_doubled},
      {"phi1_hs", diag.phi1_hs},
      {"phi1_hs_doubled", diag.phi1_hs_doubled},
      {"mixed", diag.mixed},
      {"mixed_doubled", diag.mixed_doubled},
      {"full_hs", diag.full_hs},
      {"full_hs_doubled", diag.full_hs_doubled},
      {"mixed_relative_change", mixed_change},
      {"full_hs_growth", growth},
      {"headline", "partial_change=" + format_double(mixed_change) +
                       ",growth=" + format_double(growth)},
      {"tolerance", "change<=" + format_double(stability_tol) +
                        ",growth>=" + format_double(growth_min)}};
  rec.status =
      (mixed_change <= stability_tol && growth >= growth_min) ? "pass" : "fail";
  return rec;
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

inline RunRecord run_subcommand(const std::string& name, const json& cfg,
                                const std::string& out_dir) {
  if (name == "exponents") return run_exponents(cfg);
  if (name == "strichartz-scan") return run_strichartz_scan(cfg, out_dir);
  if (name == "kernel-decay") return run_kernel_decay(cfg, out_dir);
  if (name == "hessian-scan") return run_hessian_scan(cfg);
  if (name == "nonlinear-check") return run_nonlinear_check(cfg);
  if (name == "solve") return run_solve(cfg, out_dir);
  if (name == "contraction") return run_contraction(cfg);
  if (name == "rough-data") return run_rough_data(cfg);
  throw ConfigError("unknown subcommand: " + name);
}

inline int status_exit_code(const std::string& status) {
  if (status == "pass") return 0;
  if (status == "fail") return 1;
  return 2;  // inconclusive
}

}  // namespace displab::cli
