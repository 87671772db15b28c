#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "displab/experiments.hpp"

using namespace displab;
namespace fs = std::filesystem;

namespace {

json nls_exponent_config() {
  return json{{"seed", 1}, {"equation", "nls"}, {"N", 3}, {"s", "1"},
              {"p", "3"}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("displab_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config field validation names the offender") {
  json cfg = nls_exponent_config();
  cfg.erase("p");
  try {
    cli::run_exponents(cfg);
    FAIL("expected a config error");
  } catch (const cli::ConfigError& e) {
    CHECK(std::string(e.what()).find("`p`") != std::string::npos);
  }

  json bad_eq = nls_exponent_config();
  bad_eq["equation"] = "heat";
  CHECK_THROWS_AS(cli::run_exponents(bad_eq), cli::ConfigError);

  CHECK_THROWS_AS(cli::run_subcommand("unknown", nls_exponent_config(), "."),
                  cli::ConfigError);
}

TEST_CASE("rational config parsing") {
  CHECK(cli::parse_rational(json("3/2"), "x") == Rational(3, 2));
  CHECK(cli::parse_rational(json("-7"), "x") == Rational(-7));
  CHECK(cli::parse_rational(json(4), "x") == Rational(4));
  CHECK(cli::parse_rational(json("inf"), "x").is_infinite());
  CHECK_THROWS_AS(cli::parse_rational(json("3.5x"), "x"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_rational(json(1.5), "x"), cli::ConfigError);
}

TEST_CASE("exponents subcommand record") {
  const RunRecord rec = cli::run_exponents(nls_exponent_config());
  CHECK(rec.status == "pass");
  CHECK(rec.subcommand == "exponents");
  CHECK(!rec.anchor.empty());
  CHECK(rec.results.at("epsilon").at("str") == "1/4");
  CHECK(rec.results.at("triple").at("q").at("str") == "16/3");
  CHECK(rec.results.at("triple").at("r").at("str") == "4");
  CHECK(rec.results.at("triple").at("r_tilde").at("str") == "16/7");
  CHECK(rec.results.at("beta").at("str") == "1/4");
  CHECK(rec.results.at("admissible") == true);

  json beyond = nls_exponent_config();
  beyond["p"] = "5";  // the excluded critical endpoint
  const RunRecord fail_rec = cli::run_exponents(beyond);
  CHECK(fail_rec.status == "fail");
  CHECK(cli::status_exit_code(fail_rec.status) == 1);
}

TEST_CASE("exit code mapping") {
  CHECK(cli::status_exit_code("pass") == 0);
  CHECK(cli::status_exit_code("fail") == 1);
  CHECK(cli::status_exit_code("inconclusive") == 2);
}

TEST_CASE("determinism: identical config and seed give identical results") {
  TempDir tmp;
  const json cfg{{"seed", 42},   {"N", 2},           {"k", 1},
                 {"grid_points", 32}, {"grid_extent", 6.2831853071795862},
                 {"s", 1.0},     {"rough_exponent", 1.0}};
  const RunRecord a = cli::run_rough_data(cfg);
  const RunRecord b = cli::run_rough_data(cfg);
  CHECK(a.results.dump() == b.results.dump());

  const json solve_cfg{{"seed", 7},       {"equation", "nls"},
                       {"N", 3},          {"k", 2},
                       {"s", "1"},        {"p", "3"},
                       {"lambda", 1.0},   {"grid_points", 8},
                       {"grid_extent", 6.2831853071795862},
                       {"T", 0.25},       {"time_samples", 17},
                       {"max_iter", 20},  {"tol", 1e-10},
                       {"amplitude", 0.1}};
  const RunRecord s1 = cli::run_solve(solve_cfg, tmp.path.string());
  const RunRecord s2 = cli::run_solve(solve_cfg, tmp.path.string());
  CHECK(s1.results.dump() == s2.results.dump());
  CHECK(s1.status == "pass");
}

TEST_CASE("record files and report aggregation") {
  TempDir tmp;
  const RunRecord rec = cli::run_exponents(nls_exponent_config());
  const fs::path p = write_run_record(rec, tmp.path.string());
  CHECK(fs::exists(p));
  CHECK(p.extension() == ".json");

  json wave_cfg{{"seed", 2}, {"equation", "nlw"}, {"N", 2}, {"s", "1"},
                {"p", "4"},  {"epsilon", "5/4"}};
  write_run_record(cli::run_exponents(wave_cfg), tmp.path.string());
  json beyond = nls_exponent_config();
  beyond["p"] = "5";
  beyond["seed"] = 3;
  write_run_record(cli::run_exponents(beyond), tmp.path.string());

  const auto rows = aggregate_records(tmp.path.string());
  CHECK(rows.size() == 3);
  int pass = 0, fail = 0;
  for (const auto& r : rows) {
    CHECK(!r.anchor.empty());
    if (r.status == "pass") ++pass;
    if (r.status == "fail") ++fail;
  }
  CHECK(pass == 2);
  CHECK(fail == 1);  // statuses preserved verbatim

  // report is a pure read: aggregating twice gives the same rows
  const auto again = aggregate_records(tmp.path.string());
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].id == rows[i].id);
    CHECK(again[i].status == rows[i].status);
  }
}

TEST_CASE("empty results directory is an error") {
  TempDir tmp;
  CHECK_THROWS_AS(aggregate_records(tmp.path.string()), std::runtime_error);
}

TEST_CASE("csv formatting uses 17 significant digits") {
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  const double v = 0.1234567890123456789;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("unique record ids") {
  const std::string a = make_run_id("solve", 1);
  const std::string b = make_run_id("solve", 1);
  CHECK(a != b);
}
