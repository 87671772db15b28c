// Command-line front end: every experiment is a subcommand driven by a JSON
// config, emitting an append-only run record (plus CSV series) into the
// output directory.  Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 config
// error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "displab/experiments.hpp"

namespace {

using displab::json;

json load_config(const std::string& path, std::uint64_t seed_override,
                 bool has_seed_override) {
  std::ifstream is(path);
  if (!is)
    throw displab::cli::ConfigError("cannot open config file: " + path);
  json cfg = json::parse(is, nullptr, false);
  if (cfg.is_discarded())
    throw displab::cli::ConfigError("config is not valid JSON: " + path);
  if (has_seed_override) cfg["seed"] = seed_override;
  return cfg;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("DISPLAB_OUT_DIR")) return env;
  return "runs";
}

int run_one(const std::string& name, const std::string& config_path,
            const std::string& out_dir, std::uint64_t seed, bool has_seed) {
  const json cfg = load_config(config_path, seed, has_seed);
  std::filesystem::create_directories(out_dir);
  const displab::RunRecord rec =
      displab::cli::run_subcommand(name, cfg, out_dir);
  const auto path = displab::write_run_record(rec, out_dir);
  std::cout << rec.id << "  [" << rec.status << "]  " << rec.anchor << "  "
            << rec.results.value("headline", "") << "  (tolerance "
            << rec.results.value("tolerance", "-") << ")  -> " << path.string()
            << "\n";
  return displab::cli::status_exit_code(rec.status);
}

int run_report(const std::string& dir, const std::string& csv_out) {
  const auto rows = displab::aggregate_records(dir);
  displab::CsvTable csv;
  csv.header = {"id", "anchor", "metric", "tolerance", "status"};
  std::cout << "id | anchor | metric | tolerance | status\n";
  for (const auto& r : rows) {
    std::cout << r.id << " | " << r.anchor << " | " << r.metric << " | "
              << r.tolerance << " | " << r.status << "\n";
    csv.rows.push_back({r.id, r.anchor, r.metric, r.tolerance, r.status});
  }
  if (!csv_out.empty()) csv.write(csv_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-norm dispersive estimates laboratory"};
  app.require_subcommand(1);

  const std::vector<std::string> experiment_names = {
      "exponents",  "strichartz-scan", "kernel-decay", "hessian-scan",
      "nonlinear-check", "solve",      "contraction",  "rough-data"};

  std::string config_path;
  std::string out_dir = default_out_dir();
  std::uint64_t seed = 0;
  bool has_seed = false;

  for (const std::string& name : experiment_names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config path")->required();
    sub->add_option("--out", out_dir, "output directory for run records");
    sub->add_option("--seed", seed, "override the config RNG seed")
        ->each([&](const std::string&) { has_seed = true; });
  }

  std::string report_dir;
  std::string report_csv;
  CLI::App* rep = app.add_subcommand("report", "aggregate run records");
  rep->add_option("dir", report_dir, "results directory")->required();
  rep->add_option("--csv", report_csv, "also write the table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rep->parsed()) return run_report(report_dir, report_csv);
    for (const std::string& name : experiment_names)
      if (app.get_subcommand(name)->parsed())
        return run_one(name, config_path, out_dir, seed, has_seed);
    std::cerr << "no subcommand selected\n";
    return 3;
  } catch (const displab::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
