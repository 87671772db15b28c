#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "displab/rational.hpp"

namespace displab {

using json = nlohmann::json;

/// Floating-point values serialized with 17 significant digits so records
/// re-read bit-exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json rational_json(const Rational& r) {
  return json{{"str", r.str()}, {"value", r.to_double()}};
}

/// One experiment run: id, timestamp, config snapshot, a stable experiment
/// anchor, structured results and environment metadata.  Records are
/// append-only files named by id.
struct RunRecord {
  std::string id;
  std::string timestamp;
  std::string subcommand;
  std::string anchor;
  std::string status;  // pass | fail | inconclusive
  json config;
  json results;
  json environment;

  json to_json() const {
    return json{{"id", id},
                {"timestamp", timestamp},
                {"subcommand", subcommand},
                {"anchor", anchor},
                {"status", status},
                {"config", config},
                {"results", results},
                {"environment", environment}};
  }
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

inline std::string make_run_id(const std::string& subcommand,
                               std::uint64_t seed) {
  // nanosecond suffix keeps ids unique when several runs share a second
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "%06lld",
                static_cast<long long>(ns % 1000000));
  return subcommand + "-" + utc_timestamp() + "-s" + std::to_string(seed) +
         "-" + suffix;
}

/// Atomic write: temp file in the target directory, then rename.
inline std::filesystem::path write_run_record(const RunRecord& rec,
                                              const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path final_path = fs::path(out_dir) / (rec.id + ".json");
  const fs::path tmp_path = fs::path(out_dir) / (rec.id + ".json.tmp");
  {
    std::ofstream os(tmp_path);
    if (!os)
      throw std::runtime_error("write_run_record: cannot open " +
                               tmp_path.string());
    os << rec.to_json().dump(2) << "\n";
  }
  fs::rename(tmp_path, final_path);
  return final_path;
}

/// CSV series with a fixed, documented column order.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("CsvTable: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
      os << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        os << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
};

/// Aggregate view over all records in a directory: one row per run with the
/// anchor, headline metric, tolerance and status preserved verbatim.
struct ReportRow {
  std::string id;
  std::string anchor;
  std::string metric;
  std::string tolerance;
  std::string status;
};

inline std::vector<ReportRow> aggregate_records(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<ReportRow> rows;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream is(p);
    json j = json::parse(is, nullptr, false);
    if (j.is_discarded()) continue;
    ReportRow row;
    row.id = j.value("id", p.stem().string());
    row.anchor = j.value("anchor", "");
    row.status = j.value("status", "");
    if (j.contains("results")) {
      const json& r = j["results"];
      row.metric = r.value("headline", "");
      row.tolerance = r.value("tolerance", "");
    }
    rows.push_back(row);
  }
  if (rows.empty())
    throw std::runtime_error("aggregate_records: no records in " + dir);
  return rows;
}

}  // namespace displab
