#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydrostat/config.hpp"

namespace hydrostat {

/// How a check's value is recomputed from a persisted CSV file.
enum class Reduce { none, max, max_abs, last, ratio_max_abs };

/// One verdict: pass iff lo <= value <= hi (and value is not NaN).
struct Check {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
  Reduce reduce = Reduce::none;
  std::string csv;
  std::string column;
  /// Denominator file for ratio_max_abs.
  std::string csv2;
};

Check make_check(std::string name, double value, double lo, double hi);

struct Report {
  std::string experiment;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<Check> checks;
  /// Files produced, relative to the run directory.
  std::vector<std::string> files;
  bool all_pass() const;
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Runs the configured experiment, writing CSVs and snapshots into
/// `out_dir`. Does not write the report or the manifest.
Report run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

Report exp_energy_identity(const RunConfig& cfg, const std::filesystem::path& out_dir);
Report exp_decomposition(const RunConfig& cfg, const std::filesystem::path& out_dir);
Report exp_stability(const RunConfig& cfg, const std::filesystem::path& out_dir);
Report exp_mollification_convergence(const RunConfig& cfg, const std::filesystem::path& out_dir);
Report exp_lemma_suite(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// run_experiment plus report.json, manifest.json, config.ini (canonical
/// form) and timing.json. Wall-clock times go only into timing.json so the
/// other files are reproducible byte for byte.
Report execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Re-evaluates every check of a finished run from report.json and the CSV
/// files, and compares with the verdicts in manifest.json. Throws DataError
/// on missing or inconsistent files.
struct ReplayResult {
  std::vector<Check> checks;
  bool matches_manifest = true;
  bool all_pass() const;
};
ReplayResult replay_run(const std::filesystem::path& run_dir);

/// Reads one column of a CSV file with a header row.
std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column);

/// Writes rows with 17 significant digits.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

}  // namespace hydrostat
