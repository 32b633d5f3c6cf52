#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dunkl/quad.hpp"
#include "dunkl/transforms.hpp"

namespace dunkl {

/// Configuration problem; `where` names the offending field path or "line L, column C".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

enum class Experiment {
  Jackson,
  Equivalence,
  Bernstein,
  NikolskiiStechkin,
  Boas,
  GeneralEntire,
  Realization,
  Inverse,
};

std::string to_string(Experiment e);
std::optional<Experiment> experiment_from_string(const std::string& name);
const std::vector<std::string>& experiment_names();

struct ScaleGrid {
  double min = 0.01;
  double max = 1.0;
  int points = 9;

  /// Geometric points from min to max inclusive (a single point when min == max).
  std::vector<double> values() const;
};

/// Ratio window. `lo = 0` makes a check one-sided; `drift` is the largest allowed max/min ratio
/// within a group across two decades of scale, enforced only for two-sided checks.
struct Tolerances {
  double lo = 0.05;
  double hi = 20.0;
  double drift = 4.0;
};

/// Parameters of a single experiment run.
struct ExperimentConfig {
  Experiment experiment = Experiment::Equivalence;
  std::string id;  // output file stem; defaults to the experiment name
  std::vector<double> lambda_values{0.25, 1.0};
  std::vector<LpIndex> p_values{2.0};
  std::vector<double> m_values{2.0};
  std::vector<double> r_values{1.0};
  ScaleGrid scale_grid;
  std::vector<std::string> test_functions{"gaussian"};
  Tolerances tolerances;
  /// Bandlimit of synthesized entire functions (fixed-sigma experiments).
  double sigma = 1.0;
  /// (r1, m1, r2, m2) cases for the general entire-function inequality.
  std::vector<std::array<double, 4>> general;
  std::vector<int> inverse_n{2, 4, 8, 16, 32};
  std::vector<double> marchaud_deltas{0.1, 0.2, 0.4};
  std::vector<int> sobolev_n{4, 8, 16};
  int marchaud_points = 17;
  GridSpec grid = kDefaultGrid;

  /// Defaults (scale grid, window) appropriate for `e`.
  static ExperimentConfig defaults_for(Experiment e);
  /// Hypothesis guards: t <= 1/(2 sigma), m >= r, rho >= 0, positive parameters, known names.
  void validate() const;
};

struct RunConfig {
  std::filesystem::path output_path = "reports";
  std::vector<ExperimentConfig> experiments;
};

/// Parses JSON text. Top-level ExperimentConfig fields act as defaults for every entry of
/// "experiments"; an entry is an experiment name or an object with "name" plus overrides.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

struct ReportRow {
  std::string experiment;
  double lambda = 0.0;
  LpIndex p = 2.0;
  double m = 0.0;
  double r = 0.0;
  double scale = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
  bool truncation_suspect = false;
};

struct ReportSummary {
  std::string experiment;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double drift = 1.0;
  bool drift_enforced = false;
  bool pass = true;
  std::size_t failed_rows = 0;
  std::size_t warnings = 0;
};

struct SmoothnessReport {
  std::string id;
  Tolerances tolerances;
  std::vector<ReportRow> rows;
  ReportSummary summary;
};

SmoothnessReport verify_jackson(const ExperimentConfig& cfg);
SmoothnessReport verify_equivalence(const ExperimentConfig& cfg);
SmoothnessReport verify_bernstein(const ExperimentConfig& cfg);
SmoothnessReport verify_nikolskii_stechkin(const ExperimentConfig& cfg);
SmoothnessReport verify_boas(const ExperimentConfig& cfg);
SmoothnessReport verify_general_entire(const ExperimentConfig& cfg);
SmoothnessReport verify_realization(const ExperimentConfig& cfg);
SmoothnessReport verify_inverse(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment after validation.
SmoothnessReport run_experiment(const ExperimentConfig& cfg);

void write_report_csv(std::ostream& out, const SmoothnessReport& report);
void write_report_summary(std::ostream& out, const SmoothnessReport& report);

struct RunOutcome {
  std::vector<SmoothnessReport> reports;
  std::vector<std::filesystem::path> files;
  bool all_pass = true;
  int exit_code() const noexcept { return all_pass ? 0 : 1; }
};

/// Runs every experiment of a parsed configuration and writes <id>.csv and <id>.json under
/// output_path. Experiments run concurrently; files are written in configuration order.
RunOutcome run_all(const RunConfig& config);
RunOutcome run_all(const std::filesystem::path& config_path);

/// Named test profile on `grid` as a spectrum. Physical profiles (gaussian, modulated, poly) are
/// transformed; bandlimited ones (bump, band_edge, gauss_window) are synthesized with
/// bandlimit `sigma`.
Spectrum make_test_spectrum(const std::string& name, const RadialGrid& grid, double lambda,
                            double sigma);
bool is_bandlimited_profile(const std::string& name);
const std::vector<std::string>& test_function_names();

}  // namespace dunkl
