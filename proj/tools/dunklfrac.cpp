// dunklfrac: run smoothness experiments and transform sampled radial functions.
//
// Exit status: 0 when every requested check passes, 1 when a check fails, 2 on usage,
// configuration or input errors.

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dunkl/harness.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/transforms.hpp"

namespace {

constexpr int kInputError = 2;

void print_summary_line(std::ostream& out, const dunkl::SmoothnessReport& r) {
  const auto& s = r.summary;
  out << (s.pass ? "PASS " : "FAIL ") << r.id << "  rows=" << r.rows.size() << " failed=" << s.failed_rows
      << " ratio=[" << s.min_ratio << ", " << s.max_ratio << "] drift=" << s.drift
      << (s.drift_enforced ? "" : " (not enforced)") << " warnings=" << s.warnings << '\n';
}

int cmd_run(const std::string& config_path, const std::string& output_override) {
  dunkl::RunConfig config = dunkl::load_run_config(config_path);
  if (!output_override.empty()) config.output_path = output_override;
  const dunkl::RunOutcome outcome = dunkl::run_all(config);
  for (const auto& report : outcome.reports) print_summary_line(std::cout, report);
  if (outcome.reports.empty()) std::cout << "no experiments configured\n";
  return outcome.exit_code();
}

struct VerifyArgs {
  std::string experiment;
  std::vector<double> lambda;
  std::vector<std::string> p;
  std::vector<double> m;
  std::vector<double> r;
  double scale_min = 0.0;
  double scale_max = 0.0;
  int points = 0;
  double sigma = 0.0;
  std::vector<std::string> functions;
  std::string output;
};

int cmd_verify(const VerifyArgs& a) {
  const auto kind = dunkl::experiment_from_string(a.experiment);
  if (!kind) {
    std::cerr << "unknown experiment '" << a.experiment << "'; expected one of:";
    for (const auto& n : dunkl::experiment_names()) std::cerr << ' ' << n;
    std::cerr << '\n';
    return kInputError;
  }
  dunkl::ExperimentConfig cfg = dunkl::ExperimentConfig::defaults_for(*kind);
  if (!a.lambda.empty()) cfg.lambda_values = a.lambda;
  if (!a.p.empty()) {
    cfg.p_values.clear();
    for (const auto& p : a.p) cfg.p_values.push_back(dunkl::parse_lp_index(p));
  }
  if (!a.m.empty()) cfg.m_values = a.m;
  if (!a.r.empty()) cfg.r_values = a.r;
  if (a.sigma > 0.0) cfg.sigma = a.sigma;
  if (a.scale_min > 0.0) cfg.scale_grid.min = a.scale_min;
  if (a.scale_max > 0.0) cfg.scale_grid.max = a.scale_max;
  if (a.points > 0) cfg.scale_grid.points = a.points;
  if (!a.functions.empty()) cfg.test_functions = a.functions;

  const dunkl::SmoothnessReport report = dunkl::run_experiment(cfg);
  if (a.output.empty()) {
    dunkl::write_report_csv(std::cout, report);
  } else {
    const std::filesystem::path dir = a.output;
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / (report.id + ".csv"), std::ios::binary | std::ios::trunc);
    dunkl::write_report_csv(csv, report);
    std::ofstream js(dir / (report.id + ".json"), std::ios::binary | std::ios::trunc);
    dunkl::write_report_summary(js, report);
  }
  dunkl::write_report_summary(std::cerr, report);
  return report.summary.pass ? 0 : 1;
}

int cmd_transform(const std::string& input, double lambda, const std::string& output, bool inverse) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + input);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + output);
  if (inverse) {
    const dunkl::Spectrum s = dunkl::read_spectrum_csv(in);
    if (s.lambda() != lambda) {
      std::cerr << "note: input header lambda=" << s.lambda() << " differs from --lambda=" << lambda << '\n';
    }
    const dunkl::Spectrum relabeled(s.grid(), std::vector<double>(s.values().begin(), s.values().end()), lambda);
    const dunkl::RadialFunction f = dunkl::inverse_hankel(relabeled);
    dunkl::write_radial_csv(out, f, lambda);
    if (f.truncation_suspect) std::cerr << "warning: mass near rmax; the result may be truncated\n";
    return 0;
  }
  const dunkl::RadialCsv csv = dunkl::read_radial_csv(in);
  if (csv.lambda != lambda) {
    std::cerr << "note: input header lambda=" << csv.lambda << " differs from --lambda=" << lambda << '\n';
  }
  const dunkl::Spectrum s = dunkl::hankel(csv.function, lambda);
  dunkl::write_spectrum_csv(out, s);
  if (s.truncation_suspect()) std::cerr << "warning: input has mass near rmax; the transform may be truncated\n";
  return 0;
}

int cmd_sample(const std::string& profile, double lambda, double rmax, int n, const std::string& output) {
  const dunkl::RadialGrid grid = dunkl::make_grid(rmax, n);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + output);
  std::function<double(double)> fn;
  if (profile == "gaussian") fn = [](double t) { return std::exp(-0.5 * t * t); };
  else if (profile == "modulated") fn = [](double t) { return t * t * std::exp(-0.5 * t * t); };
  else if (profile == "poly") fn = [lambda](double t) { return std::pow(1.0 + t * t, -(lambda + 2.0)); };
  else throw std::invalid_argument("unknown profile '" + profile + "' (gaussian, modulated, poly)");
  dunkl::write_radial_csv(out, dunkl::RadialFunction::sample(grid, fn, profile), lambda);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional smoothness experiments for Dunkl and Hankel transforms"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_output;
  auto* run = app.add_subcommand("run", "Run every experiment of a JSON configuration");
  run->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--output", run_output, "Override output_path from the configuration");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run one experiment with command-line parameters");
  verify->add_option("experiment", va.experiment, "Experiment name")->required();
  verify->add_option("--lambda", va.lambda, "Index lambda (repeatable)");
  verify->add_option("--p", va.p, "L^p index, a number >= 1 or 'inf' (repeatable)");
  verify->add_option("--m", va.m, "Difference order (repeatable)");
  verify->add_option("--r", va.r, "Laplacian power (repeatable)");
  verify->add_option("--scale-min", va.scale_min, "Smallest scale");
  verify->add_option("--scale-max", va.scale_max, "Largest scale");
  verify->add_option("--points", va.points, "Number of geometric scale points");
  verify->add_option("--sigma", va.sigma, "Bandlimit of synthesized entire functions");
  verify->add_option("--function", va.functions, "Test function (repeatable)");
  verify->add_option("--output", va.output, "Write <experiment>.csv/.json here instead of stdout");

  std::string input;
  std::string output;
  double lambda = 0.0;
  bool inverse = false;
  auto* transform = app.add_subcommand("transform", "Hankel transform of a sampled radial function");
  transform->add_option("--input", input, "Input CSV (node,value)")->required()->check(CLI::ExistingFile);
  transform->add_option("--lambda", lambda, "Transform index")->required();
  transform->add_option("--output", output, "Output CSV")->required();
  transform->add_flag("--inverse", inverse, "Read a spectrum CSV and transform back");

  std::string profile;
  double rmax = dunkl::kDefaultGrid.rmax;
  int n = dunkl::kDefaultGrid.n;
  auto* sample = app.add_subcommand("sample", "Write a named radial profile on the standard grid");
  sample->add_option("--profile", profile, "gaussian, modulated or poly")->required();
  sample->add_option("--lambda", lambda, "Index recorded in the header")->required();
  sample->add_option("--rmax", rmax, "Grid radius");
  sample->add_option("--n", n, "Grid size");
  sample->add_option("--output", output, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  try {
    if (*run) return cmd_run(config_path, run_output);
    if (*verify) return cmd_verify(va);
    if (*transform) return cmd_transform(input, lambda, output, inverse);
    if (*sample) return cmd_sample(profile, lambda, rmax, n, output);
  } catch (const dunkl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
