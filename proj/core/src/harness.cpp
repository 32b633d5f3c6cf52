#include "dunkl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "dunkl/operators.hpp"
#include "dunkl/smoothness.hpp"

namespace dunkl {

namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// p = 2 Bernstein constant is exactly 1; the slack only absorbs rounding in the two sums.
constexpr double kBernsteinL2Bound = 1.0 + 1e-8;
constexpr double kSharpnessSlack = 0.05;
constexpr double kSpecializationTol = 1e-12;
constexpr double kTailThreshold = 1e-10;
constexpr int kTailCap = 128;

const std::vector<std::pair<Experiment, std::string>>& experiment_table() {
  static const std::vector<std::pair<Experiment, std::string>> table{
      {Experiment::Jackson, "jackson"},
      {Experiment::Equivalence, "equivalence"},
      {Experiment::Bernstein, "bernstein"},
      {Experiment::NikolskiiStechkin, "nikolskii_stechkin"},
      {Experiment::Boas, "boas"},
      {Experiment::GeneralEntire, "general_entire"},
      {Experiment::Realization, "realization"},
      {Experiment::Inverse, "inverse"},
  };
  return table;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [key, name] : experiment_table()) {
    if (key == e) return name;
  }
  return "unknown";
}

std::optional<Experiment> experiment_from_string(const std::string& name) {
  for (const auto& [key, n] : experiment_table()) {
    if (n == name) return key;
  }
  return std::nullopt;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : experiment_table()) out.push_back(entry.second);
    return out;
  }();
  return names;
}

std::vector<double> ScaleGrid::values() const {
  if (points == 1) return {min};
  return log_grid(min, max, points);
}

// ---------------------------------------------------------------------------------------------
// Test profiles

const std::vector<std::string>& test_function_names() {
  static const std::vector<std::string> names{"gaussian", "modulated", "poly", "zero",
                                              "bump",     "band_edge", "gauss_window"};
  return names;
}

bool is_bandlimited_profile(const std::string& name) {
  return name == "bump" || name == "band_edge" || name == "gauss_window" || name == "zero";
}

namespace {

double bump01(double u) {  // exp(1 - 1/(1 - u^2)) on |u| < 1
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

}  // namespace

Spectrum make_test_spectrum(const std::string& name, const RadialGrid& grid, double lambda,
                            double sigma) {
  if (name == "gaussian") {
    return hankel(RadialFunction::sample(grid, [](double t) { return std::exp(-0.5 * t * t); }, name),
                  lambda);
  }
  if (name == "modulated") {
    return hankel(
        RadialFunction::sample(grid, [](double t) { return t * t * std::exp(-0.5 * t * t); }, name),
        lambda);
  }
  if (name == "poly") {
    const double a = lambda + 2.0;
    return hankel(RadialFunction::sample(grid, [a](double t) { return std::pow(1.0 + t * t, -a); }, name),
                  lambda);
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("make_test_spectrum: sigma must be positive");
  std::vector<double> values(grid.size(), 0.0);
  const auto nodes = grid.nodes();
  if (name == "zero") {
    return Spectrum(grid, std::move(values), lambda, sigma);
  }
  if (name == "bump") {
    for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = bump01(nodes[i] / sigma);
  } else if (name == "band_edge") {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      values[i] = bump01((nodes[i] - 0.95 * sigma) / (0.05 * sigma));
    }
  } else if (name == "gauss_window") {
    const CutoffEta eta = make_eta();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double y = nodes[i];
      values[i] = std::exp(-0.5 * y * y) * eta(2.0 * y / sigma);
    }
  } else {
    throw std::invalid_argument("unknown test function '" + name + "'");
  }
  return Spectrum(grid, std::move(values), lambda, sigma);
}

// ---------------------------------------------------------------------------------------------
// Configuration

ExperimentConfig ExperimentConfig::defaults_for(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.id = to_string(e);
  switch (e) {
    case Experiment::Jackson:
      c.scale_grid = {2.0, 32.0, 5};
      c.tolerances = {0.0, 20.0, 4.0};
      c.m_values = {2.0};
      c.r_values = {0.0, 1.0};
      break;
    case Experiment::Equivalence:
    case Experiment::Realization:
      c.scale_grid = {0.01, 1.0, 9};
      c.tolerances = {0.05, 20.0, 4.0};
      c.r_values = {0.5, 1.0, 2.0};
      break;
    case Experiment::Bernstein:
      c.scale_grid = {1.0, 16.0, 5};
      c.tolerances = {0.0, 20.0, 4.0};
      c.r_values = {1.0};
      c.test_functions = {"bump", "gauss_window", "band_edge"};
      break;
    case Experiment::NikolskiiStechkin:
    case Experiment::Boas:
      c.scale_grid = {0.01, 0.5, 9};
      c.tolerances = e == Experiment::Boas ? Tolerances{0.05, 20.0, 4.0} : Tolerances{0.0, 20.0, 4.0};
      c.m_values = {1.0, 2.0};
      c.test_functions = {"gauss_window", "bump"};
      break;
    case Experiment::GeneralEntire:
      c.scale_grid = {0.01, 0.5, 5};
      c.tolerances = {0.0, 20.0, 4.0};
      c.test_functions = {"gauss_window"};
      c.general = {{1.0, 0.0, 0.0, 0.0}, {2.0, 0.0, 0.0, 2.0}, {0.0, 2.0, 0.0, 2.0}, {1.0, 1.0, 0.0, 1.0}};
      break;
    case Experiment::Inverse:
      c.tolerances = {0.0, 1.0, 4.0};
      c.m_values = {2.0};
      c.r_values = {1.0};
      c.test_functions = {"gaussian", "modulated", "poly"};
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  const std::string where = id.empty() ? to_string(experiment) : id;
  auto fail = [&](const std::string& field, const std::string& what) {
    throw ConfigError(where + "." + field, what);
  };
  if (lambda_values.empty()) fail("lambda_values", "must not be empty");
  for (double l : lambda_values) {
    if (!(l > -0.5) || !std::isfinite(l)) fail("lambda_values", "every lambda must exceed -1/2");
  }
  if (p_values.empty()) fail("p_values", "must not be empty");
  if (test_functions.empty()) fail("test_functions", "must not be empty");
  for (const auto& f : test_functions) {
    if (std::find(test_function_names().begin(), test_function_names().end(), f) ==
        test_function_names().end()) {
      fail("test_functions", "unknown test function '" + f + "'");
    }
  }
  if (!(scale_grid.min > 0.0) || !(scale_grid.max >= scale_grid.min) || scale_grid.points < 1 ||
      !std::isfinite(scale_grid.max)) {
    fail("scale_grid", "need 0 < min <= max and points >= 1");
  }
  if (scale_grid.points == 1 && scale_grid.min != scale_grid.max) {
    fail("scale_grid", "a single point requires min == max");
  }
  if (!(tolerances.lo >= 0.0) || !(tolerances.hi >= tolerances.lo) || !(tolerances.drift >= 1.0)) {
    fail("tolerances", "need 0 <= lo <= hi and drift >= 1");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma", "must be positive");
  if (!(grid.rmax > 0.0) || grid.n < 16) fail("grid", "need rmax > 0 and n >= 16");

  const bool needs_m = experiment == Experiment::Jackson || experiment == Experiment::NikolskiiStechkin ||
                       experiment == Experiment::Boas || experiment == Experiment::Inverse;
  const bool needs_r = experiment == Experiment::Jackson || experiment == Experiment::Equivalence ||
                       experiment == Experiment::Bernstein || experiment == Experiment::Realization ||
                       experiment == Experiment::Inverse;
  if (needs_m) {
    if (m_values.empty()) fail("m", "must not be empty");
    for (double m : m_values) {
      if (!(m > 0.0) || !std::isfinite(m)) fail("m", "every m must be positive");
    }
  }
  if (needs_r) {
    if (r_values.empty()) fail("r", "must not be empty");
    const bool allow_zero = experiment == Experiment::Jackson || experiment == Experiment::Inverse;
    for (double r : r_values) {
      if (!std::isfinite(r) || r < 0.0 || (!allow_zero && r == 0.0)) {
        fail("r", allow_zero ? "every r must be nonnegative" : "every r must be positive");
      }
    }
  }

  const bool entire = experiment == Experiment::Bernstein || experiment == Experiment::NikolskiiStechkin ||
                      experiment == Experiment::Boas || experiment == Experiment::GeneralEntire;
  if (entire) {
    for (const auto& f : test_functions) {
      if (!is_bandlimited_profile(f)) fail("test_functions", "'" + f + "' is not bandlimited");
    }
  }
  if (experiment == Experiment::NikolskiiStechkin || experiment == Experiment::Boas ||
      experiment == Experiment::GeneralEntire) {
    if (scale_grid.max > (1.0 + 1e-12) / (2.0 * sigma)) {
      fail("scale_grid", "t must not exceed 1/(2 sigma) = " + short_number(0.5 / sigma));
    }
  }
  if (experiment == Experiment::GeneralEntire) {
    if (general.empty()) fail("general", "must list at least one [r1, m1, r2, m2] case");
    for (const auto& c : general) {
      for (double v : c) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail("general", "r1, m1, r2, m2 must be nonnegative");
      }
      if (c[0] + c[1] - c[2] - c[3] < 0.0) fail("general", "rho = r1 + m1 - r2 - m2 must be >= 0");
    }
  }
  if (experiment == Experiment::Inverse) {
    if (inverse_n.empty() && marchaud_deltas.empty() && sobolev_n.empty()) {
      fail("inverse_n", "no inverse checks requested");
    }
    for (int n : inverse_n) {
      if (n < 1 || n > kTailCap) fail("inverse_n", "n must lie in [1, " + std::to_string(kTailCap) + "]");
    }
    for (int n : sobolev_n) {
      if (n < 1 || n > kTailCap) fail("sobolev_n", "n must lie in [1, " + std::to_string(kTailCap) + "]");
    }
    for (double d : marchaud_deltas) {
      if (!(d > 0.0) || !(d < 1.0)) fail("marchaud_deltas", "need 0 < delta < 1");
    }
    if (marchaud_points < 2) fail("marchaud_points", "need at least two points");
  }
}

namespace {

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

int read_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

std::vector<double> read_numbers(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(path, "expected a number or a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> read_ints(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected a list of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_int(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

LpIndex read_p(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_lp_index(v.get<std::string>());
    return LpIndex(read_number(v, path));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + "." + key, "missing field");
  return obj.at(key);
}

const std::set<std::string>& experiment_keys() {
  static const std::set<std::string> keys{
      "name",      "id",       "lambda_values", "p_values",       "m",
      "r",         "scale_grid", "test_functions", "tolerances",  "sigma",
      "general",   "inverse_n", "marchaud_deltas", "sobolev_n",   "marchaud_points",
      "grid"};
  return keys;
}

void apply_fields(ExperimentConfig& c, const json& obj, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    const std::string field = path + "." + key;
    if (!experiment_keys().count(key)) throw ConfigError(field, "unknown field");
    if (key == "name") continue;
    if (key == "id") {
      if (!value.is_string() || value.get<std::string>().empty()) throw ConfigError(field, "expected a name");
      const std::string id = value.get<std::string>();
      if (id.find_first_of("/\\") != std::string::npos) throw ConfigError(field, "must not contain path separators");
      c.id = id;
    } else if (key == "lambda_values") {
      c.lambda_values = read_numbers(value, field);
    } else if (key == "p_values") {
      c.p_values.clear();
      if (!value.is_array()) {
        c.p_values.push_back(read_p(value, field));
      } else {
        for (std::size_t i = 0; i < value.size(); ++i) {
          c.p_values.push_back(read_p(value[i], field + "[" + std::to_string(i) + "]"));
        }
      }
    } else if (key == "m") {
      c.m_values = read_numbers(value, field);
    } else if (key == "r") {
      c.r_values = read_numbers(value, field);
    } else if (key == "scale_grid") {
      if (!value.is_object()) throw ConfigError(field, "expected {min, max, points}");
      c.scale_grid.min = read_number(require(value, "min", field), field + ".min");
      c.scale_grid.max = read_number(require(value, "max", field), field + ".max");
      c.scale_grid.points = read_int(require(value, "points", field), field + ".points");
    } else if (key == "test_functions") {
      if (!value.is_array()) throw ConfigError(field, "expected a list of names");
      c.test_functions.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_string()) throw ConfigError(field + "[" + std::to_string(i) + "]", "expected a name");
        c.test_functions.push_back(value[i].get<std::string>());
      }
    } else if (key == "tolerances") {
      if (!value.is_object()) throw ConfigError(field, "expected {lo, hi, drift}");
      for (const auto& [tk, tv] : value.items()) {
        const std::string tf = field + "." + tk;
        if (tk == "lo") c.tolerances.lo = read_number(tv, tf);
        else if (tk == "hi") c.tolerances.hi = read_number(tv, tf);
        else if (tk == "drift") c.tolerances.drift = read_number(tv, tf);
        else throw ConfigError(tf, "unknown field");
      }
    } else if (key == "sigma") {
      c.sigma = read_number(value, field);
    } else if (key == "general") {
      if (!value.is_array()) throw ConfigError(field, "expected a list of [r1, m1, r2, m2]");
      c.general.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string ef = field + "[" + std::to_string(i) + "]";
        const auto nums = read_numbers(value[i], ef);
        if (!value[i].is_array() || nums.size() != 4) throw ConfigError(ef, "expected [r1, m1, r2, m2]");
        c.general.push_back({nums[0], nums[1], nums[2], nums[3]});
      }
    } else if (key == "inverse_n") {
      c.inverse_n = read_ints(value, field);
    } else if (key == "marchaud_deltas") {
      c.marchaud_deltas = read_numbers(value, field);
    } else if (key == "sobolev_n") {
      c.sobolev_n = read_ints(value, field);
    } else if (key == "marchaud_points") {
      c.marchaud_points = read_int(value, field);
    } else if (key == "grid") {
      if (!value.is_object()) throw ConfigError(field, "expected {rmax, n, kind}");
      for (const auto& [gk, gv] : value.items()) {
        const std::string gf = field + "." + gk;
        if (gk == "rmax") {
          c.grid.rmax = read_number(gv, gf);
        } else if (gk == "n") {
          c.grid.n = read_int(gv, gf);
        } else if (gk == "kind") {
          if (!gv.is_string()) throw ConfigError(gf, "expected a grid kind name");
          try {
            c.grid.kind = grid_kind_from_string(gv.get<std::string>());
          } catch (const std::exception& e) {
            throw ConfigError(gf, e.what());
          }
        } else {
          throw ConfigError(gf, "unknown field");
        }
      }
    }
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(line_column(json_text, e.byte == 0 ? 0 : e.byte - 1), what);
  }
  if (!root.is_object()) throw ConfigError("$", "configuration must be a JSON object");

  RunConfig config;
  json defaults = json::object();
  for (const auto& [key, value] : root.items()) {
    if (key == "output_path") {
      if (!value.is_string()) throw ConfigError("output_path", "expected a path");
      config.output_path = value.get<std::string>();
    } else if (key == "experiments") {
      if (!value.is_array()) throw ConfigError("experiments", "expected a list");
    } else if (key == "name" || key == "id") {
      throw ConfigError(key, "only allowed inside an experiments entry");
    } else if (experiment_keys().count(key)) {
      defaults[key] = value;
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  if (!root.contains("experiments")) throw ConfigError("experiments", "missing field");

  std::set<std::string> ids;
  const json& list = root.at("experiments");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "experiments[" + std::to_string(i) + "]";
    json entry = list[i];
    if (entry.is_string()) entry = json{{"name", entry.get<std::string>()}};
    if (!entry.is_object()) throw ConfigError(path, "expected an experiment name or object");
    const json& name_value = require(entry, "name", path);
    if (!name_value.is_string()) throw ConfigError(path + ".name", "expected an experiment name");
    const std::string name = name_value.get<std::string>();
    const auto kind = experiment_from_string(name);
    if (!kind) throw ConfigError(path + ".name", "unknown experiment '" + name + "'");

    ExperimentConfig c = ExperimentConfig::defaults_for(*kind);
    apply_fields(c, defaults, "$");
    apply_fields(c, entry, path);
    if (!ids.insert(c.id).second) throw ConfigError(path + ".id", "duplicate experiment id '" + c.id + "'");
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(path, e.what());
    }
    config.experiments.push_back(std::move(c));
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open configuration file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

// ---------------------------------------------------------------------------------------------
// Report assembly

namespace {

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : kInf;
}

class ReportBuilder {
 public:
  ReportBuilder(std::string id, Tolerances tol) {
    report_.id = std::move(id);
    report_.tolerances = tol;
  }

  const Tolerances& tolerances() const { return report_.tolerances; }

  /// Adds a row checked against [lo, hi]; `group` collects rows whose drift is compared.
  void add(std::string experiment, double lambda, LpIndex p, double m, double r, double scale, double lhs,
           double rhs, double lo, double hi, bool suspect, std::string group, bool two_sided,
           bool extra_ok = true) {
    ReportRow row;
    row.experiment = std::move(experiment);
    row.lambda = lambda;
    row.p = p;
    row.m = m;
    row.r = r;
    row.scale = scale;
    row.lhs = lhs;
    row.rhs = rhs;
    row.ratio = safe_ratio(lhs, rhs);
    row.pass = extra_ok && row.ratio >= lo && row.ratio <= hi;
    row.truncation_suspect = suspect;
    report_.rows.push_back(std::move(row));
    groups_.push_back(std::move(group));
    two_sided_.push_back(two_sided);
  }

  SmoothnessReport finish() && {
    ReportSummary& s = report_.summary;
    s.experiment = report_.id;
    s.min_ratio = kInf;
    s.max_ratio = 0.0;
    for (const auto& row : report_.rows) {
      if (std::isfinite(row.ratio)) {
        s.min_ratio = std::min(s.min_ratio, row.ratio);
        s.max_ratio = std::max(s.max_ratio, row.ratio);
      } else {
        s.max_ratio = kInf;
      }
      if (!row.pass) ++s.failed_rows;
      if (row.truncation_suspect) ++s.warnings;
    }
    if (report_.rows.empty()) s.min_ratio = 0.0;

    std::map<std::string, std::vector<std::size_t>> by_group;
    bool any_two_sided = false;
    for (std::size_t i = 0; i < report_.rows.size(); ++i) {
      by_group[groups_[i]].push_back(i);
      any_two_sided = any_two_sided || two_sided_[i];
    }
    s.drift_enforced = any_two_sided;
    s.drift = 1.0;
    for (const auto& [group, idx] : by_group) {
      if (any_two_sided && !two_sided_[idx.front()]) continue;
      s.drift = std::max(s.drift, group_drift(idx));
    }
    s.pass = s.failed_rows == 0 && (!s.drift_enforced || s.drift < report_.tolerances.drift);
    return std::move(report_);
  }

 private:
  // Largest ratio quotient between two rows of a group whose scales lie within two decades.
  double group_drift(const std::vector<std::size_t>& idx) const {
    double drift = 1.0;
    for (std::size_t a : idx) {
      for (std::size_t b : idx) {
        const ReportRow& x = report_.rows[a];
        const ReportRow& y = report_.rows[b];
        if (!(x.ratio > 0.0) || !(y.ratio > 0.0) || !std::isfinite(x.ratio) || !std::isfinite(y.ratio)) continue;
        const double span = std::max(x.scale, y.scale) / std::min(x.scale, y.scale);
        if (span > 100.0 * (1.0 + 1e-9)) continue;
        drift = std::max(drift, x.ratio / y.ratio);
      }
    }
    return drift;
  }

  SmoothnessReport report_;
  std::vector<std::string> groups_;
  std::vector<bool> two_sided_;
};

std::string group_key(std::initializer_list<std::string> parts) {
  std::string key;
  for (const auto& p : parts) key += p + "|";
  return key;
}

std::string num(double v) { return format_double(v); }
std::string num(LpIndex p) { return to_string(p); }

/// Spectrum of the named profile, or nullopt when it vanishes identically (degenerate-input guard).
std::optional<Spectrum> profile(const std::string& name, const RadialGrid& grid, double lambda, double sigma) {
  Spectrum s = make_test_spectrum(name, grid, lambda, sigma);
  const auto v = s.values();
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) return std::nullopt;
  return s;
}

Spectrum laplacian_or_identity(const Spectrum& s, double r) {
  return r > 0.0 ? frac_laplacian(s, r) : s;
}

Spectrum difference_or_identity(const Spectrum& s, double t, double m) {
  return m > 0.0 ? frac_difference(s, t, m) : s;
}

double lp_pow(double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); }

// Dedicated forms shared by the experiments and the specialization cross-check.
struct Pair {
  double lhs;
  double rhs;
};

Pair bernstein_pair(const Spectrum& f, double sigma, double r, LpIndex p) {
  const std::vector<Spectrum> parts{frac_laplacian(f, r), f};
  const auto n = spectral_norms(parts, p, f.grid());
  return {n[0], std::pow(sigma, r) * n[1]};
}

Pair nikolskii_pair(const Spectrum& f, double t, double m, LpIndex p) {
  const std::vector<Spectrum> parts{frac_laplacian(f, m), frac_difference(f, t, m)};
  const auto n = spectral_norms(parts, p, f.grid());
  return {std::pow(t, m) * n[0], n[1]};
}

Pair boas_pair(const Spectrum& f, double delta, double t, double m, LpIndex p) {
  const std::vector<Spectrum> parts{frac_difference(f, delta, m), frac_difference(f, t, m)};
  const auto n = spectral_norms(parts, p, f.grid());
  return {std::pow(delta, -m) * n[0], std::pow(t, -m) * n[1]};
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Experiments

SmoothnessReport verify_jackson(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const auto sigmas = cfg.scale_grid.values();
  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      const auto f = profile(name, grid, lambda, cfg.sigma);
      if (!f) continue;
      for (LpIndex p : cfg.p_values) {
        for (double m : cfg.m_values) {
          for (double r : cfg.r_values) {
            const Spectrum dr = laplacian_or_identity(*f, r);
            for (double sigma : sigmas) {
              const double e = best_approx(*f, sigma, p).error;
              const double w = modulus(dr, 1.0 / sigma, m, p).value;
              out.add("jackson/" + name, lambda, p, m, r, sigma, e, lp_pow(sigma, -r) * w, out.tolerances().lo,
                      out.tolerances().hi, f->truncation_suspect(),
                      group_key({name, num(lambda), num(p), num(m), num(r)}), false);
            }
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport verify_equivalence(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const auto deltas = cfg.scale_grid.values();
  const Tolerances& tol = cfg.tolerances;
  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      const auto f = profile(name, grid, lambda, cfg.sigma);
      if (!f) continue;
      for (LpIndex p : cfg.p_values) {
        for (double r : cfg.r_values) {
          const std::string g = group_key({name, num(lambda), num(p), num(r)});
          for (double delta : deltas) {
            const double k = k_functional_upper(*f, delta, r, p);
            const double w = modulus(*f, delta, r, p).value;
            const double d = difference_norm(*f, delta, r, p);
            const bool suspect = f->truncation_suspect();
            const std::string base = "equivalence/" + name + "/";
            out.add(base + "K:omega", lambda, p, r, r, delta, k, w, tol.lo, tol.hi, suspect, g + "K:omega", true);
            out.add(base + "omega:difference", lambda, p, r, r, delta, w, d, tol.lo, tol.hi, suspect,
                    g + "omega:difference", true);
            out.add(base + "K:difference", lambda, p, r, r, delta, k, d, tol.lo, tol.hi, suspect,
                    g + "K:difference", true);
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport verify_bernstein(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const auto sigmas = cfg.scale_grid.values();
  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      for (LpIndex p : cfg.p_values) {
        for (double r : cfg.r_values) {
          double lo = cfg.tolerances.lo;
          double hi = cfg.tolerances.hi;
          if (p.is_two()) {
            hi = kBernsteinL2Bound;
            if (name == "band_edge") lo = std::pow(0.9, r) - kSharpnessSlack;
          }
          for (double sigma : sigmas) {
            const auto f = profile(name, grid, lambda, sigma);
            if (!f) continue;
            const Pair pair = bernstein_pair(*f, sigma, r, p);
            out.add("bernstein/" + name, lambda, p, 0.0, r, sigma, pair.lhs, pair.rhs, lo, hi, false,
                    group_key({name, num(lambda), num(p), num(r)}), false);
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport verify_nikolskii_stechkin(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const auto ts = cfg.scale_grid.values();
  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      const auto f = profile(name, grid, lambda, cfg.sigma);
      if (!f) continue;
      for (LpIndex p : cfg.p_values) {
        for (double m : cfg.m_values) {
          for (double t : ts) {
            const Pair pair = nikolskii_pair(*f, t, m, p);
            out.add("nikolskii_stechkin/" + name, lambda, p, m, m, t, pair.lhs, pair.rhs, cfg.tolerances.lo,
                    cfg.tolerances.hi, false, group_key({name, num(lambda), num(p), num(m)}), false);
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport verify_boas(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const auto ts = cfg.scale_grid.values();
  const Tolerances& tol = cfg.tolerances;
  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      const auto f = profile(name, grid, lambda, cfg.sigma);
      if (!f) continue;
      for (LpIndex p : cfg.p_values) {
        for (double m : cfg.m_values) {
          std::vector<Spectrum> diffs;
          for (double t : ts) diffs.push_back(frac_difference(*f, t, m));
          const auto norms = spectral_norms(diffs, p, grid);
          for (std::size_t it = 0; it < ts.size(); ++it) {
            const double t = ts[it];
            const std::string id = "boas/" + name + "/t=" + short_number(t);
            for (std::size_t id_ = 0; id_ <= it; ++id_) {
              const double delta = ts[id_];
              out.add(id, lambda, p, m, 0.0, delta, std::pow(delta, -m) * norms[id_], std::pow(t, -m) * norms[it],
                      tol.lo, tol.hi, false, group_key({name, num(lambda), num(p), num(m), num(t)}), true);
            }
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport verify_general_entire(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const auto ts = cfg.scale_grid.values();
  const double sigma = cfg.sigma;
  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      const auto f = profile(name, grid, lambda, sigma);
      if (!f) continue;
      for (LpIndex p : cfg.p_values) {
        for (const auto& c : cfg.general) {
          const double r1 = c[0], m1 = c[1], r2 = c[2], m2 = c[3];
          const double rho = r1 + m1 - r2 - m2;
          const Spectrum d1 = laplacian_or_identity(*f, r1);
          const Spectrum d2 = laplacian_or_identity(*f, r2);
          std::vector<Spectrum> left;
          std::vector<Spectrum> right;
          for (double t : ts) {
            left.push_back(difference_or_identity(d1, t, m1));
            right.push_back(difference_or_identity(d2, t, m2));
          }
          const auto ln = spectral_norms(left, p, grid);
          const auto rn = spectral_norms(right, p, grid);
          const std::string case_id = "r1=" + short_number(r1) + ":m1=" + short_number(m1) +
                                      ":r2=" + short_number(r2) + ":m2=" + short_number(m2);
          for (std::size_t it = 0; it < ts.size(); ++it) {
            const double t = ts[it];
            const double rhs = lp_pow(sigma, rho) * lp_pow(t, -m2) * rn[it];
            for (std::size_t id = 0; id <= it; ++id) {
              const double delta = ts[id];
              const double lhs = lp_pow(delta, -m1) * ln[id];
              const double ratio = safe_ratio(lhs, rhs);

              std::optional<Pair> special;
              if (m1 == 0.0 && r2 == 0.0 && m2 == 0.0 && r1 > 0.0) {
                special = bernstein_pair(*f, sigma, r1, p);
              } else if (m1 == 0.0 && r2 == 0.0 && m2 > 0.0 && r1 == m2) {
                special = nikolskii_pair(*f, t, m2, p);
              } else if (r1 == 0.0 && r2 == 0.0 && m1 > 0.0 && m1 == m2) {
                special = boas_pair(*f, delta, t, m1, p);
              }
              bool consistent = true;
              if (special) {
                const double expect = safe_ratio(special->lhs, special->rhs);
                consistent = std::abs(ratio - expect) <= kSpecializationTol * std::max(1.0, std::abs(expect));
              }
              out.add("general_entire/" + name + "/" + case_id + "/t=" + short_number(t), lambda, p, m1, r1, delta,
                      lhs, rhs, cfg.tolerances.lo, cfg.tolerances.hi, false,
                      group_key({name, num(lambda), num(p), case_id, num(t)}), false, consistent);
            }
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport verify_realization(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const auto ts = cfg.scale_grid.values();
  const Tolerances& tol = cfg.tolerances;
  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      const auto f = profile(name, grid, lambda, cfg.sigma);
      if (!f) continue;
      for (LpIndex p : cfg.p_values) {
        for (double r : cfg.r_values) {
          const std::string g = group_key({name, num(lambda), num(p), num(r)});
          for (double t : ts) {
            const double big_r = realization_infimum(*f, t, r, p);
            const double r_star = realization(*f, t, r, p).value;
            const double k = k_functional_upper(*f, t, r, p);
            const double w = modulus(*f, t, r, p).value;
            const bool suspect = f->truncation_suspect();
            const std::string base = "realization/" + name + "/";
            const std::pair<const char*, Pair> pairs[] = {
                {"R:Rstar", {big_r, r_star}}, {"K:R", {k, big_r}},        {"K:Rstar", {k, r_star}},
                {"R:omega", {big_r, w}},      {"Rstar:omega", {r_star, w}}, {"K:omega", {k, w}},
            };
            for (const auto& [label, pair] : pairs) {
              out.add(base + label, lambda, p, r, r, t, pair.lhs, pair.rhs, tol.lo, tol.hi, suspect, g + label, true);
            }
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport verify_inverse(const ExperimentConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = make_grid(cfg.grid);
  ReportBuilder out(cfg.id, cfg.tolerances);
  const Tolerances& tol = cfg.tolerances;
  int n_needed = 0;
  for (int n : cfg.inverse_n) n_needed = std::max(n_needed, n);
  for (int n : cfg.sobolev_n) n_needed = std::max(n_needed, n);

  for (const auto& name : cfg.test_functions) {
    for (double lambda : cfg.lambda_values) {
      const auto f = profile(name, grid, lambda, cfg.sigma);
      if (!f) continue;
      for (LpIndex p : cfg.p_values) {
        // E_j up to the first index past n_needed where the sequence drops below the tail threshold.
        const auto e_all = best_approx_sequence(*f, kTailCap, p);
        std::map<int, double> e_values;
        bool tail_resolved = false;
        for (int j = 0; j <= kTailCap; ++j) {
          e_values[j] = e_all[static_cast<std::size_t>(j)];
          if (j > n_needed && e_all[static_cast<std::size_t>(j)] < kTailThreshold) {
            tail_resolved = true;
            break;
          }
        }
        const bool suspect = f->truncation_suspect();
        for (double m : cfg.m_values) {
          const std::string g = group_key({name, num(lambda), num(p), num(m)});
          for (int n : cfg.inverse_n) {
            const double w = modulus(*f, 1.0 / n, m, p).value;
            out.add("inverse/" + name + "/omega:bound", lambda, p, m, 0.0, n, w, inverse_bound(e_values, n, m), tol.lo,
                    tol.hi, suspect, g + "omega:bound", false);
          }
          for (double delta : cfg.marchaud_deltas) {
            const auto t_grid = log_grid(delta, 1.0, cfg.marchaud_points);
            const double k = k_functional_upper(*f, delta, m, p);
            out.add("inverse/" + name + "/K:marchaud", lambda, p, m, 0.0, delta, k,
                    marchaud_bound(*f, delta, m, p, t_grid), tol.lo, tol.hi, suspect, g + "K:marchaud", false);
          }
          for (double r : cfg.r_values) {
            if (r == 0.0) continue;
            const Spectrum dr = frac_laplacian(*f, r);
            for (int n : cfg.sobolev_n) {
              const double k = k_functional_upper(dr, 1.0 / n, m, p);
              out.add("inverse/" + name + "/K:sobolev", lambda, p, m, r, n, k,
                      sobolev_inverse_bound(e_values, n, m, r), tol.lo, tol.hi, suspect || !tail_resolved,
                      g + "K:sobolev" + num(r), false);
            }
          }
        }
      }
    }
  }
  return std::move(out).finish();
}

SmoothnessReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::Jackson: return verify_jackson(cfg);
    case Experiment::Equivalence: return verify_equivalence(cfg);
    case Experiment::Bernstein: return verify_bernstein(cfg);
    case Experiment::NikolskiiStechkin: return verify_nikolskii_stechkin(cfg);
    case Experiment::Boas: return verify_boas(cfg);
    case Experiment::GeneralEntire: return verify_general_entire(cfg);
    case Experiment::Realization: return verify_realization(cfg);
    case Experiment::Inverse: return verify_inverse(cfg);
  }
  throw std::logic_error("run_experiment: unhandled experiment");
}

// ---------------------------------------------------------------------------------------------
// Output

void write_report_csv(std::ostream& out, const SmoothnessReport& report) {
  out << "experiment,lambda,p,m,r,scale,lhs,rhs,ratio,pass\n";
  for (const auto& row : report.rows) {
    out << row.experiment << ',' << format_double(row.lambda) << ',' << to_string(row.p) << ','
        << format_double(row.m) << ',' << format_double(row.r) << ',' << format_double(row.scale) << ','
        << format_double(row.lhs) << ',' << format_double(row.rhs) << ',' << format_double(row.ratio) << ','
        << (row.pass ? "true" : "false") << '\n';
  }
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_report_summary(std::ostream& out, const SmoothnessReport& report) {
  const ReportSummary& s = report.summary;
  json j;
  j["experiment"] = s.experiment;
  j["min_ratio"] = finite_or_null(s.min_ratio);
  j["max_ratio"] = finite_or_null(s.max_ratio);
  j["drift"] = finite_or_null(s.drift);
  j["verdict"] = s.pass ? "pass" : "fail";
  j["drift_enforced"] = s.drift_enforced;
  j["rows"] = report.rows.size();
  j["failed_rows"] = s.failed_rows;
  j["warnings"] = s.warnings;
  j["window"] = {{"lo", report.tolerances.lo}, {"hi", report.tolerances.hi}, {"drift", report.tolerances.drift}};
  out << j.dump(2) << '\n';
}

RunOutcome run_all(const RunConfig& config) {
  RunOutcome outcome;
  if (config.experiments.empty()) return outcome;

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1) {
    for (const auto& e : config.experiments) outcome.reports.push_back(run_experiment(e));
  } else {
    std::vector<std::future<SmoothnessReport>> jobs;
    for (const auto& e : config.experiments) {
      jobs.push_back(std::async(std::launch::async, [&e] { return run_experiment(e); }));
    }
    for (auto& job : jobs) outcome.reports.push_back(job.get());
  }

  std::filesystem::create_directories(config.output_path);
  for (const auto& report : outcome.reports) {
    const auto csv_path = config.output_path / (report.id + ".csv");
    const auto json_path = config.output_path / (report.id + ".json");
    {
      std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
      write_report_csv(csv, report);
      if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    }
    {
      std::ofstream js(json_path, std::ios::binary | std::ios::trunc);
      write_report_summary(js, report);
      if (!js) throw std::runtime_error("cannot write " + json_path.string());
    }
    outcome.files.push_back(csv_path);
    outcome.files.push_back(json_path);
    outcome.all_pass = outcome.all_pass && report.summary.pass;
  }
  return outcome;
}

RunOutcome run_all(const std::filesystem::path& config_path) {
  return run_all(load_run_config(config_path));
}

}  // namespace dunkl
