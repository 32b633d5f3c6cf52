#include "dunkl/quad.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dunkl/weights.hpp"

namespace dunkl {

namespace {

constexpr int kPanelOrder = 16;

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1], increasing
  std::vector<double> w;
};

Rule gauss_legendre_rule(int q) {
  Rule rule;
  rule.x.resize(static_cast<std::size_t>(q));
  rule.w.resize(static_cast<std::size_t>(q));
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (q == 1) p0 = 1.0;
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // one more derivative evaluation at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(q - 1 - i);
    rule.x[lo] = -x;
    rule.x[hi] = x;
    rule.w[lo] = w;
    rule.w[hi] = w;
  }
  if (q % 2 == 1) rule.x[static_cast<std::size_t>(q / 2)] = 0.0;
  return rule;
}

// Fejer's first rule: open Chebyshev nodes, Clenshaw-Curtis-type weights.
Rule fejer_rule(int q) {
  Rule rule;
  for (int k = q; k >= 1; --k) {
    const double theta = (2.0 * k - 1.0) * std::numbers::pi / (2.0 * q);
    double s = 0.0;
    for (int j = 1; j <= q / 2; ++j) {
      s += std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
    }
    rule.x.push_back(std::cos(theta));
    rule.w.push_back(2.0 / q * (1.0 - 2.0 * s));
  }
  return rule;
}

const Rule& cached_rule(GridKind kind, int q) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, Rule> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(static_cast<int>(kind), q);
  auto it = cache.find(key);
  if (it == cache.end()) {
    Rule r = kind == GridKind::GaussLegendreComposite ? gauss_legendre_rule(q) : fejer_rule(q);
    it = cache.emplace(key, std::move(r)).first;
  }
  return it->second;
}

}  // namespace

const char* to_string(GridKind kind) {
  switch (kind) {
    case GridKind::GaussLegendreComposite: return "gauss-legendre-composite";
    case GridKind::ClenshawCurtis: return "clenshaw-curtis";
  }
  return "unknown";
}

GridKind grid_kind_from_string(const std::string& name) {
  if (name == "gauss-legendre-composite" || name == "gauss") return GridKind::GaussLegendreComposite;
  if (name == "clenshaw-curtis") return GridKind::ClenshawCurtis;
  throw std::invalid_argument("unknown grid kind '" + name + "'");
}

RadialGrid make_grid(double rmax, int n, GridKind kind) {
  if (!(rmax > 0.0) || !std::isfinite(rmax)) {
    throw std::invalid_argument("make_grid: rmax must be positive");
  }
  if (n < 16) throw std::invalid_argument("make_grid: at least 16 nodes are required");

  const int panels = n / kPanelOrder;
  const int extra = n % kPanelOrder;

  int geometric = 0;
  double a = rmax;
  if (panels >= 3) {
    geometric = std::clamp(panels / 8, 1, 20);
    a = std::min(1.0, rmax / 4.0);
  } else {
    geometric = panels;
  }

  std::vector<double> edges{0.0};
  if (panels >= 3) {
    for (int j = geometric - 1; j >= 0; --j) edges.push_back(a * std::ldexp(1.0, -j));
    const int uniform = panels - geometric;
    for (int i = 1; i <= uniform; ++i) {
      edges.push_back(i == uniform ? rmax : a + (rmax - a) * i / uniform);
    }
  } else {
    for (int i = 1; i <= panels; ++i) edges.push_back(rmax * i / panels);
  }

  auto data = std::make_shared<RadialGrid::Data>();
  data->spec = {rmax, n, kind};
  data->geometric_panels = panels >= 3 ? geometric : 0;
  data->nodes.reserve(static_cast<std::size_t>(n));
  data->weights.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < panels; ++p) {
    const int q = kPanelOrder + (p < extra ? 1 : 0);
    const Rule& rule = cached_rule(kind, q);
    const double lo = edges[static_cast<std::size_t>(p)];
    const double hi = edges[static_cast<std::size_t>(p) + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      data->nodes.push_back(mid + half * rule.x[i]);
      data->weights.push_back(half * rule.w[i]);
    }
  }
  return RadialGrid(std::move(data));
}

RadialFunction::RadialFunction(RadialGrid g, std::vector<double> v, std::string name)
    : grid(std::move(g)), values(std::move(v)), label(std::move(name)) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("RadialFunction: value count does not match the grid");
  }
}

LpIndex::LpIndex(double p) : p_(p) {
  if (!(p >= 1.0)) throw std::invalid_argument("LpIndex: p must be >= 1");
}

std::string to_string(LpIndex p) {
  if (p.is_infinity()) return "inf";
  return format_double(p.value());
}

LpIndex parse_lp_index(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return LpIndex::infinity();
  std::size_t used = 0;
  const double p = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("invalid norm index '" + text + "'");
  return LpIndex(p);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::vector<double> nu_weights(const RadialGrid& grid, double lambda) {
  const double b = measure_constants(lambda).b_lambda;
  const double power = 2.0 * lambda + 1.0;
  const auto t = grid.nodes();
  const auto w = grid.weights();
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = b * w[i] * std::pow(t[i], power);
  return out;
}

NuIntegral integrate_nu(std::span<const double> values, const RadialGrid& grid, double lambda) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrate_nu: size mismatch");
  const auto nu = nu_weights(grid, lambda);
  const auto t = grid.nodes();
  std::vector<double> terms(values.size());
  std::vector<double> abs_terms(values.size());
  std::vector<double> tail_terms;
  const double tail_start = 0.9 * grid.rmax();
  for (std::size_t i = 0; i < values.size(); ++i) {
    terms[i] = nu[i] * values[i];
    abs_terms[i] = std::abs(terms[i]);
    if (t[i] >= tail_start) tail_terms.push_back(abs_terms[i]);
  }
  NuIntegral result;
  result.value = pairwise_sum(terms);
  const double mass = pairwise_sum(abs_terms);
  result.truncation_suspect = mass > 0.0 && pairwise_sum(tail_terms) > 1e-8 * mass;
  return result;
}

double lp_norm(std::span<const double> values, const RadialGrid& grid, LpIndex p, double lambda) {
  if (values.size() != grid.size()) throw std::invalid_argument("lp_norm: size mismatch");
  if (p.is_infinity()) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const auto nu = nu_weights(grid, lambda);
  std::vector<double> terms(values.size());
  const double pv = p.value();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    terms[i] = nu[i] * (pv == 1.0 ? a : pv == 2.0 ? a * a : std::pow(a, pv));
  }
  const double s = pairwise_sum(terms);
  if (pv == 1.0) return s;
  if (pv == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / pv);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_radial_csv(std::ostream& out, const RadialFunction& f, double lambda) {
  out << "# lambda=" << format_double(lambda) << " rmax=" << format_double(f.grid.rmax())
      << " n=" << f.grid.size();
  if (f.grid.spec().kind != GridKind::GaussLegendreComposite) {
    out << " kind=" << to_string(f.grid.spec().kind);
  }
  out << '\n';
  const auto t = f.grid.nodes();
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << format_double(t[i]) << ',' << format_double(f.values[i]) << '\n';
  }
}

namespace {

std::map<std::string, std::string> parse_header(const std::string& line) {
  if (line.empty() || line[0] != '#') throw std::runtime_error("csv: missing '#' header line");
  std::map<std::string, std::string> fields;
  std::istringstream ss(line.substr(1));
  std::string token;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::runtime_error("csv: malformed header field '" + token + "'");
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return fields;
}

}  // namespace

RadialCsv read_radial_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  const auto header = parse_header(line);
  for (const char* key : {"lambda", "rmax", "n"}) {
    if (!header.contains(key)) throw std::runtime_error(std::string("csv: header lacks '") + key + "'");
  }
  const double lambda = std::stod(header.at("lambda"));
  const double rmax = std::stod(header.at("rmax"));
  const int n = std::stoi(header.at("n"));
  const GridKind kind =
      header.contains("kind") ? grid_kind_from_string(header.at("kind")) : GridKind::GaussLegendreComposite;

  std::vector<double> nodes;
  std::vector<double> values;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) + " has no comma");
    }
    try {
      nodes.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) + " is not numeric");
    }
  }
  if (static_cast<int>(nodes.size()) != n) {
    throw std::runtime_error("csv: header announces " + std::to_string(n) + " rows, found " +
                             std::to_string(nodes.size()));
  }
  RadialGrid grid = make_grid(rmax, n, kind);
  const auto expected = grid.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(nodes[i] - expected[i]) > 1e-12 * std::max(1.0, expected[i])) {
      throw std::runtime_error("csv: node " + std::to_string(i) + " does not match the " +
                               to_string(kind) + " grid for rmax=" + header.at("rmax") +
                               " n=" + header.at("n"));
    }
  }
  return {RadialFunction(std::move(grid), std::move(values)), lambda};
}

}  // namespace dunkl
