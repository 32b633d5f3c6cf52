#include "dunkl/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dunkl/operators.hpp"

namespace dunkl {

double spectral_norm(const Spectrum& s, LpIndex p, const RadialGrid& physical_grid) {
  if (p.is_two()) return lp_norm(s.values(), s.grid(), p, s.lambda());
  const RadialFunction f = inverse_hankel(s, physical_grid);
  return lp_norm(f, p, s.lambda());
}

std::vector<double> spectral_norms(std::span<const Spectrum> spectra, LpIndex p,
                                   const RadialGrid& physical_grid) {
  std::vector<double> out;
  out.reserve(spectra.size());
  if (spectra.empty()) return out;
  if (p.is_two()) {
    for (const auto& s : spectra) out.push_back(lp_norm(s.values(), s.grid(), p, s.lambda()));
    return out;
  }
  const Eigen::MatrixXd physical = inverse_hankel_many(spectra, physical_grid);
  const double lambda = spectra.front().lambda();
  for (Eigen::Index c = 0; c < physical.cols(); ++c) {
    const auto col = physical.col(c);
    out.push_back(lp_norm(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
                          physical_grid, p, lambda));
  }
  return out;
}

void SmoothnessQuery::validate() const {
  if (!(lambda > -0.5)) throw std::invalid_argument("SmoothnessQuery: lambda must exceed -1/2");
  if (!(m > 0.0)) throw std::invalid_argument("SmoothnessQuery: m must be positive");
  if (!(r >= 0.0)) throw std::invalid_argument("SmoothnessQuery: r must be nonnegative");
  if (!(scale > 0.0)) throw std::invalid_argument("SmoothnessQuery: scale must be positive");
}

double difference_norm(const Spectrum& fhat, double t, double m, LpIndex p) {
  return spectral_norm(frac_difference(fhat, t, m), p);
}

std::vector<double> modulus_t_grid(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("modulus: delta must be positive");
  std::vector<double> t;
  t.reserve(25);
  for (int j = 0; j <= 24; ++j) t.push_back(delta * std::exp2(-0.25 * j));
  return t;
}

ModulusResult modulus(const Spectrum& fhat, double delta, double m, LpIndex p) {
  const auto ts = modulus_t_grid(delta);
  std::vector<Spectrum> diffs;
  diffs.reserve(ts.size());
  for (double t : ts) diffs.push_back(frac_difference(fhat, t, m));
  const auto norms = spectral_norms(diffs, p, fhat.grid());
  ModulusResult result;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (norms[i] > result.value) {
      result.value = norms[i];
      result.t_at_max = ts[i];
    }
  }
  if (result.t_at_max == 0.0) result.t_at_max = delta;
  return result;
}

ModulusResult modulus(const RadialFunction& f, double delta, double m, LpIndex p,
                      const WeightParams& params) {
  return modulus(hankel(f, params.lambda_k()), delta, m, p);
}

BestApproximation best_approx(const Spectrum& fhat, double sigma, LpIndex p) {
  if (!(sigma > 0.0)) throw std::invalid_argument("best_approx: sigma must be positive");
  if (p.is_two()) {
    Spectrum g = bandlimit_project(fhat, sigma);
    const double e = spectral_norm(fhat - g, p);
    return {e, std::move(g), false};
  }
  Spectrum g = vallee_poussin(fhat, 0.5 * sigma);
  const double e = spectral_norm(fhat - g, p);
  return {e, std::move(g), true};
}

BestApproximation best_approx(const RadialFunction& f, double sigma, LpIndex p,
                              const WeightParams& params) {
  return best_approx(hankel(f, params.lambda_k()), sigma, p);
}

std::vector<double> best_approx_sequence(const Spectrum& fhat, int jmax, LpIndex p) {
  if (jmax < 0) throw std::invalid_argument("best_approx_sequence: jmax must be nonnegative");
  std::vector<Spectrum> residuals;
  residuals.reserve(static_cast<std::size_t>(jmax) + 1);
  residuals.push_back(fhat);
  for (int j = 1; j <= jmax; ++j) {
    const double sigma = j;
    residuals.push_back(fhat - (p.is_two() ? bandlimit_project(fhat, sigma)
                                           : vallee_poussin(fhat, 0.5 * sigma)));
  }
  return spectral_norms(residuals, p, fhat.grid());
}

namespace {

struct Candidate {
  Spectrum residual;    // f - g
  Spectrum derivative;  // (-Delta)^{r/2} g
};

// min over candidates of ||f - g||_p + t^r ||(-Delta)^{r/2} g||_p
double minimize_objective(const std::vector<Candidate>& candidates, double t, double r, LpIndex p,
                          const RadialGrid& grid, double floor_value) {
  std::vector<Spectrum> all;
  all.reserve(2 * candidates.size());
  for (const auto& c : candidates) all.push_back(c.residual);
  for (const auto& c : candidates) all.push_back(c.derivative);
  const auto norms = spectral_norms(all, p, grid);
  const double tr = std::pow(t, r);
  double best = floor_value;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    best = std::min(best, norms[i] + tr * norms[i + candidates.size()]);
  }
  return best;
}

}  // namespace

RealizationResult realization(const Spectrum& fhat, double t, double r, LpIndex p) {
  if (!(t > 0.0)) throw std::invalid_argument("realization: t must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("realization: r must be positive");
  const double sigma = 1.0 / t;
  const BestApproximation best = best_approx(fhat, sigma, p);
  const Spectrum derivative = frac_laplacian(best.g_star, r);
  const std::vector<Spectrum> parts{fhat - best.g_star, derivative};
  const auto norms = spectral_norms(parts, p, fhat.grid());
  RealizationResult out;
  out.approx_error = norms[0];
  out.derivative_term = std::pow(t, r) * norms[1];
  out.value = out.approx_error + out.derivative_term;
  out.sigma_used = sigma;
  return out;
}

RealizationResult realization(const RadialFunction& f, double t, double r, LpIndex p,
                              const WeightParams& params) {
  return realization(hankel(f, params.lambda_k()), t, r, p);
}

double realization_infimum(const Spectrum& fhat, double t, double r, LpIndex p) {
  if (!(t > 0.0)) throw std::invalid_argument("realization_infimum: t must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("realization_infimum: r must be positive");
  std::vector<Candidate> candidates;
  for (int i = 0; i <= 6; ++i) {
    const double s = std::exp2(-0.5 * i) * 0.5 / t;  // P_s f has bandlimit 2s <= 1/t
    const Spectrum g = vallee_poussin(fhat, s);
    candidates.push_back({fhat - g, frac_laplacian(g, r)});
    if (p.is_two()) {
      const Spectrum h = bandlimit_project(fhat, 2.0 * s);
      candidates.push_back({fhat - h, frac_laplacian(h, r)});
    }
  }
  const double zero_candidate = spectral_norm(fhat, p);
  return minimize_objective(candidates, t, r, p, fhat.grid(), zero_candidate);
}

double k_functional_upper(const Spectrum& fhat, double t, double r, LpIndex p) {
  if (!(t > 0.0)) throw std::invalid_argument("k_functional_upper: t must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("k_functional_upper: r must be positive");
  std::vector<Candidate> candidates;
  for (int i = 0; i <= 8; ++i) {
    const double sigma = std::exp2(0.5 * i) / (4.0 * t);
    const Spectrum g = vallee_poussin(fhat, sigma);
    candidates.push_back({fhat - g, frac_laplacian(g, r)});
    if (p.is_two()) {
      const Spectrum h = bandlimit_project(fhat, sigma);
      candidates.push_back({fhat - h, frac_laplacian(h, r)});
    }
  }
  // g = f: the residual is identically zero
  const Spectrum zero = fhat.scaled(0.0);
  candidates.push_back({zero, frac_laplacian(fhat, r)});
  const double zero_candidate = spectral_norm(fhat, p);
  return minimize_objective(candidates, t, r, p, fhat.grid(), zero_candidate);
}

double k_functional_upper(const RadialFunction& f, double t, double r, LpIndex p,
                          const WeightParams& params) {
  return k_functional_upper(hankel(f, params.lambda_k()), t, r, p);
}

namespace {

double lookup(const std::map<int, double>& e_values, int j) {
  const auto it = e_values.find(j);
  if (it == e_values.end()) {
    throw std::invalid_argument("inverse bound: missing E_" + std::to_string(j));
  }
  return it->second;
}

}  // namespace

double inverse_bound(const std::map<int, double>& e_values, int n, double m) {
  if (n < 1) throw std::invalid_argument("inverse_bound: n must be positive");
  if (!(m > 0.0)) throw std::invalid_argument("inverse_bound: m must be positive");
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) sum += std::pow(j + 1.0, m - 1.0) * lookup(e_values, j);
  return std::pow(static_cast<double>(n), -m) * sum;
}

double sobolev_inverse_bound(const std::map<int, double>& e_values, int n, double m, double r) {
  if (n < 1) throw std::invalid_argument("sobolev_inverse_bound: n must be positive");
  if (!(m > 0.0) || !(r > 0.0)) throw std::invalid_argument("sobolev_inverse_bound: m, r must be positive");
  double head = 0.0;
  for (int j = 0; j <= n; ++j) head += std::pow(j + 1.0, m + r - 1.0) * lookup(e_values, j);
  double tail = 0.0;
  for (auto it = e_values.upper_bound(n); it != e_values.end(); ++it) {
    tail += std::pow(static_cast<double>(it->first), r - 1.0) * it->second;
  }
  return std::pow(static_cast<double>(n), -r) * head + tail;
}

std::vector<double> log_grid(double from, double to, int points) {
  if (!(from > 0.0) || !(to >= from) || points < 2) {
    throw std::invalid_argument("log_grid: need 0 < from <= to and at least two points");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log(from);
  const double b = std::log(to);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  out.front() = from;
  out.back() = to;
  return out;
}

double marchaud_bound(const Spectrum& fhat, double delta, double m, LpIndex p,
                      std::span<const double> t_grid) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("marchaud_bound: need 0 < delta < 1");
  if (!(m > 0.0)) throw std::invalid_argument("marchaud_bound: m must be positive");
  if (t_grid.size() < 2 || t_grid.front() != delta || t_grid.back() != 1.0 ||
      !std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw std::invalid_argument("marchaud_bound: t_grid must run from delta to 1");
  }
  const double norm = spectral_norm(fhat, p);
  std::vector<double> integrand(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    integrand[i] = std::pow(t, -m) * realization(fhat, t, m + 1.0, p).value;
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double h = std::log(t_grid[i]) - std::log(t_grid[i - 1]);
    integral += 0.5 * h * (integrand[i] + integrand[i - 1]);
  }
  return std::pow(delta, m) * (norm + integral);
}

double marchaud_bound(const RadialFunction& f, double delta, double m, LpIndex p,
                      const WeightParams& params, std::span<const double> t_grid) {
  return marchaud_bound(hankel(f, params.lambda_k()), delta, m, p, t_grid);
}

}  // namespace dunkl
