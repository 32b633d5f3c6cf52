#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dunkl/quad.hpp"
#include "dunkl/transforms.hpp"
#include "dunkl/weights.hpp"

namespace dunkl {

/// L^p norm of the function whose spectrum is `s`, measured on `physical_grid`.
/// For p = 2 Parseval is used and the norm is taken on the spectrum itself.
double spectral_norm(const Spectrum& s, LpIndex p, const RadialGrid& physical_grid);
inline double spectral_norm(const Spectrum& s, LpIndex p) { return spectral_norm(s, p, s.grid()); }

/// Batched spectral_norm for spectra sharing grid and index.
std::vector<double> spectral_norms(std::span<const Spectrum> spectra, LpIndex p,
                                   const RadialGrid& physical_grid);

/// One evaluation point of a smoothness functional.
struct SmoothnessQuery {
  double lambda = 0.0;
  LpIndex p = 2.0;
  double m = 1.0;      // difference order
  double r = 0.0;      // Laplacian half-power
  double scale = 1.0;  // delta, t, sigma or n depending on the functional

  void validate() const;
};

/// ||Delta_t^m f||_p.
double difference_norm(const Spectrum& fhat, double t, double m, LpIndex p);

struct ModulusResult {
  double value = 0.0;
  double t_at_max = 0.0;
};

/// Geometric sampling {delta 2^{-j/4}}_{j=0..24} used for the supremum over t in (0, delta].
std::vector<double> modulus_t_grid(double delta);

/// omega_m(delta, f)_p approximated by the maximum over modulus_t_grid(delta); a lower bound
/// of the true supremum.
ModulusResult modulus(const Spectrum& fhat, double delta, double m, LpIndex p);
ModulusResult modulus(const RadialFunction& f, double delta, double m, LpIndex p,
                      const WeightParams& params);

struct BestApproximation {
  double error = 0.0;
  Spectrum g_star;
  /// True when g_star is the de la Vallee Poussin near-best approximant and `error` an upper bound.
  bool near_best = false;
};

/// E_sigma(f)_p. p = 2: orthogonal truncation at sigma (exact). Otherwise P_{sigma/2} f,
/// which is bandlimited to sigma.
BestApproximation best_approx(const Spectrum& fhat, double sigma, LpIndex p);
BestApproximation best_approx(const RadialFunction& f, double sigma, LpIndex p,
                              const WeightParams& params);

/// E_0, ..., E_jmax with E_0 = ||f||_p and E_j taken at sigma = j.
std::vector<double> best_approx_sequence(const Spectrum& fhat, int jmax, LpIndex p);

struct RealizationResult {
  double value = 0.0;            // approx_error + derivative_term
  double approx_error = 0.0;     // ||f - g*||_p
  double derivative_term = 0.0;  // t^r ||(-Delta)^{r/2} g*||_p
  double sigma_used = 0.0;
};

/// R*_r(t, f) with g* = best_approx(f, 1/t, p).g_star.
RealizationResult realization(const Spectrum& fhat, double t, double r, LpIndex p);
RealizationResult realization(const RadialFunction& f, double t, double r, LpIndex p,
                              const WeightParams& params);

/// R_r(t, f): minimum of the K-objective over bandlimited candidates of type 1/t
/// (P_s f with 2s <= 1/t, sharp truncations for p = 2, and g = 0). An upper bound of the infimum.
double realization_infimum(const Spectrum& fhat, double t, double r, LpIndex p);

/// Upper bound on K_r(t, f)_p: the K-objective minimized over g in
/// {0, f} U {P_sigma f : sigma in [1/(4t), 4/t]} U {truncations at the same sigma when p = 2}.
double k_functional_upper(const Spectrum& fhat, double t, double r, LpIndex p);
double k_functional_upper(const RadialFunction& f, double t, double r, LpIndex p,
                          const WeightParams& params);

/// n^{-m} sum_{j=0}^{n} (j+1)^{m-1} E_j. Every index 0..n must be present.
double inverse_bound(const std::map<int, double>& e_values, int n, double m);

/// n^{-r} sum_{j=0}^{n} (j+1)^{m+r-1} E_j + sum_{j>n} j^{r-1} E_j, the tail running over the
/// indices present in e_values.
double sobolev_inverse_bound(const std::map<int, double>& e_values, int n, double m, double r);

/// delta^m (||f||_p + int_delta^1 t^{-m} K_{m+1}(t, f) dt / t), with K_{m+1} replaced by the
/// realization R*_{m+1} and the integral done by the trapezoid rule in log t over t_grid
/// (sorted, from delta to 1).
double marchaud_bound(const Spectrum& fhat, double delta, double m, LpIndex p,
                      std::span<const double> t_grid);
double marchaud_bound(const RadialFunction& f, double delta, double m, LpIndex p,
                      const WeightParams& params, std::span<const double> t_grid);

/// Log-spaced points from delta to 1 inclusive.
std::vector<double> log_grid(double from, double to, int points);

}  // namespace dunkl
