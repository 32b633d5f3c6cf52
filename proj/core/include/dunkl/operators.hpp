#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dunkl/quad.hpp"
#include "dunkl/transforms.hpp"

namespace dunkl {

/// A radial spectral multiplier: F(Af)(y) = symbol(|y|) F(f)(y).
///
/// Symbols that blow up at the origin are admissible because grids never contain r = 0.
struct Multiplier {
  std::function<double(double)> symbol;
  std::string label;
  bool singular_at_zero = false;
  /// The symbol vanishes for r >= support_radius, when set.
  std::optional<double> support_radius;
};

Spectrum apply_multiplier(const Spectrum& s, const Multiplier& m);

enum class EtaTransition { ExpBump };

/// Smooth radial cutoff: 1 on [0, 1], positive on [0, 2), 0 on [2, inf).
class CutoffEta {
 public:
  explicit CutoffEta(EtaTransition transition = EtaTransition::ExpBump) : transition_(transition) {}
  double operator()(double t) const;
  EtaTransition transition() const noexcept { return transition_; }

 private:
  EtaTransition transition_;
};

/// eta(t) = h(2 - t) / (h(2 - t) + h(t - 1)) on (1, 2) with h(u) = exp(-1/u).
inline CutoffEta make_eta(EtaTransition transition = EtaTransition::ExpBump) {
  return CutoffEta(transition);
}

Multiplier translation_multiplier(double lambda, double t);
Multiplier laplacian_power_multiplier(double r);
Multiplier difference_multiplier(double lambda, double t, double m);
Multiplier vallee_poussin_multiplier(double sigma, const CutoffEta& eta);

/// Generalized translation T^t: symbol j_lambda(t r). Preserves the bandlimit.
Spectrum translate_T(const Spectrum& s, double t);

/// (-Delta_k)^{r/2}: symbol r^{half_power}.
Spectrum frac_laplacian(const Spectrum& s, double half_power);

/// Fractional difference Delta_t^m = (I - T^t)^{m/2}: symbol (1 - j_lambda(t r))^{m/2}.
Spectrum frac_difference(const Spectrum& s, double t, double m);

/// Generalized convolution: pointwise product of spectra on a common grid and index.
Spectrum convolve(const Spectrum& f, const Spectrum& g);

/// de la Vallee Poussin operator P_sigma: symbol eta(r / sigma); the result has bandlimit 2 sigma.
Spectrum vallee_poussin(const Spectrum& s, double sigma, const CutoffEta& eta = make_eta());

/// freq^{-r} (1 - j_lambda(t freq))^{m/2}, the transform of the kernel g^t_{m,r}; requires m >= r.
double grm_symbol(double lambda, double m, double r, double t, double freq);

struct SeriesDifference {
  RadialFunction value;
  /// Sup-norm bound for the truncated binomial tail plus a floating-point allowance.
  double certificate;
};

/// Physical-space evaluation of sum_{s=0}^{N} (-1)^s binom(m/2, s) (T^t)^s f.
SeriesDifference frac_difference_series(const RadialFunction& f, double lambda, double t, double m,
                                        int N);

/// Rank-one generalized translation: F_k(tau^y f)(z) = e_k(y, z) F_k(f)(z).
/// The spectrum is taken on `freq_grid` and the result is sampled back on f's grid.
LineFunction translate_tau_1d(const LineFunction& f, double y, double k, const LineGrid& freq_grid);
inline LineFunction translate_tau_1d(const LineFunction& f, double y, double k) {
  return translate_tau_1d(f, y, k, f.grid);
}

}  // namespace dunkl
