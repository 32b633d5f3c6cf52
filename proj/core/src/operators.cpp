#include "dunkl/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dunkl/special.hpp"

namespace dunkl {

Spectrum apply_multiplier(const Spectrum& s, const Multiplier& m) {
  const auto r = s.grid().nodes();
  std::vector<double> symbol(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    symbol[i] = m.symbol(r[i]);
    if (!std::isfinite(symbol[i])) {
      throw std::domain_error("apply_multiplier: symbol '" + m.label + "' is not finite on the grid");
    }
  }
  return s.multiplied(std::move(symbol), m.support_radius);
}

double CutoffEta::operator()(double t) const {
  t = std::abs(t);
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const auto h = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  const double a = h(2.0 - t);
  const double b = h(t - 1.0);
  return a / (a + b);
}

Multiplier translation_multiplier(double lambda, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("translate_T: t must be nonnegative");
  BesselEvaluator j(lambda);
  return {[j, t](double r) { return j(t * r); }, "T^t", false, std::nullopt};
}

Multiplier laplacian_power_multiplier(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("frac_laplacian: power must be nonnegative");
  return {[r](double y) { return std::pow(y, r); }, "(-Delta)^{r/2}", r < 0.0, std::nullopt};
}

Multiplier difference_multiplier(double lambda, double t, double m) {
  if (!(t > 0.0)) throw std::invalid_argument("frac_difference: t must be positive");
  if (!(m > 0.0)) throw std::invalid_argument("frac_difference: m must be positive");
  BesselEvaluator j(lambda);
  if (m == 2.0) {
    // Plain subtraction keeps Delta_t^2 bit-identical to the spectrum difference f - T^t f.
    return {[j, t](double r) { return 1.0 - j(t * r); }, "Delta_t^m", false, std::nullopt};
  }
  const double half = 0.5 * m;
  return {[j, t, half](double r) { return std::pow(std::max(0.0, j.complement(t * r)), half); },
          "Delta_t^m", false, std::nullopt};
}

Multiplier vallee_poussin_multiplier(double sigma, const CutoffEta& eta) {
  if (!(sigma > 0.0)) throw std::invalid_argument("vallee_poussin: sigma must be positive");
  return {[eta, sigma](double r) { return eta(r / sigma); }, "P_sigma", false, 2.0 * sigma};
}

Spectrum translate_T(const Spectrum& s, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("translate_T: t must be positive");
  return apply_multiplier(s, translation_multiplier(s.lambda(), t));
}

Spectrum frac_laplacian(const Spectrum& s, double half_power) {
  if (!(half_power > 0.0)) throw std::invalid_argument("frac_laplacian: power must be positive");
  return apply_multiplier(s, laplacian_power_multiplier(half_power));
}

Spectrum frac_difference(const Spectrum& s, double t, double m) {
  return apply_multiplier(s, difference_multiplier(s.lambda(), t, m));
}

Spectrum convolve(const Spectrum& f, const Spectrum& g) {
  if (!(f.grid() == g.grid()) || f.lambda() != g.lambda()) {
    throw std::invalid_argument("convolve: spectra must share grid and index");
  }
  const auto a = f.values();
  const auto b = g.values();
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  std::optional<double> band;
  if (f.bandlimit() && g.bandlimit()) band = std::min(*f.bandlimit(), *g.bandlimit());
  else if (f.bandlimit()) band = f.bandlimit();
  else if (g.bandlimit()) band = g.bandlimit();
  return Spectrum(f.grid(), std::move(v), f.lambda(), band)
      .with_truncation_flag(f.truncation_suspect() || g.truncation_suspect());
}

Spectrum vallee_poussin(const Spectrum& s, double sigma, const CutoffEta& eta) {
  return apply_multiplier(s, vallee_poussin_multiplier(sigma, eta));
}

double grm_symbol(double lambda, double m, double r, double t, double freq) {
  if (!(m > 0.0)) throw std::invalid_argument("grm_symbol: m must be positive");
  if (!(r >= 0.0)) throw std::invalid_argument("grm_symbol: r must be nonnegative");
  if (m < r) throw std::invalid_argument("grm_symbol: requires m >= r");
  if (!(t > 0.0)) throw std::invalid_argument("grm_symbol: t must be positive");
  if (!(freq > 0.0)) throw std::invalid_argument("grm_symbol: freq must be positive");
  return std::pow(freq, -r) * jm_multiplier(lambda, m, t * freq);
}

SeriesDifference frac_difference_series(const RadialFunction& f, double lambda, double t, double m,
                                        int N) {
  if (!(t > 0.0) || !(m > 0.0)) {
    throw std::invalid_argument("frac_difference_series: t and m must be positive");
  }
  if (N < 0) throw std::invalid_argument("frac_difference_series: N must be nonnegative");
  const double alpha = 0.5 * m;
  std::vector<double> acc = f.values;
  if (N > 0) {
    const Spectrum base = hankel(f, lambda);
    std::vector<Spectrum> powers;
    powers.reserve(static_cast<std::size_t>(N));
    Spectrum current = base;
    for (int s = 1; s <= N; ++s) {
      current = translate_T(current, t);
      powers.push_back(current);
    }
    const Eigen::MatrixXd physical = inverse_hankel_many(powers, f.grid);
    for (int s = 1; s <= N; ++s) {
      const double c = (s % 2 == 0 ? 1.0 : -1.0) * binom_frac(alpha, s);
      const auto col = physical.col(s - 1);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * col(static_cast<Eigen::Index>(i));
    }
  }
  double sup = 0.0;
  for (double v : f.values) sup = std::max(sup, std::abs(v));
  const double tail = binom_tail_bound(alpha, N);
  const double allowance = 1e-12 * (N + 1) * sup;
  RadialFunction out(f.grid, std::move(acc), "Delta_t^m series");
  out.truncation_suspect = f.truncation_suspect;
  return {std::move(out), tail * sup + allowance};
}

LineFunction translate_tau_1d(const LineFunction& f, double y, double k, const LineGrid& freq_grid) {
  const LineFunction spectrum = dunkl_transform_1d(f, k, freq_grid);
  const DunklKernel1D kernel(k);
  LineFunction shifted = spectrum;
  const auto z = freq_grid.nodes();
  for (std::size_t i = 0; i < z.size(); ++i) shifted.values[i] *= kernel(y, z[i]);
  return inverse_dunkl_transform_1d(shifted, k, f.grid);
}

}  // namespace dunkl
