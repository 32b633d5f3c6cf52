#include "dunkl/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dunkl {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos sum A(z) for Gamma(z + 1).
double lanczos_sum(double z) {
  double a = kLanczosCoeffs[0];
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
    a += kLanczosCoeffs[k] / (z + static_cast<double>(k));
  }
  return a;
}

}  // namespace

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  // reduce to [-1, 1): sin(pi x) has period 2
  double r = std::fmod(x, 2.0);
  if (r >= 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r == 0.0 || r == -1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(std::numbers::pi * r);
}

double gamma_fn(double x) {
  if (x == std::floor(x) && x <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.5) {
    return std::numbers::pi / (sin_pi(x) * gamma_fn(1.0 - x));
  }
  if (x > 141.0) {
    return std::exp(log_gamma_fn(x));
  }
  const double z = x - 1.0;
  const double base = z + kLanczosG + 0.5;
  // split the power to keep the intermediate finite for x up to ~171
  const double half = std::pow(base, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-base)) * lanczos_sum(z);
}

double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma_fn: argument must be positive");
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::abs(sin_pi(x))) - log_gamma_fn(1.0 - x);
  }
  const double z = x - 1.0;
  const double base = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(base) - base +
         std::log(lanczos_sum(z));
}

BesselEvaluator::BesselEvaluator(double lambda) : lambda_(lambda) {
  if (!(lambda >= -0.5) || !std::isfinite(lambda)) {
    throw std::invalid_argument("BesselEvaluator: order must be >= -1/2");
  }
  series_cutoff_ = std::max(12.0, 2.0 * lambda);
  const double nu = lambda;
  asymptotic_cutoff_ = std::max({32.0, 2.0 * nu * nu, series_cutoff_});
  // terms needed for the series at the cutoff: stop once (t/2)^{2k} / (k! (k+lambda)!) is negligible
  series_terms_ = static_cast<int>(std::ceil(series_cutoff_ + 20.0));
  prefactor_ = std::exp2(lambda) * gamma_fn(lambda + 1.0);
  const double phase = (0.5 * lambda + 0.25) * std::numbers::pi;
  phase_cos_ = std::cos(phase);
  phase_sin_ = std::sin(phase);
}

double BesselEvaluator::operator()(double t) const {
  if (t < 0.0) t = -t;  // j_lambda is even
  if (t == 0.0) return 1.0;
  if (t <= series_cutoff_) return series(t);
  if (t < asymptotic_cutoff_) return miller(t);
  return hankel_asymptotic(t);
}

double BesselEvaluator::series(double t) const {
  const long double q = -0.25L * static_cast<long double>(t) * t;
  const long double lam = lambda_;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k <= series_terms_ + 40; ++k) {
    term *= q / (static_cast<long double>(k) * (k + lam));
    sum += term;
    if (std::abs(term) < 1e-21L * std::max(std::abs(sum), 1e-3L) && k > 2) break;
  }
  return static_cast<double>(sum);
}

double BesselEvaluator::complement(double t) const {
  if (t > 1.0) return 1.0 - (*this)(t);
  // -sum_{k>=1} of the series terms
  const long double q = -0.25L * static_cast<long double>(t) * t;
  const long double lam = lambda_;
  long double term = 1.0L;
  long double sum = 0.0L;
  for (int k = 1; k <= 40; ++k) {
    term *= q / (static_cast<long double>(k) * (k + lam));
    sum -= term;
    if (std::abs(term) <= 1e-21L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

double BesselEvaluator::miller(double t) const {
  // Backward recurrence on u_n = Gamma(nu+1) (2/t)^nu J_{nu+n}(t):
  //   u_{n-1} = (2 (nu + n) / t) u_n - u_{n+1}
  const double nu = lambda_;
  int start = static_cast<int>(std::ceil(t + 24.0 + 8.0 * std::cbrt(t)));
  if (start % 2 != 0) ++start;
  const int kmax = start / 2;

  // normalization weights c_k of the even-index terms
  std::vector<long double> c(static_cast<std::size_t>(kmax) + 1);
  c[0] = 1.0L;
  long double g = 1.0L;  // Gamma(nu + k) / (k! Gamma(nu + 1))
  for (int k = 1; k <= kmax; ++k) {
    if (k > 1) g *= (nu + k - 1.0L) / static_cast<long double>(k);
    c[static_cast<std::size_t>(k)] = (nu + 2.0L * k) * g;
  }

  const long double two_over_t = 2.0L / static_cast<long double>(t);
  long double u_next = 0.0L;   // u_{n+1}
  long double u = 1e-30L;      // u_n, n = start
  long double norm = c[static_cast<std::size_t>(kmax)] * u;
  for (int n = start; n > 0; --n) {
    const long double u_prev = two_over_t * (nu + n) * u - u_next;
    u_next = u;
    u = u_prev;
    const int idx = n - 1;
    if (idx % 2 == 0) norm += c[static_cast<std::size_t>(idx / 2)] * u;
    if (std::abs(u) > 1e250L) {
      u *= 1e-250L;
      u_next *= 1e-250L;
      norm *= 1e-250L;
    }
  }
  return static_cast<double>(u / norm);
}

double BesselEvaluator::hankel_asymptotic(double t) const {
  const double mu = 4.0 * lambda_ * lambda_;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * t);
    const double mag = std::abs(term);
    if (mag > last) break;  // the expansion has started to diverge
    // signs follow P = a0 - a2 + a4 - ..., Q = a1 - a3 + ...
    const int phase = k % 4;
    if (phase == 1) q += term;
    else if (phase == 2) p -= term;
    else if (phase == 3) q -= term;
    else p += term;
    if (mag < 1e-17) break;
    last = mag;
  }
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double cos_chi = c * phase_cos_ + s * phase_sin_;
  const double sin_chi = s * phase_cos_ - c * phase_sin_;
  const double bessel_j = std::sqrt(2.0 / (std::numbers::pi * t)) * (p * cos_chi - q * sin_chi);
  return prefactor_ * std::pow(t, -lambda_) * bessel_j;
}

double bessel_norm(double lambda, double t) {
  if (!(lambda > -0.5)) throw std::invalid_argument("bessel_norm: lambda must exceed -1/2");
  if (!(t >= 0.0)) throw std::invalid_argument("bessel_norm: t must be nonnegative");
  return BesselEvaluator(lambda)(t);
}

double bessel_norm_derivative(double lambda, double t) {
  if (!(lambda > -0.5)) {
    throw std::invalid_argument("bessel_norm_derivative: lambda must exceed -1/2");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("bessel_norm_derivative: t must be nonnegative");
  if (t == 0.0) return 0.0;
  return -t / (2.0 * (lambda + 1.0)) * BesselEvaluator(lambda + 1.0)(t);
}

double jm_multiplier(double lambda, double m, double t) {
  if (!(m > 0.0)) throw std::invalid_argument("jm_multiplier: m must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("jm_multiplier: t must be nonnegative");
  if (!(lambda > -0.5)) throw std::invalid_argument("jm_multiplier: lambda must exceed -1/2");
  return std::pow(std::max(0.0, BesselEvaluator(lambda).complement(t)), 0.5 * m);
}

double binom_frac(double alpha, int s) {
  if (s < 0) throw std::invalid_argument("binom_frac: s must be nonnegative");
  if (s == 0) return 1.0;
  const double sd = static_cast<double>(s);
  if (alpha - sd + 1.0 > 0.0) {
    if (alpha < 140.0) {
      return gamma_fn(alpha + 1.0) / (gamma_fn(sd + 1.0) * gamma_fn(alpha - sd + 1.0));
    }
    return std::exp(log_gamma_fn(alpha + 1.0) - log_gamma_fn(sd + 1.0) -
                    log_gamma_fn(alpha - sd + 1.0));
  }
  // reflected form: no Gamma pole is touched; s - alpha >= 1
  const double sign_part = sin_pi(sd - alpha);
  if (sign_part == 0.0) return 0.0;
  const double log_ratio = log_gamma_fn(sd - alpha) - log_gamma_fn(sd + 1.0);
  return sign_part * gamma_fn(alpha + 1.0) * std::exp(log_ratio) / std::numbers::pi;
}

double binom_tail_bound(double alpha, int N) {
  if (!(alpha > 0.0)) throw std::invalid_argument("binom_tail_bound: alpha must be positive");
  if (N < 0) throw std::invalid_argument("binom_tail_bound: N must be nonnegative");
  if (alpha == std::floor(alpha) && static_cast<double>(N) >= alpha) return 0.0;

  constexpr int kExplicitTerms = 4096;
  double b = binom_frac(alpha, N);
  double sum = 0.0;
  int s = N;
  for (int i = 0; i < kExplicitTerms || static_cast<double>(s) <= alpha + 1.0; ++i) {
    const double next = b * (alpha - s) / static_cast<double>(s + 1);
    ++s;
    b = next;
    sum += std::abs(b);
    if (b == 0.0) return sum;
    if (std::abs(b) * static_cast<double>(s) / alpha < 1e-18 * sum &&
        static_cast<double>(s) > alpha + 1.0) {
      break;
    }
  }
  const double remainder = std::abs(b) * static_cast<double>(s) / alpha;
  // one relative ulp-scale allowance for the summation
  return (sum + remainder) * (1.0 + 1e-13);
}

double contraction_constant(double alpha) { return 1.0 + binom_tail_bound(alpha, 0); }

}  // namespace dunkl
