#pragma once

namespace dunkl {

/// Gamma function on the real line (Lanczos, g = 7, nine terms; reflection below 1/2).
double gamma_fn(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma_fn(double x);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// Evaluates the normalized Bessel function
///   j_lambda(t) = 2^lambda Gamma(lambda + 1) t^{-lambda} J_lambda(t),  j_lambda(0) = 1,
/// for a fixed real order lambda >= -1/2 and t >= 0 (j_{-1/2}(t) = cos t).
///
/// Three regimes are used:
///  - t <= series_cutoff: the power series, summed in extended precision;
///  - series_cutoff < t < asymptotic_cutoff: Miller's backward recurrence normalized by
///    the Neumann series 1 = sum_k (lambda + 2k) Gamma(lambda + k) / (k! Gamma(lambda + 1)) u_{2k};
///  - t >= asymptotic_cutoff: Hankel's asymptotic expansion.
/// The absolute error is below 1e-12 on [0, 1e3].
class BesselEvaluator {
 public:
  /// Rejects lambda < -1/2.
  explicit BesselEvaluator(double lambda);

  double operator()(double t) const;
  /// 1 - j_lambda(t) without cancellation for small t.
  double complement(double t) const;

  double lambda() const noexcept { return lambda_; }
  double series_cutoff() const noexcept { return series_cutoff_; }
  double asymptotic_cutoff() const noexcept { return asymptotic_cutoff_; }
  /// Upper bound on the number of series terms used below the cutoff.
  int series_terms() const noexcept { return series_terms_; }

 private:
  double series(double t) const;
  double miller(double t) const;
  double hankel_asymptotic(double t) const;

  double lambda_;
  double series_cutoff_;
  double asymptotic_cutoff_;
  int series_terms_;
  double prefactor_;   // 2^lambda Gamma(lambda + 1)
  double phase_cos_;   // cos((lambda/2 + 1/4) pi)
  double phase_sin_;   // sin((lambda/2 + 1/4) pi)
};

/// j_lambda(t); rejects lambda <= -1/2 and t < 0.
double bessel_norm(double lambda, double t);

/// j'_lambda(t) = -t / (2(lambda + 1)) j_{lambda+1}(t).
double bessel_norm_derivative(double lambda, double t);

/// (1 - j_lambda(t))^{m/2}, the symbol of the fractional difference of order m. The base is
/// evaluated with BesselEvaluator::complement, so the small-t law holds to full relative precision.
double jm_multiplier(double lambda, double m, double t);

/// Generalized binomial coefficient binom(alpha, s) = Gamma(alpha+1) / (Gamma(s+1) Gamma(alpha-s+1)).
/// Switches to the reflected form sin(pi(s-alpha)) Gamma(alpha+1) Gamma(s-alpha) / (pi Gamma(s+1))
/// when alpha - s + 1 <= 0.
double binom_frac(double alpha, int s);

/// Rigorous upper bound on sum_{s > N} |binom(alpha, s)| for alpha > 0 and N >= 0.
///
/// Terms are summed explicitly; past the last summed index S > alpha the remainder is
/// bounded by |binom(alpha, S)| * S / alpha, which follows from
/// |binom(alpha, s+1) / binom(alpha, s)| <= (s / (s+1))^{alpha+1}.
double binom_tail_bound(double alpha, int N);

/// c(alpha) = sum_{s >= 0} |binom(alpha, s)|, an upper bound for the L^p norm of
/// (I - T)^alpha when T is a contraction.
double contraction_constant(double alpha);

}  // namespace dunkl
