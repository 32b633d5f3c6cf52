#pragma once

#include <optional>
#include <span>
#include <vector>

namespace dunkl {

/// Multiplicity data for the Z_2^d root system and the indices derived from it.
///
/// The radial theory only ever sees `lambda_k`; `d_k = 2(lambda_k + 1)` plays the
/// role of a generalized dimension. Construction rejects `lambda_k <= -1/2`.
class WeightParams {
 public:
  /// Builds parameters from an ambient dimension and one multiplicity per axis.
  static WeightParams from_multiplicities(int d, std::vector<double> multiplicities);

  /// Purely radial parameters: only the index is fixed, no weight function is attached.
  static WeightParams from_lambda(double lambda);

  int dimension() const noexcept { return d_; }
  std::span<const double> multiplicities() const noexcept { return multiplicities_; }
  bool has_multiplicities() const noexcept { return !multiplicities_.empty(); }
  double lambda_k() const noexcept { return lambda_k_; }
  double d_k() const noexcept { return d_k_; }

 private:
  WeightParams(int d, std::vector<double> k, double lambda);

  int d_ = 0;
  std::vector<double> multiplicities_;
  double lambda_k_ = 0.0;
  double d_k_ = 2.0;
};

inline WeightParams make_params(int d, std::vector<double> multiplicities) {
  return WeightParams::from_multiplicities(d, std::move(multiplicities));
}

/// v_k(x) = prod_j |x_j|^{2 k_j}. Requires multiplicity data with x.size() == d.
double weight_z2d(std::span<const double> x, const WeightParams& params);

/// Normalizer of the radial measure d nu_lambda(t) = b_lambda t^{2 lambda + 1} dt.
struct MeasureConstants {
  double lambda = 0.0;
  double b_lambda = 1.0;
};

/// b_lambda = 1 / (2^lambda Gamma(lambda + 1)); rejects lambda <= -1.
MeasureConstants measure_constants(double lambda);

}  // namespace dunkl
