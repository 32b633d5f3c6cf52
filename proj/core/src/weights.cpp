#include "dunkl/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dunkl/special.hpp"

namespace dunkl {

WeightParams::WeightParams(int d, std::vector<double> k, double lambda)
    : d_(d), multiplicities_(std::move(k)), lambda_k_(lambda), d_k_(2.0 * (lambda + 1.0)) {
  if (!(lambda_k_ > -0.5)) {
    throw std::invalid_argument("WeightParams: lambda_k must exceed -1/2, got " +
                                std::to_string(lambda_k_));
  }
}

WeightParams WeightParams::from_multiplicities(int d, std::vector<double> multiplicities) {
  if (d <= 0) throw std::invalid_argument("WeightParams: dimension must be positive");
  if (multiplicities.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("WeightParams: expected one multiplicity per coordinate axis");
  }
  double sum = 0.0;
  for (double k : multiplicities) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("WeightParams: multiplicities must be finite and nonnegative");
    }
    sum += k;
  }
  const double lambda = 0.5 * d - 1.0 + sum;
  return WeightParams(d, std::move(multiplicities), lambda);
}

WeightParams WeightParams::from_lambda(double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("WeightParams: lambda must be finite");
  return WeightParams(0, {}, lambda);
}

double weight_z2d(std::span<const double> x, const WeightParams& params) {
  if (!params.has_multiplicities()) {
    throw std::invalid_argument("weight_z2d: parameters carry no multiplicity data");
  }
  const auto k = params.multiplicities();
  if (x.size() != k.size()) throw std::invalid_argument("weight_z2d: dimension mismatch");
  double v = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] == 0.0) continue;  // |0|^0 = 1 on the hyperplane as well
    v *= std::pow(std::abs(x[j]), 2.0 * k[j]);
  }
  return v;
}

MeasureConstants measure_constants(double lambda) {
  if (!(lambda > -1.0)) {
    throw std::invalid_argument("measure_constants: lambda must exceed -1");
  }
  return {lambda, 1.0 / (std::exp2(lambda) * gamma_fn(lambda + 1.0))};
}

}  // namespace dunkl
