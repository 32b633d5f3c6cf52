#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dunkl/quad.hpp"
#include "dunkl/special.hpp"

namespace dunkl {

/// Samples of a Hankel transform on a frequency grid.
///
/// A spectrum is stored as a base vector times a multiset of pointwise factors (the symbols
/// of multipliers applied to it). The visible values multiply, node by node, the base sample
/// and the factor samples in ascending numeric order, so applying the same multipliers in any
/// order yields bit-identical values.
class Spectrum {
 public:
  Spectrum(RadialGrid grid, std::vector<double> values, double lambda,
           std::optional<double> bandlimit = std::nullopt);

  const RadialGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double lambda() const noexcept { return lambda_; }
  /// sigma such that every value at a node r > sigma is exactly zero.
  std::optional<double> bandlimit() const noexcept { return bandlimit_; }
  bool truncation_suspect() const noexcept { return truncation_suspect_; }
  std::size_t factor_count() const noexcept { return factors_.size(); }

  /// Pointwise multiplication by sampled symbol values.
  Spectrum multiplied(std::vector<double> symbol, std::optional<double> new_bandlimit) const;

  Spectrum with_truncation_flag(bool suspect) const;

  /// Difference of two spectra on the same grid. When both share a base and their factor
  /// sets differ by a single symbol m, the result is the base times the common factors times
  /// (1 - m) (or (m - 1)): the multiplier algebra of I - M.
  friend Spectrum operator-(const Spectrum& a, const Spectrum& b);
  friend Spectrum operator+(const Spectrum& a, const Spectrum& b);
  Spectrum scaled(double c) const;

 private:
  using Factor = std::shared_ptr<const std::vector<double>>;
  Spectrum(RadialGrid grid, Factor base, std::vector<Factor> factors, double lambda,
           std::optional<double> bandlimit, bool suspect);
  void materialize();

  RadialGrid grid_;
  Factor base_;
  std::vector<Factor> factors_;
  std::vector<double> values_;
  double lambda_;
  std::optional<double> bandlimit_;
  bool truncation_suspect_ = false;
};

/// Matrix of the discretized transform, M_ij = j_lambda(r_i t_j) b_lambda w_j t_j^{2 lambda + 1},
/// mapping samples on an input grid t to samples on an output grid r. The transform is its own
/// inverse, so one matrix serves both directions.
class HankelKernel {
 public:
  /// Cached; population is single-writer per key.
  static std::shared_ptr<const HankelKernel> get(double lambda, const RadialGrid& in,
                                                 const RadialGrid& out);

  double lambda() const noexcept { return lambda_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  std::vector<double> apply(std::span<const double> samples) const;
  /// Applies the kernel to every column.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& columns) const;

  HankelKernel(double lambda, const RadialGrid& in, const RadialGrid& out);

 private:
  double lambda_;
  Eigen::MatrixXd matrix_;
};

void clear_kernel_cache();
std::size_t kernel_cache_size();

/// H_lambda(f)(r) = int f(t) j_lambda(r t) d nu_lambda(t), sampled on out_grid.
Spectrum hankel(const RadialFunction& f, double lambda, const RadialGrid& out_grid);
inline Spectrum hankel(const RadialFunction& f, double lambda) { return hankel(f, lambda, f.grid); }

/// Applies the same integral to a spectrum (H_lambda^{-1} = H_lambda).
RadialFunction inverse_hankel(const Spectrum& s, const RadialGrid& out_grid);
inline RadialFunction inverse_hankel(const Spectrum& s) { return inverse_hankel(s, s.grid()); }

/// Inverse transforms of many spectra sharing a grid and index; one column per spectrum.
Eigen::MatrixXd inverse_hankel_many(std::span<const Spectrum> spectra, const RadialGrid& out_grid);

/// Zeroes the values at nodes r > sigma and records the bandlimit. Idempotent.
Spectrum bandlimit_project(const Spectrum& s, double sigma);

/// Rank-one Dunkl kernel e_k(x, y) for the reflection group Z_2 with multiplicity k:
///   e_k(x, y) = j_{k-1/2}(x y) + i x y / (2k + 1) j_{k+1/2}(x y),
/// the solution of f' + k (f(x) - f(-x)) / x = i y f, f(0) = 1.
class DunklKernel1D {
 public:
  explicit DunklKernel1D(double k);
  double multiplicity() const noexcept { return k_; }
  std::complex<double> operator()(double x, double y) const;

 private:
  double k_;
  BesselEvaluator even_;
  BesselEvaluator odd_;
};

std::complex<double> dunkl_kernel_1d(double k, double x, double y);

/// Symmetric line grid: the nodes of a radial grid mirrored through the origin (origin excluded).
class LineGrid {
 public:
  explicit LineGrid(RadialGrid half);
  const RadialGrid& half() const noexcept { return half_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double rmax() const noexcept { return half_.rmax(); }
  friend bool operator==(const LineGrid& a, const LineGrid& b) { return a.half_ == b.half_; }

 private:
  RadialGrid half_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct LineFunction {
  LineGrid grid;
  std::vector<std::complex<double>> values;
  bool truncation_suspect = false;

  template <class F>
  static LineFunction sample(const LineGrid& g, F&& fn) {
    std::vector<std::complex<double>> v;
    v.reserve(g.size());
    for (double x : g.nodes()) v.emplace_back(fn(x));
    return {g, std::move(v)};
  }
};

/// c_k from the Gaussian normalization c_k^{-1} = int e^{-x^2/2} |x|^{2k} dx, on the grid.
double dunkl_ck(double k, const LineGrid& grid);

/// F_k(f)(y) = int f(x) conj(e_k(x, y)) d mu_k(x), d mu_k = c_k |x|^{2k} dx.
LineFunction dunkl_transform_1d(const LineFunction& f, double k, const LineGrid& out_grid);
inline LineFunction dunkl_transform_1d(const LineFunction& f, double k) {
  return dunkl_transform_1d(f, k, f.grid);
}

/// f(x) = int F(y) e_k(x, y) d mu_k(y).
LineFunction inverse_dunkl_transform_1d(const LineFunction& s, double k, const LineGrid& out_grid);
inline LineFunction inverse_dunkl_transform_1d(const LineFunction& s, double k) {
  return inverse_dunkl_transform_1d(s, k, s.grid);
}

/// CSV (node,value) with header "# lambda=<l> bandlimit=<sigma|none> rmax=<R> n=<n>".
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& in);
/// CSV (node,value,imag) with header "# lambda=<k - 1/2> bandlimit=none".
void write_line_csv(std::ostream& out, const LineFunction& s, double k);

}  // namespace dunkl
