#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dunkl {

enum class GridKind { GaussLegendreComposite, ClenshawCurtis };

const char* to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& name);

struct GridSpec {
  double rmax = 30.0;
  int n = 2048;
  GridKind kind = GridKind::GaussLegendreComposite;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Default desk-scale resolution shared by physical and frequency grids.
inline constexpr GridSpec kDefaultGrid{30.0, 2048, GridKind::GaussLegendreComposite};

/// Quadrature nodes and plain Lebesgue weights on [0, rmax].
///
/// Panels are geometric towards the origin ([0, a 2^{1-G}], ..., [a/2, a]) and uniform on
/// [a, rmax]; every node is strictly positive. Copies share the node storage.
class RadialGrid {
 public:
  std::span<const double> nodes() const noexcept { return data_->nodes; }
  std::span<const double> weights() const noexcept { return data_->weights; }
  double rmax() const noexcept { return data_->spec.rmax; }
  std::size_t size() const noexcept { return data_->nodes.size(); }
  const GridSpec& spec() const noexcept { return data_->spec; }
  /// Number of geometric panels next to the origin.
  int geometric_panels() const noexcept { return data_->geometric_panels; }

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
    return a.data_ == b.data_ || a.spec() == b.spec();
  }

 private:
  friend RadialGrid make_grid(double rmax, int n, GridKind kind);
  struct Data {
    GridSpec spec;
    std::vector<double> nodes;
    std::vector<double> weights;
    int geometric_panels = 0;
  };
  explicit RadialGrid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

/// Rejects rmax <= 0 and n < 16.
RadialGrid make_grid(double rmax, int n, GridKind kind = GridKind::GaussLegendreComposite);
inline RadialGrid make_grid(const GridSpec& spec) { return make_grid(spec.rmax, spec.n, spec.kind); }

/// Samples of a radial profile f_0 on a grid, standing for f(x) = f_0(|x|).
struct RadialFunction {
  RadialGrid grid;
  std::vector<double> values;
  std::string label;
  /// Set by producers whose quadrature saw non-negligible mass near the truncation radius.
  bool truncation_suspect = false;

  RadialFunction(RadialGrid g, std::vector<double> v, std::string name = {});

  template <class F>
  static RadialFunction sample(const RadialGrid& g, F&& profile, std::string name = {}) {
    std::vector<double> v;
    v.reserve(g.size());
    for (double t : g.nodes()) v.push_back(profile(t));
    return RadialFunction(g, std::move(v), std::move(name));
  }
};

/// Index of an L^p norm, 1 <= p <= infinity.
class LpIndex {
 public:
  /* implicit */ LpIndex(double p);
  static LpIndex infinity() { return LpIndex(std::numeric_limits<double>::infinity()); }
  double value() const noexcept { return p_; }
  bool is_infinity() const noexcept { return std::isinf(p_); }
  bool is_two() const noexcept { return p_ == 2.0; }
  friend bool operator==(LpIndex, LpIndex) = default;

 private:
  double p_;
};

std::string to_string(LpIndex p);
LpIndex parse_lp_index(const std::string& text);

/// Pairwise (cascade) sum; bit-stable for a fixed input sequence.
double pairwise_sum(std::span<const double> values);

/// Weights of the discretized measure: b_lambda w_i t_i^{2 lambda + 1}.
std::vector<double> nu_weights(const RadialGrid& grid, double lambda);

struct NuIntegral {
  double value = 0.0;
  /// Set when the nodes in [0.9 rmax, rmax] carry more than 1e-8 of the absolute mass.
  bool truncation_suspect = false;
};

/// b_lambda sum_i w_i f(t_i) t_i^{2 lambda + 1}.
NuIntegral integrate_nu(std::span<const double> values, const RadialGrid& grid, double lambda);
inline NuIntegral integrate_nu(const RadialFunction& f, double lambda) {
  return integrate_nu(f.values, f.grid, lambda);
}

/// ||f_0||_{p, d nu_lambda}, which equals ||f||_{p, d mu_k} for radial f when lambda = lambda_k.
/// For p = infinity this is the maximum over the grid, a lower bound of the true supremum.
double lp_norm(std::span<const double> values, const RadialGrid& grid, LpIndex p, double lambda);
inline double lp_norm(const RadialFunction& f, LpIndex p, double lambda) {
  return lp_norm(f.values, f.grid, p, lambda);
}

/// Two-column CSV (node,value) with header "# lambda=<l> rmax=<R> n=<n>".
void write_radial_csv(std::ostream& out, const RadialFunction& f, double lambda);

struct RadialCsv {
  RadialFunction function;
  double lambda;
};
/// Reads the format written by write_radial_csv; nodes must match a standard grid.
RadialCsv read_radial_csv(std::istream& in);

/// %.17g formatting used by every text output of the library.
std::string format_double(double v);

}  // namespace dunkl
