#include "dunkl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "dunkl/weights.hpp"

namespace dunkl {

// ---------------------------------------------------------------------------------------------
// Spectrum

namespace {

bool same_factor(const std::shared_ptr<const std::vector<double>>& a,
                 const std::shared_ptr<const std::vector<double>>& b) {
  return a == b || *a == *b;
}

// total order that also separates -0 from +0, so the product below is order independent
bool factor_less(double a, double b) {
  if (a < b) return true;
  if (b < a) return false;
  return std::signbit(a) && !std::signbit(b);
}

std::optional<double> merged_bandlimit(std::optional<double> a, std::optional<double> b) {
  if (a && b) return std::max(*a, *b);
  return std::nullopt;
}

}  // namespace

Spectrum::Spectrum(RadialGrid grid, std::vector<double> values, double lambda,
                   std::optional<double> bandlimit)
    : grid_(std::move(grid)),
      base_(std::make_shared<const std::vector<double>>(std::move(values))),
      lambda_(lambda),
      bandlimit_(bandlimit) {
  if (base_->size() != grid_.size()) {
    throw std::invalid_argument("Spectrum: value count does not match the grid");
  }
  if (bandlimit_) {
    const auto r = grid_.nodes();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] > *bandlimit_ && (*base_)[i] != 0.0) {
        throw std::invalid_argument("Spectrum: nonzero value beyond the declared bandlimit");
      }
    }
  }
  values_ = *base_;
}

Spectrum::Spectrum(RadialGrid grid, Factor base, std::vector<Factor> factors, double lambda,
                   std::optional<double> bandlimit, bool suspect)
    : grid_(std::move(grid)),
      base_(std::move(base)),
      factors_(std::move(factors)),
      lambda_(lambda),
      bandlimit_(bandlimit),
      truncation_suspect_(suspect) {
  materialize();
}

void Spectrum::materialize() {
  const std::size_t n = base_->size();
  values_.assign(n, 0.0);
  std::vector<double> scratch(factors_.size() + 1);
  for (std::size_t i = 0; i < n; ++i) {
    scratch[0] = (*base_)[i];
    for (std::size_t k = 0; k < factors_.size(); ++k) scratch[k + 1] = (*factors_[k])[i];
    std::sort(scratch.begin(), scratch.end(), factor_less);
    double prod = scratch[0];
    for (std::size_t k = 1; k < scratch.size(); ++k) prod *= scratch[k];
    values_[i] = prod;
  }
  if (bandlimit_) {
    const auto r = grid_.nodes();
    for (std::size_t i = 0; i < n; ++i) {
      if (r[i] > *bandlimit_ && values_[i] != 0.0) {
        throw std::logic_error("Spectrum: nonzero value beyond the declared bandlimit");
      }
    }
  }
}

Spectrum Spectrum::multiplied(std::vector<double> symbol, std::optional<double> new_bandlimit) const {
  if (symbol.size() != grid_.size()) throw std::invalid_argument("Spectrum: symbol size mismatch");
  auto factors = factors_;
  factors.push_back(std::make_shared<const std::vector<double>>(std::move(symbol)));
  std::optional<double> band = bandlimit_;
  if (new_bandlimit) band = band ? std::min(*band, *new_bandlimit) : *new_bandlimit;
  return Spectrum(grid_, base_, std::move(factors), lambda_, band, truncation_suspect_);
}

Spectrum Spectrum::with_truncation_flag(bool suspect) const {
  Spectrum copy = *this;
  copy.truncation_suspect_ = suspect;
  return copy;
}

Spectrum Spectrum::scaled(double c) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * values_[i];
  Spectrum out(grid_, std::move(v), lambda_, bandlimit_);
  out.truncation_suspect_ = truncation_suspect_;
  return out;
}

namespace {

// If `larger` holds every factor of `smaller` plus exactly one more, returns that extra factor.
std::shared_ptr<const std::vector<double>> single_extra_factor(
    const std::vector<std::shared_ptr<const std::vector<double>>>& smaller,
    const std::vector<std::shared_ptr<const std::vector<double>>>& larger) {
  if (larger.size() != smaller.size() + 1) return nullptr;
  std::vector<bool> used(larger.size(), false);
  for (const auto& f : smaller) {
    bool found = false;
    for (std::size_t j = 0; j < larger.size(); ++j) {
      if (!used[j] && same_factor(f, larger[j])) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return nullptr;
  }
  for (std::size_t j = 0; j < larger.size(); ++j) {
    if (!used[j]) return larger[j];
  }
  return nullptr;
}

}  // namespace

Spectrum operator-(const Spectrum& a, const Spectrum& b) {
  if (!(a.grid_ == b.grid_) || a.lambda_ != b.lambda_) {
    throw std::invalid_argument("Spectrum difference: grids or indices differ");
  }
  const bool suspect = a.truncation_suspect_ || b.truncation_suspect_;
  const auto band = merged_bandlimit(a.bandlimit_, b.bandlimit_);
  if (same_factor(a.base_, b.base_)) {
    if (auto extra = single_extra_factor(a.factors_, b.factors_)) {
      std::vector<double> complement(extra->size());
      for (std::size_t i = 0; i < complement.size(); ++i) complement[i] = 1.0 - (*extra)[i];
      auto factors = a.factors_;
      factors.push_back(std::make_shared<const std::vector<double>>(std::move(complement)));
      return Spectrum(a.grid_, a.base_, std::move(factors), a.lambda_, band, suspect);
    }
    if (auto extra = single_extra_factor(b.factors_, a.factors_)) {
      std::vector<double> shifted(extra->size());
      for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = (*extra)[i] - 1.0;
      auto factors = b.factors_;
      factors.push_back(std::make_shared<const std::vector<double>>(std::move(shifted)));
      return Spectrum(a.grid_, a.base_, std::move(factors), a.lambda_, band, suspect);
    }
  }
  std::vector<double> v(a.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] - b.values_[i];
  Spectrum out(a.grid_, std::move(v), a.lambda_, band);
  out.truncation_suspect_ = suspect;
  return out;
}

Spectrum operator+(const Spectrum& a, const Spectrum& b) {
  if (!(a.grid_ == b.grid_) || a.lambda_ != b.lambda_) {
    throw std::invalid_argument("Spectrum sum: grids or indices differ");
  }
  std::vector<double> v(a.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
  Spectrum out(a.grid_, std::move(v), a.lambda_, merged_bandlimit(a.bandlimit_, b.bandlimit_));
  out.truncation_suspect_ = a.truncation_suspect_ || b.truncation_suspect_;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Hankel kernel

HankelKernel::HankelKernel(double lambda, const RadialGrid& in, const RadialGrid& out)
    : lambda_(lambda),
      matrix_(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(in.size())) {
  if (!(lambda > -0.5)) throw std::invalid_argument("HankelKernel: lambda must exceed -1/2");
  const BesselEvaluator j(lambda);
  const auto nu_in = nu_weights(in, lambda);
  const auto t = in.nodes();
  const auto r = out.nodes();
  const auto cols = static_cast<Eigen::Index>(t.size());
  const auto rows = static_cast<Eigen::Index>(r.size());
  if (in == out) {
    // j_lambda(r_i t_j) is symmetric; only the weights break the symmetry
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index i = c; i < rows; ++i) {
        const double v = j(r[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(c)]);
        matrix_(i, c) = v * nu_in[static_cast<std::size_t>(c)];
        matrix_(c, i) = v * nu_in[static_cast<std::size_t>(i)];
      }
    }
  } else {
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        matrix_(i, c) = j(r[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(c)]) *
                        nu_in[static_cast<std::size_t>(c)];
      }
    }
  }
}

namespace {

using KernelKey = std::tuple<double, double, int, int, double, int, int>;

KernelKey make_key(double lambda, const RadialGrid& in, const RadialGrid& out) {
  return {lambda,
          in.rmax(),
          in.spec().n,
          static_cast<int>(in.spec().kind),
          out.rmax(),
          out.spec().n,
          static_cast<int>(out.spec().kind)};
}

struct KernelCache {
  std::mutex mutex;
  std::map<KernelKey, std::shared_future<std::shared_ptr<const HankelKernel>>> entries;
};

KernelCache& kernel_cache() {
  static KernelCache cache;
  return cache;
}

}  // namespace

std::shared_ptr<const HankelKernel> HankelKernel::get(double lambda, const RadialGrid& in,
                                                      const RadialGrid& out) {
  auto& cache = kernel_cache();
  const auto key = make_key(lambda, in, out);
  std::promise<std::shared_ptr<const HankelKernel>> promise;
  std::shared_future<std::shared_ptr<const HankelKernel>> future;
  bool builder = false;
  {
    std::lock_guard lock(cache.mutex);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      cache.entries.emplace(key, future);
      builder = true;
    }
  }
  if (builder) {
    try {
      promise.set_value(std::make_shared<const HankelKernel>(lambda, in, out));
    } catch (...) {
      {
        std::lock_guard lock(cache.mutex);
        cache.entries.erase(key);
      }
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

void clear_kernel_cache() {
  auto& cache = kernel_cache();
  std::lock_guard lock(cache.mutex);
  cache.entries.clear();
}

std::size_t kernel_cache_size() {
  auto& cache = kernel_cache();
  std::lock_guard lock(cache.mutex);
  return cache.entries.size();
}

std::vector<double> HankelKernel::apply(std::span<const double> samples) const {
  if (static_cast<Eigen::Index>(samples.size()) != matrix_.cols()) {
    throw std::invalid_argument("HankelKernel: input size mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> x(samples.data(), matrix_.cols());
  std::vector<double> out(static_cast<std::size_t>(matrix_.rows()));
  Eigen::Map<Eigen::VectorXd> y(out.data(), matrix_.rows());
  y.noalias() = matrix_ * x;
  return out;
}

Eigen::MatrixXd HankelKernel::apply(const Eigen::MatrixXd& columns) const {
  if (columns.rows() != matrix_.cols()) throw std::invalid_argument("HankelKernel: input size mismatch");
  Eigen::MatrixXd out(matrix_.rows(), columns.cols());
  out.noalias() = matrix_ * columns;
  return out;
}

Spectrum hankel(const RadialFunction& f, double lambda, const RadialGrid& out_grid) {
  if (!(lambda > -0.5)) throw std::invalid_argument("hankel: lambda must exceed -1/2");
  const auto kernel = HankelKernel::get(lambda, f.grid, out_grid);
  const bool suspect = integrate_nu(f, lambda).truncation_suspect || f.truncation_suspect;
  return Spectrum(out_grid, kernel->apply(f.values), lambda).with_truncation_flag(suspect);
}

RadialFunction inverse_hankel(const Spectrum& s, const RadialGrid& out_grid) {
  const auto kernel = HankelKernel::get(s.lambda(), s.grid(), out_grid);
  RadialFunction f(out_grid, kernel->apply(s.values()), "inverse_hankel");
  f.truncation_suspect = s.truncation_suspect() || integrate_nu(s.values(), s.grid(), s.lambda()).truncation_suspect;
  return f;
}

Eigen::MatrixXd inverse_hankel_many(std::span<const Spectrum> spectra, const RadialGrid& out_grid) {
  if (spectra.empty()) return Eigen::MatrixXd(static_cast<Eigen::Index>(out_grid.size()), 0);
  const auto& grid = spectra.front().grid();
  const double lambda = spectra.front().lambda();
  Eigen::MatrixXd columns(static_cast<Eigen::Index>(grid.size()),
                          static_cast<Eigen::Index>(spectra.size()));
  for (std::size_t c = 0; c < spectra.size(); ++c) {
    if (!(spectra[c].grid() == grid) || spectra[c].lambda() != lambda) {
      throw std::invalid_argument("inverse_hankel_many: spectra must share grid and index");
    }
    const auto v = spectra[c].values();
    columns.col(static_cast<Eigen::Index>(c)) =
        Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return HankelKernel::get(lambda, grid, out_grid)->apply(columns);
}

Spectrum bandlimit_project(const Spectrum& s, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("bandlimit_project: sigma must be positive");
  const auto r = s.grid().nodes();
  std::vector<double> indicator(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) indicator[i] = r[i] > sigma ? 0.0 : 1.0;
  return s.multiplied(std::move(indicator), sigma);
}

// ---------------------------------------------------------------------------------------------
// Rank one

DunklKernel1D::DunklKernel1D(double k) : k_(k), even_(k - 0.5), odd_(k + 0.5) {
  if (!(k >= 0.0)) throw std::invalid_argument("DunklKernel1D: multiplicity must be nonnegative");
}

std::complex<double> DunklKernel1D::operator()(double x, double y) const {
  const double u = x * y;
  return {even_(u), u / (2.0 * k_ + 1.0) * odd_(u)};
}

std::complex<double> dunkl_kernel_1d(double k, double x, double y) { return DunklKernel1D(k)(x, y); }

LineGrid::LineGrid(RadialGrid half) : half_(std::move(half)) {
  const auto t = half_.nodes();
  const auto w = half_.weights();
  nodes_.reserve(2 * t.size());
  weights_.reserve(2 * t.size());
  for (std::size_t i = t.size(); i-- > 0;) {
    nodes_.push_back(-t[i]);
    weights_.push_back(w[i]);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    nodes_.push_back(t[i]);
    weights_.push_back(w[i]);
  }
}

double dunkl_ck(double k, const LineGrid& grid) {
  if (!(k >= 0.0)) throw std::invalid_argument("dunkl_ck: multiplicity must be nonnegative");
  const auto x = grid.nodes();
  const auto w = grid.weights();
  std::vector<double> terms(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    terms[i] = w[i] * std::exp(-0.5 * x[i] * x[i]) * std::pow(std::abs(x[i]), 2.0 * k);
  }
  return 1.0 / pairwise_sum(terms);
}

namespace {

LineFunction line_transform(const LineFunction& f, double k, const LineGrid& out_grid, bool inverse) {
  const DunklKernel1D kernel(k);
  const double ck = dunkl_ck(k, f.grid);
  const auto x = f.grid.nodes();
  const auto w = f.grid.weights();
  std::vector<std::complex<double>> weighted(x.size());
  std::vector<double> mass(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double m = ck * w[j] * std::pow(std::abs(x[j]), 2.0 * k);
    weighted[j] = m * f.values[j];
    mass[j] = std::abs(weighted[j]);
  }
  const auto y = out_grid.nodes();
  std::vector<std::complex<double>> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto e = kernel(x[j], y[i]);
      acc += weighted[j] * (inverse ? e : std::conj(e));
    }
    out[i] = acc;
  }
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    total += mass[j];
    if (std::abs(x[j]) >= 0.9 * f.grid.rmax()) tail += mass[j];
  }
  LineFunction result{out_grid, std::move(out)};
  result.truncation_suspect = f.truncation_suspect || (total > 0.0 && tail > 1e-8 * total);
  return result;
}

}  // namespace

LineFunction dunkl_transform_1d(const LineFunction& f, double k, const LineGrid& out_grid) {
  return line_transform(f, k, out_grid, false);
}

LineFunction inverse_dunkl_transform_1d(const LineFunction& s, double k, const LineGrid& out_grid) {
  return line_transform(s, k, out_grid, true);
}

// ---------------------------------------------------------------------------------------------
// CSV

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "# lambda=" << format_double(s.lambda())
      << " bandlimit=" << (s.bandlimit() ? format_double(*s.bandlimit()) : std::string("none"))
      << " rmax=" << format_double(s.grid().rmax()) << " n=" << s.grid().size();
  if (s.grid().spec().kind != GridKind::GaussLegendreComposite) {
    out << " kind=" << to_string(s.grid().spec().kind);
  }
  out << '\n';
  const auto r = s.grid().nodes();
  const auto v = s.values();
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << format_double(r[i]) << ',' << format_double(v[i]) << '\n';
  }
}

Spectrum read_spectrum_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("csv: empty input");
  std::map<std::string, std::string> fields;
  {
    if (header.empty() || header[0] != '#') throw std::runtime_error("csv: missing '#' header line");
    std::istringstream ss(header.substr(1));
    std::string token;
    while (ss >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw std::runtime_error("csv: malformed header field '" + token + "'");
      fields[token.substr(0, eq)] = token.substr(eq + 1);
    }
  }
  for (const char* key : {"lambda", "bandlimit", "rmax", "n"}) {
    if (!fields.contains(key)) throw std::runtime_error(std::string("csv: header lacks '") + key + "'");
  }
  // reuse the radial reader for node validation
  std::ostringstream radial;
  radial << "# lambda=" << fields["lambda"] << " rmax=" << fields["rmax"] << " n=" << fields["n"];
  if (fields.contains("kind")) radial << " kind=" << fields["kind"];
  radial << '\n' << in.rdbuf();
  std::istringstream radial_in(radial.str());
  auto parsed = read_radial_csv(radial_in);
  std::optional<double> band;
  if (fields["bandlimit"] != "none") band = std::stod(fields["bandlimit"]);
  return Spectrum(parsed.function.grid, std::move(parsed.function.values), parsed.lambda, band);
}

void write_line_csv(std::ostream& out, const LineFunction& s, double k) {
  out << "# lambda=" << format_double(k - 0.5) << " bandlimit=none\n";
  const auto x = s.grid.nodes();
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << ',' << format_double(s.values[i].real()) << ','
        << format_double(s.values[i].imag()) << '\n';
  }
}

}  // namespace dunkl
