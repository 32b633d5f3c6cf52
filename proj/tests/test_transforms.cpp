#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "dunkl/harness.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/transforms.hpp"
#include "oracles.hpp"

using namespace dunkl;

namespace {

const RadialGrid& grid() {
  static const RadialGrid g = make_grid(kDefaultGrid);
  return g;
}

double gaussian(double t) { return std::exp(-t * t / 2); }

double bump(double t) { return t < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("Gaussian is a fixed point of the Hankel transform") {
  auto f = RadialFunction::sample(grid(), gaussian);
  for (double lambda : {-0.25, 0.0, 0.25, 1.0, 2.5}) {
    auto s = hankel(f, lambda);
    double err = 0.0;
    for (std::size_t i = 0; i < grid().size(); ++i)
      err = std::max(err, std::abs(s.values()[i] - gaussian(grid().nodes()[i])));
    CAPTURE(lambda);
    CHECK(err < 1e-8);
    CHECK(s.lambda() == lambda);
    CHECK_FALSE(s.bandlimit().has_value());
  }
}

TEST_CASE("zero maps to zero") {
  auto z = RadialFunction::sample(grid(), [](double) { return 0.0; });
  auto s = hankel(z, 0.5);
  for (double v : s.values()) CHECK(v == 0.0);
  auto back = inverse_hankel(s);
  for (double v : back.values) CHECK(v == 0.0);
}

TEST_CASE("lambda = 1/2 agrees with a sine-transform oracle") {
  auto f = RadialFunction::sample(grid(), bump);
  auto s = hankel(f, 0.5);
  const double b = std::sqrt(2.0 / std::numbers::pi);
  for (std::size_t i = 0; i < grid().size(); i += 97) {
    const double r = grid().nodes()[i];
    const double ref = b / r * oracle::integrate([&](double t) { return bump(t) * std::sin(r * t) * t; }, 0.0, 1.0);
    CAPTURE(r);
    CHECK(std::abs(s.values()[i] - ref) < 1e-7);
  }
}

TEST_CASE("round trips and Parseval") {
  // Physical profiles plus a bandlimited bump wide enough (sigma = 8) to decay inside rmax.
  for (double lambda : {0.0, 0.25, 1.0, 2.5}) {
    for (const char* name : {"gaussian", "modulated", "poly", "bump"}) {
      auto f = inverse_hankel(make_test_spectrum(name, grid(), lambda, 8.0));
      auto s = hankel(f, lambda);
      auto back = inverse_hankel(s);
      const double nf = lp_norm(f, 2.0, lambda);
      const double ns = lp_norm(s.values(), grid(), 2.0, lambda);
      std::vector<double> diff(f.values.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = back.values[i] - f.values[i];
      CAPTURE(lambda);
      CAPTURE(name);
      CHECK(std::abs(nf - ns) / nf <= 1e-7);
      CHECK(lp_norm(diff, grid(), 2.0, lambda) / nf <= 1e-6);
    }
  }
  // Starting from samples of (1 + t^2)^{-2}: the value 1.2e-6 at rmax bounds the achievable error.
  auto poly = RadialFunction::sample(grid(), [](double t) { return std::pow(1 + t * t, -2.0); });
  auto back = inverse_hankel(hankel(poly, 0.0));
  std::vector<double> diff(poly.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = back.values[i] - poly.values[i];
  CHECK(lp_norm(diff, grid(), 2.0, 0.0) / lp_norm(poly, 2.0, 0.0) <= 5e-6);
}

TEST_CASE("transform between different grids") {
  auto coarse = make_grid(20.0, 512);
  auto f = RadialFunction::sample(grid(), gaussian);
  auto s = hankel(f, 1.0, coarse);
  CHECK(s.grid() == coarse);
  for (std::size_t i = 0; i < coarse.size(); ++i)
    CHECK(std::abs(s.values()[i] - gaussian(coarse.nodes()[i])) < 1e-8);
  std::vector<Spectrum> many{s, s.scaled(2.0)};
  auto cols = inverse_hankel_many(many, grid());
  auto one = inverse_hankel(s, grid());
  for (std::size_t i = 0; i < grid().size(); ++i) {
    CHECK(std::abs(cols(static_cast<Eigen::Index>(i), 0) - one.values[i]) < 1e-14);
    CHECK(std::abs(cols(static_cast<Eigen::Index>(i), 1) - 2 * one.values[i]) < 1e-14);
  }
}

TEST_CASE("kernel cache") {
  clear_kernel_cache();
  CHECK(kernel_cache_size() == 0);
  auto a = HankelKernel::get(0.3, grid(), grid());
  auto b = HankelKernel::get(0.3, grid(), grid());
  CHECK(a.get() == b.get());
  CHECK(kernel_cache_size() == 1);
}

TEST_CASE("bandlimit_project") {
  const double lambda = 0.25;
  auto f = RadialFunction::sample(grid(), gaussian);
  auto s = hankel(f, lambda);
  auto once = bandlimit_project(s, 1.5);
  auto twice = bandlimit_project(once, 1.5);
  CHECK(std::equal(once.values().begin(), once.values().end(), twice.values().begin()));
  CHECK(once.bandlimit() == 1.5);
  for (std::size_t i = 0; i < grid().size(); ++i)
    if (grid().nodes()[i] > 1.5) CHECK(once.values()[i] == 0.0);

  auto all = bandlimit_project(s, 100.0);
  CHECK(std::equal(all.values().begin(), all.values().end(), s.values().begin()));

  // ||f - P f||_2^2 = int_{r > sigma} e^{-r^2} d nu, evaluated on the spectral side (Parseval).
  // sigma sits on panel edges of the default grid so the quadrature of the tail stays exact.
  const double b = 1.0 / (std::pow(2.0, lambda) * boost::math::tgamma(lambda + 1));
  for (double sigma : {0.25, 0.5, 1.0, 1.0 + 29.0 * 8 / 112}) {
    auto rest = s - bandlimit_project(s, sigma);
    const double measured = lp_norm(rest.values(), grid(), 2.0, lambda);
    const double tail = std::sqrt(b * oracle::integrate_to_infinity(
                                          [&](double r) { return std::exp(-r * r) * std::pow(r, 2 * lambda + 1); }, sigma));
    CAPTURE(sigma);
    CHECK(std::abs(measured - tail) < 1e-7);
  }
  // Physical side: close, but the slowly decaying remainder beyond rmax is not seen.
  auto proj = inverse_hankel(bandlimit_project(s, 1.0));
  std::vector<double> diff(f.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f.values[i] - proj.values[i];
  const double tail1 = std::sqrt(b * oracle::integrate_to_infinity(
                                         [&](double r) { return std::exp(-r * r) * std::pow(r, 2 * lambda + 1); }, 1.0));
  CHECK(lp_norm(diff, grid(), 2.0, lambda) == doctest::Approx(tail1).epsilon(1e-2));
}

TEST_CASE("spectrum algebra") {
  auto s = hankel(RadialFunction::sample(grid(), gaussian), 1.0);
  auto sum = s + s;
  auto diff = sum - s;
  CHECK(max_abs_diff(diff.values(), s.values()) < 1e-15);
  auto sc = s.scaled(3.0);
  CHECK(sc.values()[10] == 3.0 * s.values()[10]);
  auto flagged = s.with_truncation_flag(true);
  CHECK(flagged.truncation_suspect());
  auto other = hankel(RadialFunction::sample(grid(), gaussian), 2.0);
  CHECK_THROWS(s - other);
}

TEST_CASE("spectrum CSV round trip") {
  auto s = bandlimit_project(hankel(RadialFunction::sample(grid(), gaussian), 0.75), 2.0);
  std::stringstream ss;
  write_spectrum_csv(ss, s);
  auto back = read_spectrum_csv(ss);
  CHECK(back.lambda() == 0.75);
  CHECK(back.bandlimit() == 2.0);
  CHECK(std::equal(back.values().begin(), back.values().end(), s.values().begin()));
}

TEST_CASE("rank-one Dunkl kernel") {
  for (double k : {0.0, 0.3, 0.75, 2.0}) {
    for (double y : {-3.0, 0.0, 1.5}) CHECK(dunkl_kernel_1d(k, 0.0, y) == std::complex<double>(1.0, 0.0));
  }
  for (double x = -5.0; x <= 5.0; x += 0.37)
    for (double y = -5.0; y <= 5.0; y += 0.41)
      CHECK(std::abs(dunkl_kernel_1d(0.0, x, y) - std::exp(std::complex<double>(0.0, x * y))) < 1e-10);

  // Closed form against an RK4 solution of the defining system.
  for (double k : {0.75, 0.3, 1.6}) {
    DunklKernel1D e(k);
    for (auto [x, y] : {std::pair{1.0, 2.0}, {-2.5, 1.3}, {4.0, -3.0}, {0.2, 5.0}}) {
      const auto ref = oracle::dunkl_kernel_rk4(k, x, y);
      CAPTURE(k);
      CAPTURE(x);
      CAPTURE(y);
      CHECK(std::abs(e(x, y) - ref) < 1e-9);
    }
  }

  // Averaging identity: (e(x, y) + e(x, -y)) / 2 = j_{k - 1/2}(|x y|).
  for (double k : {0.25, 0.75, 3.0})
    for (double x : {-4.2, -1.0, 0.5, 3.3})
      for (double y : {-2.0, 0.7, 4.9}) {
        const auto avg = (dunkl_kernel_1d(k, x, y) + dunkl_kernel_1d(k, x, -y)) / 2.0;
        CHECK(std::abs(avg - oracle::bessel_norm_boost(k - 0.5, std::abs(x * y))) < 1e-8);
      }
  CHECK_THROWS(DunklKernel1D(-0.1));
}

TEST_CASE("rank-one Dunkl transform") {
  LineGrid line(make_grid(20.0, 512));
  const double k = 0.75;
  auto g = LineFunction::sample(line, [](double x) { return std::exp(-x * x / 2); });
  auto fg = dunkl_transform_1d(g, k);
  double err = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i)
    err = std::max(err, std::abs(fg.values[i] - std::exp(-line.nodes()[i] * line.nodes()[i] / 2)));
  CHECK(err < 1e-7);

  // Even functions: transform of the profile at lambda = k - 1/2.
  auto profile = [](double x) { return x * x * std::exp(-x * x / 2); };
  auto even = LineFunction::sample(line, profile);
  auto fe = dunkl_transform_1d(even, k);
  auto he = hankel(RadialFunction::sample(line.half(), profile), k - 0.5);
  const std::size_t n = line.half().size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(fe.values[n + i] - std::complex<double>(he.values()[i], 0.0)) < 1e-8);
    CHECK(std::abs(fe.values[n - 1 - i] - std::complex<double>(he.values()[i], 0.0)) < 1e-8);
  }

  auto zero = LineFunction::sample(line, [](double) { return 0.0; });
  for (auto v : dunkl_transform_1d(zero, k).values) CHECK(v == std::complex<double>(0.0, 0.0));

  // Round trip on an asymmetric function.
  auto odd = LineFunction::sample(line, [](double x) { return (1.0 + x) * std::exp(-x * x / 2); });
  auto back = inverse_dunkl_transform_1d(dunkl_transform_1d(odd, k), k);
  double rt = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i) rt = std::max(rt, std::abs(back.values[i] - odd.values[i]));
  CHECK(rt < 1e-6);
}
