#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "doctest.h"
#include "dunkl/operators.hpp"
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

Spectrum gaussian_spectrum(double lambda) { return hankel(RadialFunction::sample(grid(), gaussian), lambda); }

bool bitwise_equal(const Spectrum& a, const Spectrum& b) {
  return std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("cutoff eta") {
  auto eta = make_eta();
  CHECK(eta(0.0) == 1.0);
  CHECK(eta(0.5) == 1.0);
  CHECK(eta(1.0) == 1.0);
  CHECK(eta(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eta(2.0) == 0.0);
  CHECK(eta(3.0) == 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = eta(1.0 + i / 1000.0);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  // Smooth symmetry about the midpoint.
  for (double u : {0.1, 0.3, 0.45}) CHECK(eta(1.5 - u) + eta(1.5 + u) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("generalized translation") {
  const double lambda = 0.75;
  auto s = gaussian_spectrum(lambda);
  auto tiny = translate_T(s, 1e-9);
  for (std::size_t i = 0; i < grid().size(); ++i) CHECK(std::abs(tiny.values()[i] - s.values()[i]) < 1e-8);

  // (T^t f)(0) = int j(t r) fhat(r) d nu(r) = f_0(t).
  const auto nu = nu_weights(grid(), lambda);
  for (double t : {0.3, 1.0, 2.5}) {
    auto tt = translate_T(s, t);
    std::vector<double> terms(grid().size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = nu[i] * tt.values()[i];
    CHECK(std::abs(pairwise_sum(terms) - gaussian(t)) < 1e-6);
    CHECK(lp_norm(tt.values(), grid(), 2.0, lambda) <= lp_norm(s.values(), grid(), 2.0, lambda));
  }
  auto band = bandlimit_project(s, 2.0);
  CHECK(translate_T(band, 0.4).bandlimit() == 2.0);
}

TEST_CASE("fractional Laplacian") {
  for (double lambda : {0.0, 0.25, 1.0}) {
    auto s = gaussian_spectrum(lambda);
    auto lap = inverse_hankel(frac_laplacian(s, 2.0));
    // -B_lambda f = -(f'' + (2 lambda + 1) f' / t), by central differences.
    const double h = 1e-3;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid().size(); ++i) {
      const double t = grid().nodes()[i];
      if (t < 0.1 || t > 6.0) continue;
      const double d1 = oracle::derivative6(gaussian, t, h);
      const double d2 = (gaussian(t + h) - 2 * gaussian(t) + gaussian(t - h)) / (h * h);
      worst = std::max(worst, std::abs(lap.values[i] + d2 + (2 * lambda + 1) * d1 / t));
    }
    CAPTURE(lambda);
    CHECK(worst < 1e-5);
  }
  auto s = gaussian_spectrum(0.5);
  auto one = frac_laplacian(s, 1.0);
  for (std::size_t i = 0; i < grid().size(); ++i) {
    const double r = grid().nodes()[i];
    CHECK(one.values()[i] == doctest::Approx(r * s.values()[i]).epsilon(1e-15));
  }
  auto ab = frac_laplacian(frac_laplacian(s, 0.7), 1.6);
  auto sum = frac_laplacian(s, 2.3);
  for (std::size_t i = 0; i < grid().size(); ++i)
    CHECK(std::abs(ab.values()[i] - sum.values()[i]) <= 1e-14 * std::abs(sum.values()[i]));
}

TEST_CASE("fractional difference") {
  for (double lambda : {0.0, 0.25, 2.5}) {
    auto s = gaussian_spectrum(lambda);
    for (double t : {0.01, 0.3, 2.0}) CHECK(bitwise_equal(frac_difference(s, t, 2.0), s - translate_T(s, t)));
    CHECK(max_abs(frac_difference(s, 1e-9, 1.0).values()) < 1e-8);
  }
}

TEST_CASE("multiplier compositions commute bit-for-bit") {
  auto s = gaussian_spectrum(0.25);
  std::vector<std::function<Spectrum(const Spectrum&)>> ops{
      [](const Spectrum& x) { return frac_laplacian(x, 1.3); },
      [](const Spectrum& x) { return frac_difference(x, 0.2, 1.5); },
      [](const Spectrum& x) { return translate_T(x, 0.7); },
      [](const Spectrum& x) { return vallee_poussin(x, 3.0); },
      [](const Spectrum& x) { return frac_difference(x, 0.05, 3.0); },
  };
  std::vector<int> order{0, 1, 2, 3, 4};
  const Spectrum reference = ops[4](ops[3](ops[2](ops[1](ops[0](s)))));
  int permutations = 0;
  do {
    Spectrum x = s;
    for (int i : order) x = ops[static_cast<std::size_t>(i)](x);
    CHECK(bitwise_equal(x, reference));
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(permutations == 120);
  CHECK(bitwise_equal(frac_difference(frac_laplacian(s, 1.0), 0.3, 2.0),
                      frac_laplacian(frac_difference(s, 0.3, 2.0), 1.0)));
}

TEST_CASE("series form of the fractional difference") {
  const double lambda = 0.25;
  auto f = RadialFunction::sample(grid(), gaussian);
  auto s = hankel(f, lambda);

  auto n0 = frac_difference_series(f, lambda, 0.4, 1.0, 0);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(n0.value.values[i] - f.values[i]) < 1e-12);

  auto n1 = frac_difference_series(f, lambda, 0.4, 2.0, 1);
  auto direct = inverse_hankel(s - translate_T(s, 0.4));
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(n1.value.values[i] - direct.values[i]) < 1e-12);
  CHECK(n1.certificate < 1e-10);

  for (double m : {0.5, 1.0, 3.0})
    for (double t : {0.1, 0.5, 1.5}) {
      auto series = frac_difference_series(f, lambda, t, m, 64);
      auto mult = inverse_hankel(frac_difference(s, t, m));
      double worst = 0.0;
      for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(series.value.values[i] - mult.values[i]));
      CAPTURE(m);
      CAPTURE(t);
      CHECK(worst <= series.certificate);
      CHECK(series.certificate >= binom_tail_bound(m / 2, 64) * max_abs(f.values));
    }
}

TEST_CASE("convolution") {
  auto a = gaussian_spectrum(1.0);
  auto b = hankel(RadialFunction::sample(grid(), [](double t) { return t * t * std::exp(-t * t); }), 1.0);
  auto zero = a.scaled(0.0);
  CHECK(max_abs(convolve(a, zero).values()) == 0.0);
  CHECK(bitwise_equal(convolve(a, b), convolve(b, a)));
  const double lhs = lp_norm(convolve(a, b).values(), grid(), 2.0, 1.0);
  CHECK(lhs <= lp_norm(a.values(), grid(), 2.0, 1.0) * max_abs(b.values()));
  CHECK_THROWS(convolve(a, gaussian_spectrum(0.5)));
}

TEST_CASE("de la Vallee Poussin operator") {
  auto s = gaussian_spectrum(0.5);
  auto band = bandlimit_project(s, 2.0);
  CHECK(bitwise_equal(vallee_poussin(band, 2.0), band));
  CHECK(bitwise_equal(vallee_poussin(band, 5.0), band));
  auto p = vallee_poussin(s, 1.5);
  CHECK(p.bandlimit() == 3.0);
  for (std::size_t i = 0; i < grid().size(); ++i)
    if (grid().nodes()[i] >= 3.0) CHECK(p.values()[i] == 0.0);
  CHECK(bitwise_equal(vallee_poussin(s, 1e3), s));
}

TEST_CASE("custom multipliers") {
  auto s = gaussian_spectrum(0.5);
  Multiplier box{[](double r) { return r < 1.0 ? 2.0 : 0.0; }, "box", false, 1.0};
  auto out = apply_multiplier(s, box);
  CHECK(out.bandlimit() == 1.0);
  CHECK(out.values()[0] == 2.0 * s.values()[0]);
  CHECK_THROWS(laplacian_power_multiplier(-1.0));
}

TEST_CASE("grm symbol") {
  for (double lambda : {0.25, 1.0})
    for (double t : {0.1, 1.0})
      for (double freq : {0.01, 0.5, 3.0, 20.0}) {
        CHECK(grm_symbol(lambda, 2.0, 0.0, t, freq) == jm_multiplier(lambda, 2.0, t * freq));
        for (auto [m, r] : {std::pair{2.0, 1.0}, {3.0, 0.5}, {1.0, 1.0}}) {
          const double lhs = jm_multiplier(lambda, m, t * freq);
          const double rhs = std::pow(freq, r) * grm_symbol(lambda, m, r, t, freq);
          CHECK(std::abs(lhs - rhs) <= 1e-14 * std::abs(lhs));
        }
      }
  // Small-frequency behaviour.
  CHECK(grm_symbol(1.0, 2.0, 1.0, 0.5, 1e-6) < 1e-6);
  const double lead = std::pow(0.5 * 0.5 / (4 * 2.0), 0.5);
  CHECK(grm_symbol(1.0, 1.0, 1.0, 0.5, 1e-6) == doctest::Approx(lead).epsilon(1e-6));
  CHECK_THROWS(grm_symbol(1.0, 1.0, 2.0, 0.5, 1.0));
}

TEST_CASE("rank-one translation") {
  LineGrid line(make_grid(20.0, 512));
  auto g = LineFunction::sample(line, [](double x) { return std::exp(-x * x / 2); });

  auto same = translate_tau_1d(g, 0.0, 0.75);
  for (std::size_t i = 0; i < line.size(); ++i) CHECK(std::abs(same.values[i] - g.values[i]) < 1e-6);

  auto shifted = translate_tau_1d(g, 1.0, 0.0);
  for (std::size_t i = 0; i < line.size(); ++i) {
    const double x = line.nodes()[i];
    CHECK(std::abs(shifted.values[i] - std::exp(-(x + 1) * (x + 1) / 2)) < 1e-6);
  }

  // Spherical mean over y = +-t equals T^t on even functions.
  const double k = 0.75;
  const double t = 0.8;
  auto plus = translate_tau_1d(g, t, k);
  auto minus = translate_tau_1d(g, -t, k);
  auto tt = inverse_hankel(translate_T(hankel(RadialFunction::sample(line.half(), gaussian), k - 0.5), t));
  const std::size_t n = line.half().size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto mean = (plus.values[n + i] + minus.values[n + i]) / 2.0;
    CHECK(std::abs(mean - std::complex<double>(tt.values[i], 0.0)) < 1e-7);
  }
}
