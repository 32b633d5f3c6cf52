#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "dunkl/operators.hpp"
#include "dunkl/smoothness.hpp"
#include "oracles.hpp"

using namespace dunkl;

namespace {

const RadialGrid& grid() {
  static const RadialGrid g = make_grid(kDefaultGrid);
  return g;
}

double gaussian(double t) { return std::exp(-t * t / 2); }

Spectrum gaussian_spectrum(double lambda) { return hankel(RadialFunction::sample(grid(), gaussian), lambda); }

Spectrum bump_spectrum(double lambda, double sigma) {
  std::vector<double> v;
  for (double r : grid().nodes()) {
    const double u = r / sigma;
    v.push_back(u < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0);
  }
  return Spectrum(grid(), std::move(v), lambda, sigma);
}

double b_lambda(double lambda) { return 1.0 / (std::pow(2.0, lambda) * boost::math::tgamma(lambda + 1)); }

}  // namespace

TEST_CASE("spectral norms") {
  const double lambda = 0.25;
  auto s = gaussian_spectrum(lambda);
  for (LpIndex p : {LpIndex(1.0), LpIndex(2.0), LpIndex(3.0), LpIndex::infinity()}) {
    const double physical = lp_norm(inverse_hankel(s), p, lambda);
    CHECK(spectral_norm(s, p) == doctest::Approx(physical).epsilon(1e-9));
  }
  std::vector<Spectrum> batch{s, frac_difference(s, 0.3, 1.0), frac_laplacian(s, 2.0)};
  for (LpIndex p : {LpIndex(1.0), LpIndex(2.0), LpIndex::infinity()}) {
    auto many = spectral_norms(batch, p, grid());
    for (std::size_t i = 0; i < batch.size(); ++i)
      CHECK(many[i] == doctest::Approx(spectral_norm(batch[i], p)).epsilon(1e-14));
  }
}

TEST_CASE("query validation") {
  CHECK_NOTHROW(SmoothnessQuery{0.25, 2.0, 1.0, 0.5, 0.1}.validate());
  CHECK_THROWS(SmoothnessQuery{-0.5, 2.0, 1.0, 0.0, 0.1}.validate());
  CHECK_THROWS(SmoothnessQuery{0.0, 2.0, 0.0, 0.0, 0.1}.validate());
  CHECK_THROWS(SmoothnessQuery{0.0, 2.0, 1.0, -1.0, 0.1}.validate());
  CHECK_THROWS(SmoothnessQuery{0.0, 2.0, 1.0, 0.0, 0.0}.validate());
}

TEST_CASE("modulus of smoothness") {
  auto grid_t = modulus_t_grid(0.8);
  CHECK(grid_t.size() == 25);
  CHECK(grid_t.front() == 0.8);
  CHECK(grid_t.back() == doctest::Approx(0.8 / 64).epsilon(1e-15));

  auto s = gaussian_spectrum(1.0);
  CHECK(modulus(s.scaled(0.0), 0.5, 2.0, 2.0).value == 0.0);

  // p = 2 by Parseval: sup_t || (1 - j(t r))^{m/2} e^{-r^2/2} ||_{2, nu}, with Boost Bessel values.
  for (double lambda : {0.0, 1.0})
    for (double m : {1.0, 2.0, 3.0}) {
      auto fh = gaussian_spectrum(lambda);
      const auto nu = nu_weights(grid(), lambda);
      double best = 0.0;
      for (double t : modulus_t_grid(0.3)) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < grid().size(); ++i) {
          const double r = grid().nodes()[i];
          const double sym = std::pow(1.0 - oracle::bessel_norm_boost(lambda, t * r), m);
          acc += nu[i] * sym * std::exp(-r * r);
        }
        best = std::max(best, std::sqrt(static_cast<double>(acc)));
      }
      CAPTURE(lambda);
      CAPTURE(m);
      CHECK(modulus(fh, 0.3, m, 2.0).value == doctest::Approx(best).epsilon(1e-9));
    }

  auto f = RadialFunction::sample(grid(), gaussian);
  auto params = make_params(1, {0.75});
  CHECK(modulus(f, 0.2, 1.0, 1.0, params).value ==
        doctest::Approx(modulus(gaussian_spectrum(0.25), 0.2, 1.0, 1.0).value).epsilon(1e-15));
}

TEST_CASE("modulus properties on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  std::uniform_real_distribution<double> del(0.02, 1.0);
  std::uniform_real_distribution<double> mm(0.5, 3.0);
  std::uniform_real_distribution<double> width(0.5, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double lambda = lam(rng);
    const double delta = del(rng);
    const double m = mm(rng);
    const double a = width(rng);
    const double b = width(rng);
    auto f = hankel(RadialFunction::sample(grid(), [&](double t) { return std::exp(-a * t * t); }), lambda);
    auto g = hankel(RadialFunction::sample(grid(), [&](double t) { return t * t * std::exp(-b * t * t); }), lambda);
    CAPTURE(trial);
    for (LpIndex p : {LpIndex(1.0), LpIndex(2.0), LpIndex::infinity()}) {
      const double wf = modulus(f, delta, m, p).value;
      const double wg = modulus(g, delta, m, p).value;
      CHECK(modulus(f + g, delta, m, p).value <= (wf + wg) * (1 + 1e-12));
      CHECK(modulus(f, 2 * delta, m, p).value >= wf * (1 - 1e-12));
      CHECK(wf <= contraction_constant(m / 2) * spectral_norm(f, p) * (1 + 1e-6));
    }
  }
}

TEST_CASE("best approximation") {
  const double lambda = 0.25;
  auto band = bump_spectrum(lambda, 1.5);
  auto e = best_approx(band, 2.0, 2.0);
  CHECK(e.error == 0.0);
  CHECK_FALSE(e.near_best);
  CHECK(std::equal(e.g_star.values().begin(), e.g_star.values().end(), band.values().begin()));

  auto s = gaussian_spectrum(lambda);
  for (double sigma : {0.5, 1.0, 1.0 + 29.0 * 8 / 112}) {
    const double tail =
        b_lambda(lambda) *
        oracle::integrate_to_infinity([&](double r) { return std::exp(-r * r) * std::pow(r, 2 * lambda + 1); }, sigma);
    const double err = best_approx(s, sigma, 2.0).error;
    CHECK(std::abs(err * err - tail) < 1e-8);
  }
  CHECK(best_approx(s, 1e-7, 2.0).error == doctest::Approx(spectral_norm(s, 2.0)).epsilon(1e-12));

  auto nb = best_approx(s, 2.0, 1.0);
  CHECK(nb.near_best);
  REQUIRE(nb.g_star.bandlimit().has_value());
  CHECK(*nb.g_star.bandlimit() <= 2.0);

  auto seq = best_approx_sequence(s, 8, 2.0);
  REQUIRE(seq.size() == 9);
  CHECK(seq[0] == doctest::Approx(spectral_norm(s, 2.0)).epsilon(1e-14));
  for (int j = 1; j <= 8; ++j) {
    CHECK(seq[j] <= seq[j - 1]);
    CHECK(seq[j] == doctest::Approx(best_approx(s, j, 2.0).error).epsilon(1e-14));
  }
  auto seq1 = best_approx_sequence(s, 4, 1.0);
  for (int j = 1; j <= 4; ++j) CHECK(seq1[j] == doctest::Approx(best_approx(s, j, 1.0).error).epsilon(1e-12));

  auto f = RadialFunction::sample(grid(), gaussian);
  CHECK(best_approx(f, 1.0, 2.0, WeightParams::from_lambda(lambda)).error ==
        doctest::Approx(best_approx(s, 1.0, 2.0).error).epsilon(1e-15));
}

TEST_CASE("realization functional") {
  const double lambda = 1.0;
  auto band = bump_spectrum(lambda, 1.5);
  for (double r : {0.5, 1.0, 2.0}) {
    auto res = realization(band, 0.5, r, 2.0);
    CHECK(res.approx_error == 0.0);
    CHECK(res.value == doctest::Approx(std::pow(0.5, r) * spectral_norm(frac_laplacian(band, r), 2.0)).epsilon(1e-14));
    CHECK(res.sigma_used == 2.0);
  }

  // t -> 0 decay for the Gaussian.
  auto s = gaussian_spectrum(lambda);
  for (LpIndex p : {LpIndex(1.0), LpIndex(2.0), LpIndex::infinity()}) {
    double prev = INFINITY;
    for (int j = 1; j <= 10; ++j) {
      const double v = realization(s, std::ldexp(1.0, -j), 2.0, p).value;
      CHECK(v <= prev);
      prev = v;
    }
    CHECK(prev < 1e-4);
  }

  // Scaling: R_r(2t) <= C 2^r R_r(t) with the harness drift constant as C.
  for (double r : {0.5, 1.0, 2.0})
    for (double t = 0.01; t <= 0.5; t *= 2) {
      const double lhs = realization_infimum(s, 2 * t, r, 2.0);
      const double rhs = std::pow(2.0, r) * realization_infimum(s, t, r, 2.0);
      CHECK(lhs <= 4.0 * rhs);
    }

  auto f = RadialFunction::sample(grid(), gaussian);
  CHECK(realization(f, 0.2, 1.0, 2.0, WeightParams::from_lambda(lambda)).value ==
        realization(s, 0.2, 1.0, 2.0).value);
}

TEST_CASE("K-functional upper bound") {
  auto s = gaussian_spectrum(0.25);
  CHECK(k_functional_upper(s.scaled(0.0), 0.3, 1.0, 2.0) == 0.0);
  for (LpIndex p : {LpIndex(1.0), LpIndex(2.0), LpIndex::infinity()})
    for (double r : {0.5, 1.0, 2.0})
      for (double t : {0.01, 0.1, 0.5, 1.0}) {
        const double k = k_functional_upper(s, t, r, p);
        CHECK(k <= std::pow(t, r) * spectral_norm(frac_laplacian(s, r), p) * 1.05);
        CHECK(k <= spectral_norm(s, p) * (1 + 1e-14));
        CHECK(k <= realization_infimum(s, t, r, p) * (1 + 1e-14));
      }
  const double rstar = realization(s, 0.5, 1.0, 2.0).value;
  const double k = k_functional_upper(s, 0.5, 1.0, 2.0);
  CHECK(k <= rstar);
  CHECK(k >= rstar / 20);
}

TEST_CASE("inverse bounds") {
  std::map<int, double> zeros, ones;
  for (int j = 0; j <= 3; ++j) {
    zeros[j] = 0.0;
    ones[j] = 1.0;
  }
  CHECK(inverse_bound(zeros, 3, 1.0) == 0.0);
  // n^{-m} sum (j+1)^{m-1}: 4/3 for m = 1, (1 + 2 + 3 + 4) / 9 for m = 2.
  CHECK(inverse_bound(ones, 3, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(inverse_bound(ones, 3, 2.0) == doctest::Approx(10.0 / 9.0).epsilon(1e-15));
  std::map<int, double> gap{{0, 1.0}, {2, 1.0}};
  CHECK_THROWS(inverse_bound(gap, 2, 1.0));

  const double lambda = 0.25;
  auto s = gaussian_spectrum(lambda);
  auto seq = best_approx_sequence(s, 16, 2.0);
  std::map<int, double> e;
  for (int j = 0; j <= 16; ++j) e[j] = seq[static_cast<std::size_t>(j)];
  for (int n : {4, 8, 16}) CHECK(inverse_bound(e, n, 1.0) >= modulus(s, 1.0 / n, 1.0, 2.0).value);

  // Sobolev variant against a direct evaluation.
  std::map<int, double> geo;
  for (int j = 0; j <= 30; ++j) geo[j] = std::ldexp(1.0, -j);
  const double n = 4, m = 2, r = 1;
  double head = 0.0, tail = 0.0;
  for (int j = 0; j <= 4; ++j) head += std::pow(j + 1.0, m + r - 1) * geo[j];
  for (int j = 5; j <= 30; ++j) tail += std::pow(static_cast<double>(j), r - 1) * geo[j];
  CHECK(sobolev_inverse_bound(geo, 4, m, r) == doctest::Approx(head / std::pow(n, r) + tail).epsilon(1e-14));
}

TEST_CASE("Marchaud bound") {
  const double m = 2.0;
  auto s = gaussian_spectrum(0.25);
  CHECK(marchaud_bound(s.scaled(0.0), 0.2, m, 2.0, log_grid(0.2, 1.0, 9)) == 0.0);
  auto lg = log_grid(0.1, 1.0, 17);
  CHECK(lg.front() == 0.1);
  CHECK(lg.back() == 1.0);
  CHECK_THROWS(marchaud_bound(s, 0.1, m, 2.0, std::vector<double>{0.1, 0.5}));
  for (double delta : {0.1, 0.2, 0.4}) {
    const double bound = marchaud_bound(s, delta, m, 2.0, log_grid(delta, 1.0, 17));
    const double half = marchaud_bound(s, delta / 2, m, 2.0, log_grid(delta / 2, 1.0, 17));
    CHECK(half >= std::pow(0.5, m) * bound * (1 - 1e-3));
    CHECK(k_functional_upper(s, delta, m, 2.0) <= 20.0 * bound);
  }
}
