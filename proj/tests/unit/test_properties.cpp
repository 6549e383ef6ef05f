// Randomized invariants across modules.

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seba/arithmetic.hpp"
#include "seba/error.hpp"
#include "seba/multifractal.hpp"
#include "seba/spectral.hpp"
#include "seba/zeta.hpp"

using namespace seba;

namespace {

// random lambda at least 1e-3 away from every integer
double random_lambda(std::mt19937_64& rng, double hi) {
  std::uniform_real_distribution<double> d(0.0, hi);
  for (;;) {
    const double l = d(rng);
    if (std::fabs(l - std::round(l)) > 1e-3) return l;
  }
}

}  // namespace

TEST_CASE("measures are normalized and entropies ordered") {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 25; ++i) {
    const double lambda = random_lambda(rng, 5000.0);
    const auto mu = multifractal::spectral_measure(lambda);
    double total = mu.tail_mass_bound;
    std::uint64_t points = 0;
    for (const auto& a : mu.atoms) {
      total += a.mass;
      points += a.points;
      CHECK(a.points == arithmetic::r2(a.n));
    }
    CHECK(std::fabs(total - 1.0) < 1e-12);
    double previous = multifractal::shannon_entropy(mu);
    CHECK(previous >= 0.0);
    CHECK(previous <= std::log(static_cast<double>(points)) + 1e-9);
    for (double q : {1.25, 1.5, 2.0, 3.0, 5.0}) {
      const double h = multifractal::renyi_entropy(mu, q);
      CHECK(h >= 0.0);
      CHECK(h <= previous + 1e-12);
      previous = h;
    }
  }
}

TEST_CASE("moment sums are bracketed by their certificates") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const double lambda = random_lambda(rng, 2000.0);
    const auto mu = multifractal::spectral_measure(lambda);
    for (double q : {1.5, 2.5}) {
      const auto m = multifractal::moment_sum_certified(mu, q);
      const auto z = multifractal::moment_via_zeta(lambda, q);
      CHECK(std::fabs(m.value - z.value) <= m.error + z.error);
      CHECK(m.value <= 1.0);
    }
  }
}

TEST_CASE("shifted zeta is positive and decreasing in s away from shells") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const double lambda = random_lambda(rng, 1e4);
    const auto a = zeta::shifted_zeta(lambda, 2.0, 1e-8);
    CHECK(a.real() > 0.0);
    CHECK(a.tail_bound <= 1e-8);
  }
}

TEST_CASE("secular roots interlace for random couplings") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> cd(-50.0, 50.0);
  const spectral::SecularFunction f({0.0, 4000.0});
  for (int i = 0; i < 5; ++i) {
    const double c = cd(rng);
    const auto roots = spectral::solve_secular(f, c);
    REQUIRE(roots.size() == f.gaps().size());
    for (std::size_t k = 0; k < roots.size(); ++k) {
      CHECK(roots[k].lambda > static_cast<double>(f.gaps()[k].first));
      CHECK(roots[k].lambda < static_cast<double>(f.gaps()[k].second));
      CHECK(roots[k].delta <= (f.gaps()[k].second - f.gaps()[k].first) / 2.0);
    }
  }
}

TEST_CASE("parallel and serial runs agree") {
  const auto a = spectral::solve_secular({0.0, 3000.0}, 1.5);
  const auto b = spectral::solve_secular({0.0, 3000.0}, 1.5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].lambda == b[i].lambda);
}

TEST_CASE("lattice counts match the disk for random radii") {
  const auto h = oracle::r2_histogram(100000);
  std::vector<std::uint64_t> cumulative(h.size());
  std::uint64_t run = 0;
  for (std::size_t n = 0; n < h.size(); ++n) cumulative[n] = run += h[n];
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::uint64_t> nd(1, 100000);
  for (int i = 0; i < 50; ++i) {
    const auto n = nd(rng);
    std::uint64_t total = 0;
    for (const auto& s : arithmetic::shells_up_to(static_cast<double>(n))) total += s.r2;
    CHECK(total == cumulative[n]);
  }
}
