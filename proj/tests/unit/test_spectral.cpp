#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seba/error.hpp"
#include "seba/spectral.hpp"

using namespace seba;
using namespace seba::spectral;

namespace {

// Representable integers up to x, from the disk histogram.
std::vector<std::uint64_t> representable(std::uint64_t x) {
  const auto h = oracle::r2_histogram(x);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 0; n <= x; ++n) {
    if (h[n]) out.push_back(n);
  }
  return out;
}

// F(lambda) by plain summation to N plus the integral of the rest.
long double secular_brute(const std::vector<std::uint64_t>& hist, long double lambda) {
  const auto n_max = static_cast<long double>(hist.size() - 1);
  long double sum = 0.0L;
  for (std::size_t n = 0; n < hist.size(); ++n) {
    if (!hist[n]) continue;
    const auto x = static_cast<long double>(n);
    sum += hist[n] * (1.0L / (x - lambda) - x / (x * x + 1.0L));
  }
  return sum + std::acos(-1.0L) *
                   std::log(std::sqrt(n_max * n_max + 1.0L) / (n_max - lambda));
}

}  // namespace

TEST_CASE("laplace spectrum") {
  const std::vector<LaplaceEigenvalue> five = {{0, 1}, {1, 4}, {2, 4}, {4, 4}, {5, 8}};
  CHECK(laplace_spectrum(5) == five);
  const std::vector<LaplaceEigenvalue> three = {{0, 1}, {1, 4}, {2, 4}};
  CHECK(laplace_spectrum(3) == three);
  for (const auto& e : laplace_spectrum(1000)) {
    if (e.eigenvalue != 0) CHECK(e.multiplicity >= 4);
  }
}

TEST_CASE("secular function matches direct summation") {
  const auto hist = oracle::r2_histogram(4000000);
  const SecularFunction f({0.0, 1000.0});
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    const auto& gaps = f.gaps();
    const auto [lo, hi] = gaps[rng() % gaps.size()];
    const long double lambda = lo + (hi - lo) * (0.05L + 0.9L * (rng() >> 11) * 0x1.0p-53L);
    const long double got = f.value(lambda);
    const long double ref = secular_brute(hist, lambda);
    // direct summation to 4e6 carries an error of order 1e-5 itself
    CHECK(std::fabs(static_cast<double>(got - ref)) < 2e-4);
    CHECK(f.derivative(lambda) > 0.0L);
  }
  CHECK(f.tail_bound() <= 1e-6);
}

TEST_CASE("secular function is consistent across tiles and windows") {
  const SecularFunction small({0.0, 1000.0});
  const SecularFunction big({500.0, 20000.0});
  for (long double lambda : {600.5L, 777.3L, 999.2L}) {
    CHECK(std::fabs(static_cast<double>(small.value(lambda) - big.value(lambda))) < 1e-7);
  }
}

TEST_CASE("sign change across random gaps") {
  const SecularFunction f({0.0, 10000.0});
  const auto& gaps = f.gaps();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto [lo, hi] = gaps[rng() % gaps.size()];
    const long double w = hi - lo;
    CHECK(f.value(lo + 1e-9L * w) < 0.0L);
    CHECK(f.value(hi - 1e-9L * w) > 0.0L);
  }
}

TEST_CASE("interlacing and nearest-neighbour fields") {
  const auto reps = representable(3000);
  for (double c : {-10.0, 0.0, 10.0}) {
    const auto roots = solve_secular({0.0, 3000.0}, c);
    REQUIRE(roots.size() == reps.size() - 1);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const auto& r = roots[i];
      CHECK(r.lambda > static_cast<double>(reps[i]));
      CHECK(r.lambda < static_cast<double>(reps[i + 1]));
      const double below = r.lambda - static_cast<double>(reps[i]);
      const double above = static_cast<double>(reps[i + 1]) - r.lambda;
      CHECK(r.delta == std::min(below, above));
      CHECK(r.nearest_laplace == (below <= above ? reps[i] : reps[i + 1]));
    }
  }
  const auto one = solve_secular({1.0, 2.0}, 0.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].lambda > 1.0);
  CHECK(one[0].lambda < 2.0);
  CHECK(solve_secular({21.0, 24.0}, 0.0).empty());
}

TEST_CASE("roots move to the gap ends as |c| grows") {
  const auto low = solve_secular({0.0, 500.0}, -1e6);
  const auto mid = solve_secular({0.0, 500.0}, 0.0);
  const auto high = solve_secular({0.0, 500.0}, 1e6);
  const SecularFunction f({0.0, 500.0});
  for (std::size_t i = 0; i < low.size(); ++i) {
    const auto [lo, hi] = f.gaps()[i];
    CHECK(low[i].lambda - static_cast<double>(lo) < 1e-4);
    CHECK(static_cast<double>(hi) - high[i].lambda < 1e-4);
    CHECK(low[i].lambda < mid[i].lambda);
    CHECK(mid[i].lambda < high[i].lambda);
  }
}

TEST_CASE("secular roots satisfy the equation") {
  const SecularFunction f({0.0, 2000.0});
  const auto roots = solve_secular(f, 3.5);
  for (std::size_t i = 0; i < roots.size(); i += 37) {
    const long double lambda = roots[i].lambda;
    const auto [lo, hi] = f.gaps()[i];
    // residual is limited by rounding lambda to double
    const long double slack = f.derivative(lambda) * std::nextafter(roots[i].lambda, 1e300) -
                              f.derivative(lambda) * roots[i].lambda;
    CHECK(std::fabs(static_cast<double>(f.value(lambda) - 3.5L)) <=
          static_cast<double>(4.0L * slack + 1e-9L * f.derivative(lambda) * (hi - lo)));
  }
}

TEST_CASE("weak coupling mean distance") {
  const auto roots = solve_secular({0.0, 10000.0}, -1000.0);
  const double mean = mean_distance(roots, 1e4);
  CHECK(mean * std::sqrt(std::log(1e4)) <= 10.0);
}

TEST_CASE("secular domain") {
  CHECK_THROWS_AS(SecularFunction({0.0, 2e6}), DomainError);
  CHECK_THROWS_AS(SecularFunction({10.0, 5.0}), DomainError);
  CHECK_THROWS_AS(SecularFunction({0.0, 10.0}, {.tail_tolerance = 0.0}), DomainError);
  CHECK_THROWS_AS(solve_secular({0.0, 10.0}, NAN), DomainError);
  const SecularFunction f({0.0, 10.0});
  CHECK_THROWS_AS(f.value(50.5L), DomainError);
}

TEST_CASE("synthetic sequences") {
  const auto a = synthesize_sequence(0.4, 20000, 99);
  const auto b = synthesize_sequence(0.4, 20000, 99);
  const auto c = synthesize_sequence(0.4, 20000, 100);
  REQUIRE(a.values.size() == b.values.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i].lambda == b.values[i].lambda);
    differs = differs || a.values[i].lambda != c.values[i].lambda;
  }
  CHECK(differs);
  CHECK(a.regime.mode == RegimeMode::synthetic);
  CHECK(*a.regime.alpha == 0.4);

  const auto reps = representable(20000);
  // gaps start at m >= 2
  REQUIRE(a.values.size() == reps.size() - 3);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const auto m = reps[i + 2];
    const auto next = reps[i + 3];
    const auto& v = a.values[i];
    const double gap = static_cast<double>(next - m);
    CHECK(v.lambda > static_cast<double>(m));
    CHECK(v.lambda - static_cast<double>(m) <= gap / 2.0);
    if (i > 0) CHECK(v.lambda > a.values[i - 1].lambda);
    // offsets at least u (log m)^alpha with u >= 1/2, unless clamped
    const double floor_offset = 0.5 * std::pow(std::log(static_cast<double>(m)), 0.4);
    if (floor_offset >= gap / 2.0) CHECK(v.delta == gap / 2.0);
    CHECK(v.nearest_laplace == m);  // offsets never pass the midpoint
  }

  CHECK_THROWS_AS(synthesize_sequence(0.6, 1000, 1), DomainError);
  CHECK_THROWS_AS(synthesize_sequence(-0.5, 1000, 1), DomainError);
  CHECK_THROWS_AS(synthesize_sequence(0.4, 50, 1), DomainError);
}

TEST_CASE("synthetic mean distance grows like (log x)^alpha") {
  const auto seq = synthesize_sequence(0.4, 1e6, 2024);
  const double mean = mean_distance(seq, 1e6);
  const double fitted = std::log(mean) / std::log(std::log(1e6));
  CHECK(fitted > 0.2);
  CHECK(fitted < 0.6);
}

TEST_CASE("mean distance and window members") {
  const std::vector<NewEigenvalue> one = {{1.3, 1, 0.3}};
  CHECK(mean_distance(one, 10.0) == doctest::Approx(0.3));
  const std::vector<NewEigenvalue> two = {{1.1, 1, 0.1}, {2.3, 2, 0.3}};
  CHECK(mean_distance(two, 10.0) == doctest::Approx(0.2));
  CHECK(mean_distance(two, 2.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(mean_distance(two, 1.0), DomainError);

  const auto seq = synthesize_sequence(0.2, 1000, 1);
  const auto in = members_in(seq, {100.0, 200.0});
  REQUIRE(!in.empty());
  CHECK(in.front().lambda >= 100.0);
  CHECK(in.back().lambda <= 200.0);
  std::size_t count = 0;
  for (const auto& v : seq.values) {
    if (v.lambda >= 100.0 && v.lambda <= 200.0) ++count;
  }
  CHECK(in.size() == count);
}
