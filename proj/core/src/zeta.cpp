#include "seba/zeta.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "seba/error.hpp"
#include "seba/special.hpp"
#include "seba/summation.hpp"

namespace seba::zeta {

namespace {

using u64 = std::uint64_t;
using cld = std::complex<long double>;

constexpr long double kPi = std::numbers::pi_v<long double>;
// Lattice points the direct sums are allowed to visit.
constexpr long double kMaxLatticeRadiusSq = 5.0e7L;
constexpr double kMaxEpsteinModulus = 50.0;

std::string num(double v) {
  std::string s = std::to_string(v);
  return s;
}

// Bound on |#{Q <= u} - pi u| (origin counted), see lattice_remainder_bound.
long double remainder(long double u, double stretch) {
  return static_cast<long double>(arithmetic::lattice_remainder_bound(
      static_cast<double>(u), stretch));
}

long double slope(double stretch) {
  return static_cast<long double>(arithmetic::lattice_remainder_slope(stretch));
}

// Visits lattice points (x, y) with x, y >= 0, (x, y) != 0 and Q(x, y) <= bound
// in a fixed order; weight counts the sign images (+-x, +-y).
template <typename Visit>
void for_each_quadrant_point(const QuadraticForm& q, long double bound,
                             Visit&& visit) {
  const long double a2 = q.a_squared();
  const auto x_max = static_cast<std::int64_t>(std::floor(std::sqrt(bound / a2)));
  for (std::int64_t x = 0; x <= x_max + 1; ++x) {
    const long double row = a2 * static_cast<long double>(x) * x;
    if (row > bound) break;
    auto y_max = static_cast<std::int64_t>(std::floor(std::sqrt((bound - row) * a2)));
    while (q(x, y_max + 1) <= bound) ++y_max;
    while (y_max >= 0 && q(x, y_max) > bound) --y_max;
    const int wx = x == 0 ? 1 : 2;
    for (std::int64_t y = x == 0 ? 1 : 0; y <= y_max; ++y) {
      visit(x, y, wx * (y == 0 ? 1 : 2), q(x, y));
    }
  }
}

void check_lattice_budget(long double bound, double stretch) {
  if (bound * stretch > kMaxLatticeRadiusSq) {
    throw CapacityError("lattice enumeration up to Q <= " +
                        num(static_cast<double>(bound)) +
                        " exceeds the enumeration budget");
  }
}

// Upper tail of sum f(Q) over Q > x, f(u) = (u - lambda)^{-s}: integral
// estimate and error bound, with `extra` added to the constant term of the
// remainder bound (1 when the origin is excluded from the count).
std::pair<long double, long double> upper_tail(long double lambda,
                                               long double s, long double x,
                                               double stretch,
                                               long double extra = 0.0L) {
  const long double d = x - lambda;
  const long double estimate = kPi * std::pow(d, 1.0L - s) / (s - 1.0L);
  const long double bound =
      2.0L * (remainder(x, stretch) + extra) * std::pow(d, -s) +
      0.5L * slope(stretch) * std::pow(d, 0.5L - s) / (s - 0.5L);
  return {estimate, bound};
}

// Exact rational p/d (d <= 1e6) for v when one agrees to rounding error.
std::optional<std::pair<u64, u64>> small_rational(long double v) {
  long double x = v;
  u64 h_prev = 1, h = static_cast<u64>(std::floor(x));
  u64 k_prev = 0, k = 1;
  for (int i = 0; i < 64; ++i) {
    const long double approx = static_cast<long double>(h) / k;
    if (std::fabs(approx - v) <= 4.0L * DBL_EPSILON * v) {
      return std::pair{h, k};
    }
    const long double frac = x - std::floor(x);
    if (frac <= 0.0L) break;
    x = 1.0L / frac;
    const auto c = static_cast<u64>(std::floor(x));
    const u64 h_next = c * h + h_prev;
    const u64 k_next = c * k + k_prev;
    if (k_next > 1000000) break;
    h_prev = std::exchange(h, h_next);
    k_prev = std::exchange(k, k_next);
  }
  return std::nullopt;
}

}  // namespace

QuadraticForm::QuadraticForm(double a) : a_(a) {
  if (!std::isfinite(a) || a <= 0.0) {
    throw DomainError("quadratic form parameter a must be finite and > 0, got " +
                      num(a));
  }
  a2_ = static_cast<long double>(a) * a;
}

double QuadraticForm::stretch() const noexcept {
  return std::max(a_, 1.0 / a_);
}

long double QuadraticForm::min_value() const noexcept {
  return std::min(a2_, 1.0L / a2_);
}

// ---------------------------------------------------------------------------
// Shifted zeta of the square lattice.

ShellWindow shell_window(double lambda, double s, u64 first, u64 last) {
  ShellWindow w;
  w.first = first;
  w.last = last;
  const long double lam = lambda;
  const long double sl = s;
  if (first > 0) {
    const auto y = static_cast<long double>(first - 1);
    const long double d = lam - y;
    w.lower_estimate =
        kPi * (std::pow(d, 1.0L - sl) - std::pow(lam, 1.0L - sl)) / (sl - 1.0L);
    w.lower_bound = 2.0L * remainder(y, 1.0) * std::pow(d, -sl);
  }
  std::tie(w.upper_estimate, w.upper_bound) =
      upper_tail(lam, sl, static_cast<long double>(last), 1.0);
  return w;
}

ShellWindow plan_shell_window(double lambda, double s, double tol) {
  for (long double half = 16.0L;; half *= 2.0L) {
    const long double lo = std::floor(static_cast<long double>(lambda) - half);
    const u64 first = lo < 0.0L ? 0 : static_cast<u64>(lo) + 1;
    const auto last = static_cast<u64>(std::ceil(lambda + half));
    if (last - first > arithmetic::kMaxTableEntries) {
      throw CapacityError("shifted sum at lambda = " + num(lambda) +
                          ", s = " + num(s) + " cannot reach tolerance " +
                          num(tol) + " within the sieve budget");
    }
    ShellWindow w = shell_window(lambda, s, first, last);
    if (w.bound() <= tol) return w;
  }
}

void check_shift(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    if (lambda == 0.0) throw NearSingularError(lambda, 0.0);
    throw DomainError("spectral parameter must be finite and positive, got " +
                      num(lambda));
  }
  const auto below = static_cast<u64>(std::floor(lambda));
  for (u64 n : {below, below + 1}) {
    if (std::fabs(static_cast<long double>(n) - lambda) < kSingularMargin &&
        arithmetic::r2(n) > 0) {
      throw NearSingularError(lambda, static_cast<double>(n));
    }
  }
}

std::vector<ZetaValue> shifted_zeta(double lambda, std::span<const double> s,
                                    double tol,
                                    const arithmetic::R2Table* table) {
  if (s.empty()) return {};
  check_shift(lambda);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  for (double e : s) {
    if (!(e > 1.0 + 1e-3) || !std::isfinite(e)) {
      throw DomainError("shifted zeta diverges for s = " + num(e) +
                        " (requires s > 1.001)");
    }
  }
  const double s_min = *std::min_element(s.begin(), s.end());
  const ShellWindow plan = plan_shell_window(lambda, s_min, tol);

  std::vector<CompensatedSum> sums(s.size());
  u64 terms = 0;
  const long double lam = lambda;
  auto accumulate = [&](u64 n, u64 r) {
    const long double log_d = std::log(std::fabs(static_cast<long double>(n) - lam));
    const auto weight = static_cast<long double>(r);
    for (std::size_t i = 0; i < s.size(); ++i) {
      sums[i].add(weight * std::exp(-static_cast<long double>(s[i]) * log_d));
    }
    ++terms;
  };
  if (table != nullptr) {
    if (!table->covers(plan.first, plan.last + 1)) {
      throw CapacityError("r2 table does not cover the shifted-sum window");
    }
    for (u64 n = plan.first; n <= plan.last; ++n) {
      if (const u64 r = (*table)[n]; r != 0) accumulate(n, r);
    }
  } else {
    arithmetic::for_each_shell(plan.first, plan.last + 1,
                               [&](const arithmetic::LatticeShell& sh) {
                                 accumulate(sh.n, sh.r2);
                               });
  }

  std::vector<ZetaValue> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const ShellWindow w = shell_window(lambda, s[i], plan.first, plan.last);
    const long double value = sums[i].value() + w.estimate();
    out.push_back({std::complex<double>(static_cast<double>(value), 0.0),
                   static_cast<double>(w.bound()), terms});
  }
  return out;
}

ZetaValue shifted_zeta(double lambda, double s, double tol) {
  const double exps[] = {s};
  return shifted_zeta(lambda, exps, tol).front();
}

// ---------------------------------------------------------------------------
// Epstein zeta.

ZetaValue epstein_zeta(const QuadraticForm& q, std::complex<double> s_in,
                       double tol) {
  const cld s(s_in.real(), s_in.imag());
  if (s_in == std::complex<double>(1.0, 0.0)) {
    throw PoleError("Epstein zeta has a simple pole at s = 1 (residue pi)", 1.0,
                    std::numbers::pi);
  }
  if (!std::isfinite(s_in.real()) || !std::isfinite(s_in.imag()) ||
      std::abs(s_in) > kMaxEpsteinModulus) {
    throw DomainError("epstein_zeta requires finite |s| <= 50");
  }
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

  const cld prefactor = std::pow(cld(kPi), s) * special::rgamma(s);
  const long double sigma_hi =
      std::max(s.real(), 1.0L - s.real());
  const double stretch = q.stretch();

  // Tail of the theta series beyond Q > radius: both incomplete-gamma terms
  // are at most c(sigma) e^{-x} / x with x = pi Q.
  auto tail = [&](long double radius) {
    auto c = [](long double sigma, long double x) {
      return sigma <= 1.0L ? 1.0L : 1.0L / (1.0L - (sigma - 1.0L) / x);
    };
    long double total = 0.0L;
    for (long double u = radius;; u += 1.0L) {
      const long double x = kPi * u;
      const long double count = kPi + 2.0L * (remainder(u + 1.0L, stretch) + 1.0L);
      const long double term = count * std::exp(-x) / x *
                               (c(s.real(), x) + c(1.0L - s.real(), x));
      total += term;
      if (term < 1e-40L || term < total * 1e-20L) break;
    }
    return total;
  };
  long double radius = std::max(1.0L, 2.0L * (sigma_hi + 1.0L) / kPi);
  const long double target = std::min<long double>(tol, 1e-15L) * 1e-2L;
  while (tail(radius) * std::abs(prefactor) > target) radius += 1.0L;
  check_lattice_budget(radius, stretch);

  ComplexCompensatedSum series;
  long double magnitude = 0.0L;
  u64 terms = 0;
  for_each_quadrant_point(q, radius, [&](std::int64_t, std::int64_t, int weight,
                                         long double value) {
    const long double x = kPi * value;
    const cld term = static_cast<long double>(weight) *
                     (special::upper_gamma_scaled(s, x) +
                      special::upper_gamma_scaled(1.0L - s, x));
    series.add(term);
    magnitude += std::abs(term);
    ++terms;
  });

  const cld bracket = -1.0L / (1.0L - s) + series.value();
  const cld value = -std::pow(cld(kPi), s) * special::rgamma(s + 1.0L) +
                    prefactor * bracket;
  const long double rounding =
      64.0L * LDBL_EPSILON * (std::abs(prefactor) * (magnitude + std::abs(bracket)) +
                              std::abs(value));
  const long double bound = tail(radius) * std::abs(prefactor) + rounding;
  return {std::complex<double>(static_cast<double>(value.real()),
                               static_cast<double>(value.imag())),
          static_cast<double>(bound), terms};
}

ZetaValue epstein_direct(const QuadraticForm& q, std::complex<double> s_in,
                         double tol) {
  if (!(s_in.real() > 1.0)) {
    throw DomainError("direct Epstein sum requires Re s > 1");
  }
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const cld s(s_in.real(), s_in.imag());
  const long double sigma = s.real();
  const long double mod_s = std::abs(s);
  const double stretch = q.stretch();
  // Remainder of the count without the origin: |E*(u)| <= e(u) + 1.
  auto bound_at = [&](long double x) {
    const long double e = remainder(x, stretch) + 1.0L;
    return e * std::pow(x, -sigma) +
           mod_s * (slope(stretch) * std::pow(x, 0.5L - sigma) / (sigma - 0.5L) +
                    (kPi / 2.0L + 1.0L) * std::pow(x, -sigma) / sigma);
  };
  long double x = 64.0L;
  while (bound_at(x) > tol) {
    x *= 2.0L;
    check_lattice_budget(x, stretch);
  }
  ComplexCompensatedSum sum;
  u64 terms = 0;
  for_each_quadrant_point(q, x, [&](std::int64_t, std::int64_t, int weight,
                                    long double value) {
    sum.add(static_cast<long double>(weight) * std::exp(-s * std::log(value)));
    ++terms;
  });
  const cld estimate = kPi * std::pow(cld(x), 1.0L - s) / (s - 1.0L);
  const cld value = sum.value() + estimate;
  return {std::complex<double>(static_cast<double>(value.real()),
                               static_cast<double>(value.imag())),
          static_cast<double>(bound_at(x)), terms};
}

std::complex<double> phi_q(const QuadraticForm&, std::complex<double> s_in) {
  if (s_in.imag() == 0.0 && s_in.real() == std::floor(s_in.real())) {
    const double k = s_in.real();
    throw PoleError(
        k <= 0.0 ? "phi_Q has a pole at s = " + num(k) + " (Gamma(s))"
                 : "phi_Q vanishes at s = " + num(k) +
                       " (pole of Gamma(1-s)); the functional equation degenerates",
        k);
  }
  const cld s(s_in.real(), s_in.imag());
  cld value;
  if (s_in.imag() == 0.0) {
    value = std::pow(kPi, 1.0L - 2.0L * s.real()) * std::tgamma(s.real()) /
            std::tgamma(1.0L - s.real());
  } else {
    value = std::pow(cld(kPi), 1.0L - 2.0L * s) * special::gamma(s) *
            special::rgamma(1.0L - s);
  }
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

std::vector<RqValue> rq_values(const QuadraticForm& q, double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("rq_values requires a finite x > 0");
  }
  check_lattice_budget(x, q.stretch());
  std::vector<RqValue> out;
  if (const auto ratio = small_rational(q.a_squared())) {
    // Q * p * d = p^2 x^2 + d^2 y^2 is an integer.
    __extension__ using u128 = unsigned __int128;
    const auto [p, d] = *ratio;
    const long double scale = static_cast<long double>(p) * d;
    std::vector<std::pair<u128, u64>> keyed;
    for_each_quadrant_point(q, x, [&](std::int64_t px, std::int64_t py, int weight,
                                      long double) {
      const u128 key = static_cast<u128>(p) * p * static_cast<u128>(px) * px +
                       static_cast<u128>(d) * d * static_cast<u128>(py) * py;
      keyed.emplace_back(key, static_cast<u64>(weight));
    });
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [key, weight] : keyed) {
      const double value =
          static_cast<double>(static_cast<long double>(key) / scale);
      if (!out.empty() && out.back().value == value) {
        out.back().multiplicity += weight;
      } else {
        out.push_back({value, weight});
      }
    }
    // Values computed in floating point may exceed x by rounding only.
    return out;
  }
  std::vector<std::pair<long double, u64>> values;
  for_each_quadrant_point(q, x, [&](std::int64_t, std::int64_t, int weight,
                                    long double value) {
    values.emplace_back(value, static_cast<u64>(weight));
  });
  std::sort(values.begin(), values.end());
  long double group_start = -1.0L;
  for (const auto& [value, weight] : values) {
    if (!out.empty() && value - group_start <= 1e-9L * group_start) {
      out.back().multiplicity += weight;
    } else {
      group_start = value;
      out.push_back({static_cast<double>(value), weight});
    }
  }
  return out;
}

ZetaValue zeta_star_shifted(const QuadraticForm& q, double lambda, double s,
                            double tol) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw DomainError("zeta_star_shifted requires finite lambda >= 0");
  }
  if (!std::isfinite(s) || !(s > 1.0)) {
    throw DomainError("zeta_star_shifted requires real s > 1");
  }
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double stretch = q.stretch();
  const long double lam = lambda;
  const long double sl = s;
  long double x = std::max(16.0L, 2.0L * lam + 2.0L);
  for (;;) {
    const auto [estimate, bound] = upper_tail(lam, sl, x, stretch, 1.0L);
    if (bound <= tol) break;
    x *= 2.0L;
    check_lattice_budget(x, stretch);
  }
  const auto [estimate, bound] = upper_tail(lam, sl, x, stretch, 1.0L);
  CompensatedSum sum;
  u64 terms = 0;
  for_each_quadrant_point(q, x, [&](std::int64_t, std::int64_t, int weight,
                                    long double value) {
    const long double d = std::fabs(value - lam);
    if (d < kSingularMargin) {
      throw NearSingularError(lambda, static_cast<double>(value));
    }
    sum.add(static_cast<long double>(weight) * std::exp(-sl * std::log(d)));
    ++terms;
  });
  return {std::complex<double>(static_cast<double>(sum.value() + estimate), 0.0),
          static_cast<double>(bound), terms};
}

}  // namespace seba::zeta
