#pragma once

// Zeta-type lattice sums: the shifted zeta function of the square torus,
// Epstein's zeta function of a unimodular rectangular form with its
// continuation and functional-equation factor, and the shifted sum over the
// non-zero values of such a form.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "seba/arithmetic.hpp"

namespace seba::zeta {

/// Q(x, y) = a^2 x^2 + a^{-2} y^2 on Z^2; Gram determinant 1 by construction.
class QuadraticForm {
 public:
  /// Throws DomainError unless a is finite and positive.
  explicit QuadraticForm(double a);

  double a() const noexcept { return a_; }
  long double a_squared() const noexcept { return a2_; }
  long double operator()(std::int64_t x, std::int64_t y) const noexcept {
    const auto xl = static_cast<long double>(x);
    const auto yl = static_cast<long double>(y);
    return a2_ * xl * xl + yl * yl / a2_;
  }
  /// max(a, 1/a): ratio of the longer semi-axis of {Q <= 1} to 1.
  double stretch() const noexcept;
  /// Smallest non-zero value, min(a^2, a^-2).
  long double min_value() const noexcept;

 private:
  double a_;
  long double a2_;
};

/// A lattice-sum value with a rigorous bound on its truncation error.
struct ZetaValue {
  std::complex<double> value;
  double tail_bound = 0.0;
  std::uint64_t terms_used = 0;

  double real() const noexcept { return value.real(); }
};

/// Minimum distance from lambda to a representable shell accepted by the
/// shifted sums.
inline constexpr double kSingularMargin = 1e-9;

/// Truncation of sum_n r2(n) |n - lambda|^{-s} to the integers [first, last],
/// with integral estimates (and rigorous error bounds for those estimates) of
/// the two neglected sides n < first and n > last.
struct ShellWindow {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  long double lower_estimate = 0.0L;
  long double lower_bound = 0.0L;
  long double upper_estimate = 0.0L;
  long double upper_bound = 0.0L;

  long double estimate() const noexcept { return lower_estimate + upper_estimate; }
  long double bound() const noexcept { return lower_bound + upper_bound; }
};

/// Tail estimates for exponent s when the exact terms are n in
/// [first, last] (first <= lambda <= last).
ShellWindow shell_window(double lambda, double s, std::uint64_t first,
                         std::uint64_t last);

/// Narrowest symmetric window around lambda, grown by doubling, whose
/// combined tail bound for exponent s is at most tol. Throws CapacityError if
/// the window would exceed the sieve budget.
ShellWindow plan_shell_window(double lambda, double s, double tol);

/// Throws NearSingularError if a representable n has |n - lambda| below
/// kSingularMargin, DomainError if lambda is not finite and positive.
void check_shift(double lambda);

/// zeta_lambda(s) = sum_{n >= 0} r2(n) / |n - lambda|^s for real s > 1 + 1e-3,
/// with tail_bound <= tol.
ZetaValue shifted_zeta(double lambda, double s, double tol);

/// Several exponents sharing one truncation window (chosen for the smallest
/// exponent). When `table` is non-null it must cover the window; otherwise the
/// shells are sieved on the fly.
std::vector<ZetaValue> shifted_zeta(double lambda, std::span<const double> s,
                                    double tol,
                                    const arithmetic::R2Table* table = nullptr);

/// Epstein zeta sum_{(m,n) != 0} Q(m,n)^{-s} continued to all s != 1 by
/// splitting the theta integral at t = 1; the lattice series then converges
/// like exp(-pi Q). Requires |s| <= 50. s = 1 throws PoleError carrying the
/// residue pi.
ZetaValue epstein_zeta(const QuadraticForm& q, std::complex<double> s,
                       double tol = 1e-15);

/// Direct lattice sum for Re s > 1, with an integral tail estimate and a
/// lattice-remainder error bound (<= tol).
ZetaValue epstein_direct(const QuadraticForm& q, std::complex<double> s,
                         double tol);

/// phi_Q(s) = pi^{1-2s} Gamma(s) / Gamma(1-s), the factor in
/// zeta_Q(1-s) = phi_Q(s) zeta_Q(s). Throws PoleError at integers s, where
/// either Gamma(s) has a pole (s <= 0) or the factor vanishes identically
/// (s >= 1) and the relation degenerates.
std::complex<double> phi_q(const QuadraticForm& q, std::complex<double> s);

struct RqValue {
  double value = 0.0;
  std::uint64_t multiplicity = 0;
};

/// Non-zero values of Q on Z^2 up to x with their representation numbers,
/// ascending. Grouping is exact when a^2 is a rational with denominator
/// <= 1e6, otherwise values within relative 1e-9 are merged.
std::vector<RqValue> rq_values(const QuadraticForm& q, double x);

/// zeta*_lambda(s) = sum over non-zero values n of Q of r_Q(n) / |n - lambda|^s,
/// real s > 1, lambda >= 0 at distance >= kSingularMargin from every value.
ZetaValue zeta_star_shifted(const QuadraticForm& q, double lambda, double s,
                            double tol);

}  // namespace seba::zeta
