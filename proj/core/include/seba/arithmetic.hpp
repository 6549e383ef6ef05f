#pragma once

// Sums of two squares: r2(n), shell enumeration, annulus counts and the
// counting statistics of representable integers.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace seba::arithmetic {

/// A circle x^2 + y^2 = n together with its lattice-point count r2(n).
struct LatticeShell {
  std::uint64_t n = 0;
  std::uint64_t r2 = 0;
  friend auto operator<=>(const LatticeShell&, const LatticeShell&) = default;
};

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n);

/// Prime factorization by trial division and Pollard-Brent rho, primes in
/// ascending order. n = 1 gives an empty list. Throws UnfactoredError when the
/// rho iteration budget is exhausted; throws DomainError for n = 0.
std::vector<PrimePower> factorize(std::uint64_t n);

/// Number of (x, y) in Z^2 with x^2 + y^2 = n, via
/// r2(n) = 4 * prod_{p = 1 mod 4} (e_p + 1) when every p = 3 mod 4 has even
/// exponent, and 0 otherwise. r2(0) = 1.
std::uint64_t r2(std::uint64_t n);

/// Largest table the sieve will allocate, in entries.
inline constexpr std::uint64_t kMaxTableEntries = std::uint64_t{1} << 27;

/// r2(n) for every n in a half-open range [lo, hi), filled by marking lattice
/// points rather than by factoring each entry. Immutable once built.
class R2Table {
 public:
  R2Table() = default;
  /// Throws CapacityError when hi - lo exceeds kMaxTableEntries or hi > 2^40
  /// (where 16-bit counts are no longer guaranteed).
  R2Table(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  bool covers(std::uint64_t lo, std::uint64_t hi) const noexcept {
    return lo >= lo_ && hi <= hi_;
  }
  /// Unchecked lookup; n must lie in [lo(), hi()).
  std::uint64_t operator[](std::uint64_t n) const noexcept {
    return counts_[n - lo_];
  }
  /// Checked lookup.
  std::uint64_t at(std::uint64_t n) const;

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::vector<std::uint16_t> counts_;
};

/// Visits every shell with lo <= n < hi and r2(n) > 0 in ascending n, using a
/// segmented lattice sieve whose memory does not grow with the range.
void for_each_shell(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(const LatticeShell&)>& visit);

/// All shells with 0 <= n <= x, ascending. Throws CapacityError past
/// kMaxTableEntries and DomainError for negative or non-finite x.
std::vector<LatticeShell> shells_up_to(double x);

struct AnnulusCount {
  double lambda = 0.0;
  double width = 0.0;
  std::uint64_t count = 0;
};

/// Sum of r2(n) over integers n with |n - lambda| <= width (lower edge clamped
/// at zero), i.e. the number of lattice points in the annulus.
AnnulusCount annulus_count(double lambda, double width);

/// Same as annulus_count but reading r2 from a prebuilt table; the needed
/// integer range must be covered by the table.
std::uint64_t annulus_count(const R2Table& table, double lambda, double width);

/// B(x) = #{1 <= n <= x : r2(n) > 0}.
std::uint64_t representable_count(std::uint64_t x);

/// B(x) * sqrt(log x) / x. Requires x >= 10.
double landau_ratio(double x);

struct NormalOrderSummary {
  std::size_t count = 0;
  double median = 0.0;
  double lower_quartile = 0.0;
  double upper_quartile = 0.0;
};

/// Empirical distribution of log r2(n) / log log n over representable n in
/// [n_low, n_high]. Requires 3 <= n_low <= n_high; an empty window throws.
NormalOrderSummary normal_order_exponent(std::uint64_t n_low,
                                         std::uint64_t n_high);

/// Median and quartiles (linear interpolation between order statistics) of
/// an arbitrary sample. Throws DomainError on an empty sample.
NormalOrderSummary summarize(std::span<const double> samples);

/// Rigorous bound on |#{xi in Z^2 : Q(xi) <= x} - pi x| for the unimodular
/// diagonal form with semi-axis ratio `stretch` = max(a, 1/a):
/// sqrt(2) * pi * stretch * sqrt(x) + pi / 2. The count of lattice points in
/// a convex body differs from its area by at most the Steiner area of a
/// half-diagonal collar.
double lattice_remainder_bound(double x, double stretch = 1.0);

/// Slope of lattice_remainder_bound in sqrt(x): sqrt(2) * pi * stretch.
double lattice_remainder_slope(double stretch = 1.0);

}  // namespace seba::arithmetic
