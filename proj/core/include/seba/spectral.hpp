#pragma once

// Spectrum of the square torus with a point scatterer: the Laplace
// eigenvalues, the new eigenvalues interlacing them, and the distance
// statistics of new eigenvalues to the nearest Laplace eigenvalue.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace seba::spectral {

struct LaplaceEigenvalue {
  std::uint64_t eigenvalue = 0;
  std::uint64_t multiplicity = 0;
  friend bool operator==(const LaplaceEigenvalue&, const LaplaceEigenvalue&) = default;
};

/// Distinct Laplace eigenvalues n <= x of the square torus with multiplicity
/// r2(n).
std::vector<LaplaceEigenvalue> laplace_spectrum(double x);

/// A perturbed eigenvalue together with its nearest unperturbed neighbour.
struct NewEigenvalue {
  double lambda = 0.0;
  std::uint64_t nearest_laplace = 0;
  /// |lambda - nearest_laplace|; ties go to the lower neighbour.
  double delta = 0.0;
};

enum class RegimeMode { secular, synthetic };

struct CouplingRegime {
  RegimeMode mode = RegimeMode::secular;
  /// Coupling exponent; set for synthetic sequences.
  std::optional<double> alpha;
  /// Extension parameter; set for secular sequences.
  std::optional<double> coupling;
};

struct NewEigenvalueSequence {
  CouplingRegime regime;
  std::vector<NewEigenvalue> values;  // strictly increasing lambda
};

/// Closed real interval.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct SecularOptions {
  /// Bound on the error of the far-tail estimate of the secular sum.
  double tail_tolerance = 1e-6;
};

/// The regularized point-scatterer resolvent trace
///   F(lambda) = sum_n r2(n) [1/(n - lambda) - n/(n^2 + 1)]
/// restricted to spectral parameters inside a window. F is strictly
/// increasing between consecutive Laplace eigenvalues, running from -inf to
/// +inf, so F(lambda) = c has exactly one root in every gap.
///
/// Evaluation splits the shells into a near band around each tile of gaps
/// (summed exactly), a far field expanded in powers of the offset from the
/// tile centre, a global far field beyond four times the window expanded in
/// powers of lambda, and an integral tail past the cutoff.
class SecularFunction {
 public:
  /// Requires 0 <= lo < hi <= 1e6.
  explicit SecularFunction(Window window, SecularOptions options = {});
  ~SecularFunction();
  SecularFunction(SecularFunction&&) noexcept;
  SecularFunction& operator=(SecularFunction&&) noexcept;

  /// Consecutive distinct Laplace eigenvalues (m, m') with lo <= m, m' <= hi.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& gaps() const;

  /// F(lambda) for lambda strictly inside one of the gaps.
  long double value(long double lambda) const;
  long double derivative(long double lambda) const;

  /// Rigorous bound on the error of the integral tail estimate.
  double tail_bound() const;
  /// Largest shell summed explicitly.
  std::uint64_t cutoff() const;

  /// Root of F(lambda) = coupling in gap index i.
  NewEigenvalue solve_gap(std::size_t i, double coupling) const;

 private:
  struct Impl;
  std::unique_ptr<const Impl> impl_;
};

/// One new eigenvalue per gap inside the window, found by bisection to
/// 1e-12 of the gap width followed by three Newton steps kept inside the
/// bracket. Gaps are solved in parallel; the order of the result is
/// ascending and independent of the schedule.
std::vector<NewEigenvalue> solve_secular(Window window, double coupling,
                                         SecularOptions options = {});
std::vector<NewEigenvalue> solve_secular(const SecularFunction& f,
                                         double coupling);

/// Synthetic strong-coupling sequence: for consecutive representable
/// m_k < m_{k+1} <= x_max with m_k >= 2, places
///   lambda_k = m_k + min(u_k (log m_k)^alpha, (m_{k+1} - m_k) / 2)
/// with u_k uniform on [1/2, 3/2] from a seeded 64-bit Mersenne twister.
/// Requires alpha in (-1/2, 1/2] and x_max >= 100.
NewEigenvalueSequence synthesize_sequence(double alpha, double x_max,
                                          std::uint64_t seed);

/// Average of delta over members with lambda <= x. Throws DomainError when
/// there are none.
double mean_distance(std::span<const NewEigenvalue> values, double x);
double mean_distance(const NewEigenvalueSequence& seq, double x);

/// Members with lambda inside the closed window, as a contiguous view.
std::span<const NewEigenvalue> members_in(const NewEigenvalueSequence& seq,
                                          Window window);

}  // namespace seba::spectral
