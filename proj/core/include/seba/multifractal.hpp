#pragma once

// Spectral measures of new eigenvalues, their moment sums and Renyi
// entropies, the scaling parameter N_lambda, fractal exponents D_q in the
// weak and strong coupling regimes, and the ground-state exponents built
// from Epstein's zeta function.

#include <cstdint>
#include <span>
#include <vector>

#include "seba/spectral.hpp"
#include "seba/zeta.hpp"

namespace seba::multifractal {

/// Mass of one shell n, shared equally by its `points` lattice points.
struct Atom {
  std::uint64_t n = 0;
  double mass = 0.0;
  std::uint64_t points = 1;
};

struct SpectralMeasure {
  double lambda = 0.0;
  std::vector<Atom> atoms;  // ascending n, all masses > 0
  /// Estimated mass of the shells left out; sum of masses plus this is 1 to
  /// rounding.
  double tail_mass_bound = 0.0;
  /// Normalizer zeta_lambda(2) (1 for measures built by hand).
  double normalizer = 1.0;
  /// Certified relative error of the normalizer.
  double normalizer_rel_error = 0.0;
  /// Certified upper bound on the true mass outside the atoms.
  double neglected_mass_bound = 0.0;
};

/// mu_lambda on shells: mass(n) = r2(n) (n - lambda)^{-2} / zeta_lambda(2),
/// over the narrowest window around lambda whose neglected mass is certified
/// to be at most tol. Throws NearSingularError within 1e-9 of a shell and
/// DomainError unless 0 < tol < 1.
SpectralMeasure spectral_measure(double lambda, double tol = 1e-6);

/// Measure from explicit atoms. Masses must be positive and sum to 1 within
/// 1e-12.
SpectralMeasure make_measure(std::vector<Atom> atoms);
SpectralMeasure point_mass();
/// Uniform on `count` atoms of one point each.
SpectralMeasure uniform_measure(std::size_t count);
/// All mass on shell m, spread over its r2(m) lattice points.
SpectralMeasure single_shell(std::uint64_t m);

struct MomentValue {
  double value = 0.0;
  /// Certified absolute error.
  double error = 0.0;
};

/// M_q = sum over lattice points of mu^q, i.e. sum_n points (mass / points)^q.
/// Requires q > 1; for the q -> 1 limit use shannon_entropy.
double moment_sum(const SpectralMeasure& mu, double q);
/// moment_sum with the error due to the truncated tail and the normalizer.
MomentValue moment_sum_certified(const SpectralMeasure& mu, double q);

/// zeta_lambda(2q) / zeta_lambda(2)^q from two shifted zeta sums, each
/// truncated to tol relative to the shells within 8 of lambda.
MomentValue moment_via_zeta(double lambda, double q, double tol = 1e-10);

/// H_q = log(M_q) / (1 - q), q > 1.
double renyi_entropy(const SpectralMeasure& mu, double q);
/// -sum over lattice points of mu log mu.
double shannon_entropy(const SpectralMeasure& mu);

/// Normal order (log m)^{log(2)/2} of r2 at a representable m >= 3.
double n_lambda_weak(std::uint64_t m);

/// Spectral average over members in the window of the number of lattice
/// points with ||xi|^2 - lambda| <= <Delta>, where <Delta> is the mean
/// distance of those members. Requires at least 10 members.
double n_lambda_strong(const spectral::NewEigenvalueSequence& seq,
                       spectral::Window window);

struct ExponentEstimate {
  double q = 0.0;
  double H_q = 0.0;
  double log_N = 0.0;
  double D_q = 0.0;  // H_q / log_N
  std::size_t samples = 0;
};

enum class Normalization {
  /// log of the averaged normal order (log m)^{log(2)/2} of the nearest shells
  weak_normal_order,
  /// log n_lambda_strong over the window
  strong_annulus,
  /// log of the averaged multiplicity r2(m) of the nearest shells
  nearest_multiplicity,
};

struct DqOptions {
  Normalization normalization = Normalization::strong_annulus;
  /// Members used for the entropy average, picked by a fixed stride.
  std::size_t max_samples = 2000;
  /// Relative accuracy of the zeta sums behind each H_q.
  double rel_tol = 1e-6;
};

/// H_q averaged over members of the window divided by log N_lambda.
ExponentEstimate dq_estimate(const spectral::NewEigenvalueSequence& seq,
                             double q, spectral::Window window,
                             const DqOptions& options = {});
/// One estimate per q, sharing the sieve and the N_lambda estimate; the
/// result is sorted by q.
std::vector<ExponentEstimate> dq_estimates(
    const spectral::NewEigenvalueSequence& seq, std::span<const double> q,
    spectral::Window window, const DqOptions& options = {});

/// (1/(2 alpha)) (1 - 1/(2q)) log 2 for alpha in (1/4, 1/2) and
/// q in ((1 - log 2)/(2 - 4 alpha), 1/(2 - 4 alpha)].
double theoretical_dq(double alpha, double q);

/// Admissible q interval (exclusive lower end, inclusive upper end).
struct QRange {
  double lo = 0.0;
  double hi = 0.0;
};
QRange theoretical_q_range(double alpha);

/// d*_q = zeta_Q(2q); PoleError at q = 1/2.
double d_star(const zeta::QuadraticForm& form, double q);

/// D*_q = log(|d*_q| / |d*_1|^q) / (1 - q), with the value at q = 1 given by
/// its limit log zeta_Q(2) - 2 zeta_Q'(2) / zeta_Q(2).
double d_star_exponent(const zeta::QuadraticForm& form, double q);

/// zeta_Q'(s) for real s != 1 by Richardson-extrapolated central differences.
double epstein_derivative(const zeta::QuadraticForm& form, double s);

/// |D*_{1/2-q} - ((1-q)/(1/2+q)) (D*_q + [log phi_Q(2q) + (2q - 1/2)
/// log zeta_Q(2)] / (1 - q))|. Throws PoleError when 2q is an integer (then
/// q or 1/2 - q hits the pole at 1/2, the removable point 1, or a pole of
/// phi_Q).
double symmetry_check(const zeta::QuadraticForm& form, double q);

}  // namespace seba::multifractal
