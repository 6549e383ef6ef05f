#pragma once

#include <complex>

namespace seba::special {

using complex = std::complex<long double>;

/// sin(pi x), exact zero at integers.
long double sin_pi(long double x);
/// cos(pi x), exact zero at half-integers.
long double cos_pi(long double x);
complex sin_pi(complex z);

/// Gamma function. Real arguments go through tgammal; complex arguments use
/// a Lanczos approximation with reflection for Re z < 1/2. Poles raise
/// PoleError.
complex gamma(complex z);

/// 1/Gamma(z), an entire function (exactly zero at 0, -1, -2, ...).
complex rgamma(complex z);

/// x^{-a} Gamma(a, x) for real x > 0 and complex a, where Gamma(a, x) is the
/// upper incomplete gamma function. The power prefactor is divided out so
/// that the value stays O(e^{-x}/x) for large x.
complex upper_gamma_scaled(complex a, long double x);

}  // namespace seba::special
