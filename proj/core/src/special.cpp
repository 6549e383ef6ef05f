#include "seba/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "seba/error.hpp"

namespace seba::special {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

bool is_nonpositive_integer(const complex& z) {
  return z.imag() == 0.0L && z.real() <= 0.0L &&
         z.real() == std::floor(z.real());
}

// Lanczos, g = 7, n = 9.
constexpr long double kLanczosG = 7.0L;
constexpr std::array<long double, 9> kLanczos = {
    0.99999999999980993227684700473478L,  676.520368121885098567009190444019L,
    -1259.13921672240287047156078755283L, 771.3234287776530788486528258894L,
    -176.61502916214059906584551354L,     12.507343278686904814458936853L,
    -0.13857109526572011689554707L,       9.984369578019570859563e-6L,
    1.50563273514931155834e-7L};

complex lanczos_gamma(complex z) {
  // z has Re z >= 1/2 here.
  z -= 1.0L;
  complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    x += kLanczos[i] / (z + static_cast<long double>(i));
  }
  const complex t = z + kLanczosG + 0.5L;
  return std::sqrt(2.0L * kPi) * std::pow(t, z + 0.5L) * std::exp(-t) * x;
}

}  // namespace

long double sin_pi(long double x) {
  // Reduce to r in [-1, 1] with x = 2k + r.
  long double r = std::fmod(x, 2.0L);
  if (r > 1.0L) r -= 2.0L;
  if (r < -1.0L) r += 2.0L;
  if (r == 0.0L || r == 1.0L || r == -1.0L) return 0.0L;
  if (r > 0.5L) return std::sin(kPi * (1.0L - r));
  if (r < -0.5L) return -std::sin(kPi * (1.0L + r));
  return std::sin(kPi * r);
}

long double cos_pi(long double x) {
  return sin_pi(x + 0.5L);
}

complex sin_pi(complex z) {
  const long double y = kPi * z.imag();
  return {sin_pi(z.real()) * std::cosh(y), cos_pi(z.real()) * std::sinh(y)};
}

complex gamma(complex z) {
  if (is_nonpositive_integer(z)) {
    throw PoleError("Gamma has a pole at " + std::to_string(
                        static_cast<double>(z.real())),
                    static_cast<double>(z.real()));
  }
  if (z.imag() == 0.0L) return std::tgamma(z.real());
  if (z.real() < 0.5L) {
    return kPi / (sin_pi(z) * lanczos_gamma(1.0L - z));
  }
  return lanczos_gamma(z);
}

complex rgamma(complex z) {
  if (is_nonpositive_integer(z)) return 0.0L;
  if (z.imag() == 0.0L) return 1.0L / std::tgamma(z.real());
  if (z.real() < 0.5L) return sin_pi(z) * lanczos_gamma(1.0L - z) / kPi;
  return 1.0L / lanczos_gamma(z);
}

complex upper_gamma_scaled(complex a, long double x) {
  if (!(x > 0.0L)) {
    throw DomainError("upper_gamma_scaled requires x > 0");
  }
  constexpr long double kEps = 1e-19L;
  constexpr long double kTiny = 1e-4000L;
  constexpr int kMaxIter = 200000;

  if (x < a.real() - 1.0L && !is_nonpositive_integer(a)) {
    // Gamma(a, x) = Gamma(a) - gamma(a, x), with the lower function from its
    // power series: gamma(a, x) = x^a e^{-x} sum_n x^n / (a (a+1) ... (a+n)).
    complex term = 1.0L / a;
    complex sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
      term *= x / (a + static_cast<long double>(n));
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) {
        return std::pow(complex(x), -a) * gamma(a) - std::exp(-x) * sum;
      }
    }
    throw InternalError("lower incomplete gamma series did not converge");
  }

  // Legendre continued fraction, modified Lentz.
  complex b = x + 1.0L - a;
  complex c = 1.0L / kTiny;
  complex d = 1.0L / b;
  complex h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const long double il = static_cast<long double>(i);
    const complex an = -il * (il - a);
    b += 2.0L;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0L / d;
    const complex del = d * c;
    h *= del;
    if (std::abs(del - 1.0L) < kEps) return std::exp(-x) * h;
  }
  throw InternalError("incomplete gamma continued fraction did not converge");
}

}  // namespace seba::special
