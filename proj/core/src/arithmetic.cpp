#include "seba/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "seba/error.hpp"

namespace seba::arithmetic {

namespace {

using u64 = std::uint64_t;
__extension__ using u128 = unsigned __int128;

constexpr u64 kSegment = u64{1} << 20;
constexpr u64 kTableLimit = u64{1} << 40;
// Brent iterations allowed per split attempt before giving up.
constexpr u64 kRhoBudget = u64{1} << 22;

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// floor(sqrt(n)) exactly.
u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// ceil(sqrt(n)) exactly.
u64 isqrt_ceil(u64 n) {
  const u64 r = isqrt(n);
  return r * r == n ? r : r + 1;
}

// Splits an odd composite n; returns 0 when the budget runs out.
u64 pollard_brent(u64 n, u64 seed) {
  u64 y = seed % n;
  const u64 c = (seed * 0x9E3779B97F4A7C15ULL) % (n - 1) + 1;
  constexpr u64 kBatch = 128;
  u64 g = 1;
  u64 r = 1;
  u64 q = 1;
  u64 x = 0;
  u64 ys = 0;
  u64 spent = 0;
  auto step = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = step(y);
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      const u64 lim = std::min(kBatch, r - k);
      for (u64 i = 0; i < lim; ++i) {
        y = step(y);
        q = mul_mod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += lim;
    }
    spent += r;
    if (spent > kRhoBudget) return 0;
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = step(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? 0 : g;
}

void factor_into(u64 n, u64 original, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  for (u64 seed = 2; seed < 2 + 16; ++seed) {
    const u64 d = pollard_brent(n, seed);
    if (d != 0) {
      factor_into(d, original, primes);
      factor_into(n / d, original, primes);
      return;
    }
  }
  throw UnfactoredError(original, n);
}

// Adds r2 contributions of lattice points with lo <= x^2 + y^2 < hi into
// counts[n - lo].
template <typename Count>
void sieve_segment(u64 lo, u64 hi, Count* counts) {
  for (u64 x = 0; x * x < hi; ++x) {
    const u64 xx = x * x;
    const u64 y_begin = lo > xx ? isqrt_ceil(lo - xx) : 0;
    const u64 weight_x = x == 0 ? 1 : 2;
    for (u64 y = y_begin;; ++y) {
      const u64 n = xx + y * y;
      if (n >= hi) break;
      counts[n - lo] += static_cast<Count>(weight_x * (y == 0 ? 1 : 2));
    }
  }
}

void check_range(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("expected a finite non-negative bound, got " +
                      std::to_string(x));
  }
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<PrimePower> factorize(u64 n) {
  if (n == 0) throw DomainError("cannot factor 0");
  std::vector<u64> primes;
  u64 rest = n;
  for (u64 p = 2; p < 1024 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      primes.push_back(p);
      rest /= p;
    }
  }
  factor_into(rest, n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

u64 r2(u64 n) {
  if (n == 0) return 1;
  u64 product = 4;
  for (const auto& [p, e] : factorize(n)) {
    if (p % 4 == 3) {
      if (e % 2 == 1) return 0;
    } else if (p % 4 == 1) {
      product *= e + 1;
    }
  }
  return product;
}

R2Table::R2Table(u64 lo, u64 hi) : lo_(lo), hi_(std::max(lo, hi)) {
  if (hi_ - lo_ > kMaxTableEntries) {
    throw CapacityError("r2 table of " + std::to_string(hi_ - lo_) +
                        " entries exceeds the limit of " +
                        std::to_string(kMaxTableEntries));
  }
  if (hi_ > kTableLimit) {
    throw CapacityError("r2 table upper end " + std::to_string(hi_) +
                        " exceeds 2^40");
  }
  counts_.assign(hi_ - lo_, 0);
  for (u64 seg = lo_; seg < hi_; seg += kSegment) {
    const u64 seg_hi = std::min(hi_, seg + kSegment);
    sieve_segment(seg, seg_hi, counts_.data() + (seg - lo_));
  }
}

u64 R2Table::at(u64 n) const {
  if (n < lo_ || n >= hi_) {
    throw DomainError("r2 table lookup " + std::to_string(n) +
                      " outside [" + std::to_string(lo_) + ", " +
                      std::to_string(hi_) + ")");
  }
  return counts_[n - lo_];
}

void for_each_shell(u64 lo, u64 hi,
                    const std::function<void(const LatticeShell&)>& visit) {
  if (hi > kTableLimit) {
    throw CapacityError("shell enumeration beyond 2^40 is not supported");
  }
  std::vector<std::uint16_t> buffer;
  for (u64 seg = lo; seg < hi; seg += kSegment) {
    const u64 seg_hi = std::min(hi, seg + kSegment);
    buffer.assign(seg_hi - seg, 0);
    sieve_segment(seg, seg_hi, buffer.data());
    for (u64 i = 0; i < buffer.size(); ++i) {
      if (buffer[i] != 0) visit({seg + i, buffer[i]});
    }
  }
}

std::vector<LatticeShell> shells_up_to(double x) {
  check_range(x);
  const long double top = std::floor(static_cast<long double>(x));
  if (top >= static_cast<long double>(kMaxTableEntries)) {
    throw CapacityError("shells_up_to(" + std::to_string(x) +
                        ") exceeds the sieve capacity of " +
                        std::to_string(kMaxTableEntries));
  }
  std::vector<LatticeShell> shells;
  for_each_shell(0, static_cast<u64>(top) + 1,
                 [&](const LatticeShell& s) { shells.push_back(s); });
  return shells;
}

namespace {

// Integer range [first, last] of n with |n - lambda| <= width, n >= 0.
// Returns false when the range is empty.
bool annulus_range(double lambda, double width, u64& first, u64& last) {
  if (!std::isfinite(lambda) || !std::isfinite(width) || width <= 0.0) {
    throw DomainError("annulus requires finite lambda and width > 0");
  }
  const long double lo = std::ceil(static_cast<long double>(lambda) - width);
  const long double hi = std::floor(static_cast<long double>(lambda) + width);
  if (hi < 0.0L || hi < lo) return false;
  if (hi >= static_cast<long double>(kTableLimit)) {
    throw CapacityError("annulus beyond 2^40 is not supported");
  }
  first = lo < 0.0L ? 0 : static_cast<u64>(lo);
  last = static_cast<u64>(hi);
  return first <= last;
}

}  // namespace

AnnulusCount annulus_count(double lambda, double width) {
  AnnulusCount out{lambda, width, 0};
  u64 first = 0;
  u64 last = 0;
  if (!annulus_range(lambda, width, first, last)) return out;
  const u64 span = last - first + 1;
  // Short windows far out: factoring each n is cheaper than a sieve pass,
  // which costs about sqrt(last) for the row loop alone.
  if (span * 64 < isqrt(last)) {
    for (u64 n = first; n <= last; ++n) out.count += r2(n);
  } else {
    for_each_shell(first, last + 1,
                   [&](const LatticeShell& s) { out.count += s.r2; });
  }
  return out;
}

u64 annulus_count(const R2Table& table, double lambda, double width) {
  u64 first = 0;
  u64 last = 0;
  if (!annulus_range(lambda, width, first, last)) return 0;
  if (!table.covers(first, last + 1)) {
    throw CapacityError("annulus [" + std::to_string(first) + ", " +
                        std::to_string(last) + "] not covered by r2 table");
  }
  u64 count = 0;
  for (u64 n = first; n <= last; ++n) count += table[n];
  return count;
}

u64 representable_count(u64 x) {
  u64 count = 0;
  if (x == 0) return 0;
  for_each_shell(1, x + 1, [&](const LatticeShell&) { ++count; });
  return count;
}

double landau_ratio(double x) {
  if (!std::isfinite(x) || x < 10.0) {
    throw DomainError("landau_ratio requires x >= 10");
  }
  const auto top = static_cast<u64>(std::floor(x));
  const auto b = static_cast<long double>(representable_count(top));
  return static_cast<double>(b * std::sqrt(std::log(static_cast<long double>(x))) /
                             static_cast<long double>(x));
}

NormalOrderSummary summarize(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
  };
  return {sorted.size(), quantile(0.5), quantile(0.25), quantile(0.75)};
}

NormalOrderSummary normal_order_exponent(u64 n_low, u64 n_high) {
  if (n_low < 3 || n_high < n_low) {
    throw DomainError("normal_order_exponent requires 3 <= n_low <= n_high");
  }
  std::vector<double> values;
  for_each_shell(n_low, n_high + 1, [&](const LatticeShell& s) {
    const double n = static_cast<double>(s.n);
    values.push_back(std::log(static_cast<double>(s.r2)) /
                     std::log(std::log(n)));
  });
  if (values.empty()) {
    throw DomainError("no representable integers in [" +
                      std::to_string(n_low) + ", " + std::to_string(n_high) +
                      "]");
  }
  return summarize(values);
}

double lattice_remainder_slope(double stretch) {
  return std::numbers::sqrt2 * std::numbers::pi * stretch;
}

double lattice_remainder_bound(double x, double stretch) {
  return lattice_remainder_slope(stretch) * std::sqrt(std::max(x, 0.0)) +
         std::numbers::pi / 2.0;
}

}  // namespace seba::arithmetic
