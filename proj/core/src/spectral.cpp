#include "seba/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "seba/arithmetic.hpp"
#include "seba/error.hpp"
#include "seba/parallel.hpp"
#include "seba/summation.hpp"

namespace seba::spectral {

namespace {

using u64 = std::uint64_t;
constexpr long double kPi = std::numbers::pi_v<long double>;

// Far-field series lengths: tile expansions converge at ratio <= 1/5, the
// global expansion at ratio <= 1/4.
constexpr std::size_t kTileTerms = 28;
constexpr std::size_t kGlobalTerms = 34;
constexpr double kTileMargin = 8.0;
constexpr long double kMaxCutoff = static_cast<long double>(u64{1} << 30);
constexpr double kMaxWindow = 1e6;

struct Shell {
  u64 n;
  long double r2;
};

struct Tile {
  long double lo = 0.0L;
  long double hi = 0.0L;
  long double centre = 0.0L;
  std::vector<Shell> near;
  std::array<long double, kTileTerms> far{};
};

std::string num(double v) { return std::to_string(v); }

}  // namespace

std::vector<LaplaceEigenvalue> laplace_spectrum(double x) {
  std::vector<LaplaceEigenvalue> out;
  for (const auto& s : arithmetic::shells_up_to(x)) out.push_back({s.n, s.r2});
  return out;
}

struct SecularFunction::Impl {
  Window window;
  std::vector<std::pair<u64, u64>> gaps;
  std::vector<std::size_t> gap_tile;
  std::vector<Tile> tiles;
  std::array<long double, kGlobalTerms> global{};
  long double regularizer = 0.0L;
  long double cutoff = 0.0L;
  long double tail_bound = 0.0L;

  const Tile& tile_for(long double lambda) const {
    auto it = std::lower_bound(
        tiles.begin(), tiles.end(), lambda,
        [](const Tile& t, long double v) { return t.hi < v; });
    if (it == tiles.end() || lambda < it->lo) {
      throw DomainError("spectral parameter outside the secular window");
    }
    return *it;
  }

  long double value(const Tile& t, long double lambda) const {
    CompensatedSum sum;
    for (const auto& s : t.near) {
      sum.add(s.r2 / (static_cast<long double>(s.n) - lambda));
    }
    const long double off = lambda - t.centre;
    long double tile_far = 0.0L;
    for (std::size_t k = kTileTerms; k-- > 0;) tile_far = tile_far * off + t.far[k];
    long double global_far = 0.0L;
    for (std::size_t k = kGlobalTerms; k-- > 0;) {
      global_far = global_far * lambda + global[k];
    }
    sum.add(tile_far);
    sum.add(global_far);
    sum.add(-regularizer);
    sum.add(kPi * std::log(std::sqrt(cutoff * cutoff + 1.0L) / (cutoff - lambda)));
    return sum.value();
  }

  long double derivative(const Tile& t, long double lambda) const {
    long double d = 0.0L;
    for (const auto& s : t.near) {
      const long double inv = 1.0L / (static_cast<long double>(s.n) - lambda);
      d += s.r2 * inv * inv;
    }
    const long double off = lambda - t.centre;
    long double tile_far = 0.0L;
    for (std::size_t k = kTileTerms; k-- > 1;) {
      tile_far = tile_far * off + static_cast<long double>(k) * t.far[k];
    }
    long double global_far = 0.0L;
    for (std::size_t k = kGlobalTerms; k-- > 1;) {
      global_far = global_far * lambda + static_cast<long double>(k) * global[k];
    }
    return d + tile_far + global_far + kPi / (cutoff - lambda);
  }
};

namespace {

// Rigorous bound on |sum_{n > X} r2(n) g(n) - pi int_X^inf g| with
// g(u) = (1 + lambda u)/((u - lambda)(u^2 + 1)), valid for X >= 2 lambda.
long double secular_tail_bound(long double x, long double lambda) {
  const long double g = (1.0L + lambda * x) / ((x - lambda) * (x * x + 1.0L));
  const auto e = static_cast<long double>(
      arithmetic::lattice_remainder_bound(static_cast<double>(x)));
  const auto slope =
      static_cast<long double>(arithmetic::lattice_remainder_slope());
  return 2.0L * e * g +
         slope * (std::pow(x, -2.5L) / 2.5L + lambda * std::pow(x, -1.5L) / 1.5L);
}

}  // namespace

SecularFunction::SecularFunction(Window window, SecularOptions options) {
  if (!std::isfinite(window.lo) || !std::isfinite(window.hi) || window.lo < 0.0 ||
      !(window.hi > window.lo) || window.hi > kMaxWindow) {
    throw DomainError("secular window must satisfy 0 <= lo < hi <= 1e6, got [" +
                      num(window.lo) + ", " + num(window.hi) + "]");
  }
  if (!(options.tail_tolerance > 0.0)) {
    throw DomainError("secular tail tolerance must be positive");
  }
  auto impl = std::make_unique<Impl>();
  impl->window = window;
  const long double x1 = window.hi;

  // Cutoff past which the sum is replaced by its integral.
  long double cutoff = std::max(4096.0L, 8.0L * x1 + 64.0L);
  while (secular_tail_bound(cutoff, x1) > options.tail_tolerance) {
    cutoff *= 2.0L;
    if (cutoff > kMaxCutoff) {
      throw CapacityError("secular tail tolerance " +
                          num(options.tail_tolerance) +
                          " needs a cutoff beyond 2^30; loosen the tolerance");
    }
  }
  impl->cutoff = std::floor(cutoff);
  impl->tail_bound = secular_tail_bound(impl->cutoff, x1);

  // Gaps strictly inside the window.
  const auto window_shells = arithmetic::shells_up_to(window.hi);
  for (std::size_t i = 0; i + 1 < window_shells.size(); ++i) {
    const auto m = window_shells[i].n;
    if (static_cast<double>(m) >= window.lo) {
      impl->gaps.emplace_back(m, window_shells[i + 1].n);
    }
  }

  // Tile width balancing the far-field pass per tile against near-band sums.
  const double density = std::max(
      0.05, static_cast<double>(window_shells.size()) / (window.hi + 1.0));
  const double local_extent = 4.0 * window.hi + 64.0;
  const double local_shells = density * local_extent;
  double tile_width = std::sqrt(local_shells * kTileTerms /
                                (250.0 * density * density));
  tile_width = std::clamp(tile_width, 16.0, std::max(16.0, window.hi - window.lo));
  const long double local_limit =
      std::floor(4.0L * x1 + 6.0L * tile_width + 64.0L);

  // Partition gaps into tiles.
  for (std::size_t i = 0; i < impl->gaps.size(); ++i) {
    const auto [m, m_next] = impl->gaps[i];
    if (impl->tiles.empty() ||
        static_cast<double>(m_next) - impl->tiles.back().lo > tile_width) {
      Tile t;
      t.lo = static_cast<long double>(m);
      impl->tiles.push_back(std::move(t));
    }
    impl->tiles.back().hi = static_cast<long double>(m_next);
    impl->gap_tile.push_back(impl->tiles.size() - 1);
  }

  const auto local = arithmetic::shells_up_to(static_cast<double>(local_limit));
  parallel_for(impl->tiles.size(), [&](std::size_t ti) {
    Tile& t = impl->tiles[ti];
    t.centre = 0.5L * (t.lo + t.hi);
    const long double half = 0.5L * (t.hi - t.lo);
    const long double reach = 5.0L * half + kTileMargin;
    std::array<CompensatedSum, kTileTerms> far;
    for (const auto& s : local) {
      const long double offset = static_cast<long double>(s.n) - t.centre;
      const auto weight = static_cast<long double>(s.r2);
      if (std::fabs(offset) <= reach) {
        t.near.push_back({s.n, weight});
        continue;
      }
      const long double inv = 1.0L / offset;
      long double power = inv;
      for (std::size_t k = 0; k < kTileTerms; ++k) {
        far[k].add(weight * power);
        power *= inv;
      }
    }
    for (std::size_t k = 0; k < kTileTerms; ++k) t.far[k] = far[k].value();
  });

  // Global far field n in (local_limit, cutoff] and the regularizer.
  std::array<CompensatedSum, kGlobalTerms> global;
  CompensatedSum regularizer;
  for (const auto& s : local) {
    const auto n = static_cast<long double>(s.n);
    regularizer.add(static_cast<long double>(s.r2) * n / (n * n + 1.0L));
  }
  arithmetic::for_each_shell(
      static_cast<u64>(local_limit) + 1, static_cast<u64>(impl->cutoff) + 1,
      [&](const arithmetic::LatticeShell& s) {
        const auto n = static_cast<long double>(s.n);
        const auto weight = static_cast<long double>(s.r2);
        regularizer.add(weight * n / (n * n + 1.0L));
        const long double inv = 1.0L / n;
        long double power = inv;
        for (std::size_t k = 0; k < kGlobalTerms; ++k) {
          global[k].add(weight * power);
          power *= inv;
        }
      });
  for (std::size_t k = 0; k < kGlobalTerms; ++k) impl->global[k] = global[k].value();
  impl->regularizer = regularizer.value();
  impl_ = std::move(impl);
}

SecularFunction::~SecularFunction() = default;
SecularFunction::SecularFunction(SecularFunction&&) noexcept = default;
SecularFunction& SecularFunction::operator=(SecularFunction&&) noexcept = default;

const std::vector<std::pair<u64, u64>>& SecularFunction::gaps() const {
  return impl_->gaps;
}

long double SecularFunction::value(long double lambda) const {
  return impl_->value(impl_->tile_for(lambda), lambda);
}

long double SecularFunction::derivative(long double lambda) const {
  return impl_->derivative(impl_->tile_for(lambda), lambda);
}

double SecularFunction::tail_bound() const {
  return static_cast<double>(impl_->tail_bound);
}

u64 SecularFunction::cutoff() const { return static_cast<u64>(impl_->cutoff); }

NewEigenvalue SecularFunction::solve_gap(std::size_t i, double coupling) const {
  if (!std::isfinite(coupling)) {
    throw DomainError("coupling must be finite");
  }
  const auto [m, m_next] = impl_->gaps.at(i);
  const Tile& tile = impl_->tiles[impl_->gap_tile[i]];
  const auto lo_end = static_cast<long double>(m);
  const auto hi_end = static_cast<long double>(m_next);
  const long double width = hi_end - lo_end;
  auto h = [&](long double x) { return impl_->value(tile, x) - coupling; };

  // The function runs from -inf to +inf across the gap.
  if (!(h(lo_end + 1e-14L * width) < 0.0L) || !(h(hi_end - 1e-14L * width) > 0.0L)) {
    throw InternalError("secular root not bracketed in gap (" +
                        std::to_string(m) + ", " + std::to_string(m_next) + ")");
  }
  long double lo = lo_end;
  long double hi = hi_end;
  while (hi - lo > 1e-12L * width) {
    const long double mid = 0.5L * (lo + hi);
    if (h(mid) < 0.0L) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  long double root = 0.5L * (lo + hi);
  for (int step = 0; step < 3; ++step) {
    const long double next = root - h(root) / impl_->derivative(tile, root);
    if (!(next > lo && next < hi)) break;
    root = next;
  }
  auto lambda = static_cast<double>(root);
  if (lambda <= static_cast<double>(m)) {
    lambda = std::nextafter(static_cast<double>(m), static_cast<double>(m_next));
  }
  if (lambda >= static_cast<double>(m_next)) {
    lambda = std::nextafter(static_cast<double>(m_next), static_cast<double>(m));
  }
  const double below = lambda - static_cast<double>(m);
  const double above = static_cast<double>(m_next) - lambda;
  return below <= above ? NewEigenvalue{lambda, m, below}
                        : NewEigenvalue{lambda, m_next, above};
}

std::vector<NewEigenvalue> solve_secular(const SecularFunction& f, double coupling) {
  std::vector<NewEigenvalue> out(f.gaps().size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = f.solve_gap(i, coupling); });
  return out;
}

std::vector<NewEigenvalue> solve_secular(Window window, double coupling,
                                         SecularOptions options) {
  return solve_secular(SecularFunction(window, options), coupling);
}

NewEigenvalueSequence synthesize_sequence(double alpha, double x_max, u64 seed) {
  if (!(alpha > -0.5 && alpha <= 0.5)) {
    throw DomainError("coupling exponent alpha must lie in (-1/2, 1/2], got " +
                      num(alpha));
  }
  if (!std::isfinite(x_max) || x_max < 100.0) {
    throw DomainError("synthesize_sequence requires x_max >= 100");
  }
  NewEigenvalueSequence seq;
  seq.regime = {RegimeMode::synthetic, alpha, std::nullopt};
  const auto shells = arithmetic::shells_up_to(x_max);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < shells.size(); ++i) {
    const u64 m = shells[i].n;
    if (m < 2) continue;
    const u64 m_next = shells[i + 1].n;
    // 53 random bits mapped to [1/2, 3/2).
    const double u = 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double gap = static_cast<double>(m_next - m);
    const double offset =
        std::min(u * std::pow(std::log(static_cast<double>(m)), alpha), gap / 2.0);
    const double lambda = static_cast<double>(m) + offset;
    const double below = lambda - static_cast<double>(m);
    const double above = static_cast<double>(m_next) - lambda;
    seq.values.push_back(below <= above ? NewEigenvalue{lambda, m, below}
                                        : NewEigenvalue{lambda, m_next, above});
  }
  return seq;
}

double mean_distance(std::span<const NewEigenvalue> values, double x) {
  CompensatedSum total;
  std::size_t count = 0;
  for (const auto& v : values) {
    if (v.lambda <= x) {
      total.add(v.delta);
      ++count;
    }
  }
  if (count == 0) {
    throw DomainError("no new eigenvalues at or below x = " + num(x));
  }
  return static_cast<double>(total.value() / static_cast<long double>(count));
}

double mean_distance(const NewEigenvalueSequence& seq, double x) {
  return mean_distance(seq.values, x);
}

std::span<const NewEigenvalue> members_in(const NewEigenvalueSequence& seq,
                                          Window window) {
  const auto& v = seq.values;
  auto first = std::lower_bound(
      v.begin(), v.end(), window.lo,
      [](const NewEigenvalue& e, double x) { return e.lambda < x; });
  auto last = std::upper_bound(
      first, v.end(), window.hi,
      [](double x, const NewEigenvalue& e) { return x < e.lambda; });
  return {first, last};
}

}  // namespace seba::spectral
