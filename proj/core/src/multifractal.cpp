#include "seba/multifractal.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "seba/arithmetic.hpp"
#include "seba/error.hpp"
#include "seba/parallel.hpp"
#include "seba/summation.hpp"

namespace seba::multifractal {

namespace {

using u64 = std::uint64_t;

// Atoms a measure may hold.
constexpr u64 kMaxAtomSpan = u64{1} << 24;
constexpr double kNormalizationSlack = 1e-12;
constexpr std::size_t kMinStrongMembers = 10;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_moment_order(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw DomainError("moment order q must be finite and > 1, got " + num(q) +
                      "; use shannon_entropy for the q -> 1 limit");
  }
}

// sum of r2(n) |n - lambda|^{-s} over the few shells around lambda: a lower
// bound for zeta_lambda(s) that sets the scale of relative tolerances.
long double local_sum(double lambda, double s) {
  const long double lam = lambda;
  const long double lo = std::max(0.0L, std::floor(lam) - 8.0L);
  long double sum = 0.0L;
  for (auto n = static_cast<u64>(lo); static_cast<long double>(n) <= lam + 9.0L;
       ++n) {
    const u64 r = arithmetic::r2(n);
    if (r != 0) {
      sum += static_cast<long double>(r) *
             std::pow(std::fabs(static_cast<long double>(n) - lam), -s);
    }
  }
  return sum;
}

// Window of shells for the measure at lambda: estimated plus bounded tail
// mass below tol relative to the lower bound z0 of the normalizer.
zeta::ShellWindow measure_window(double lambda, long double z0, double tol) {
  for (long double half = 16.0L;; half *= 2.0L) {
    const long double lo = std::floor(static_cast<long double>(lambda) - half);
    const u64 first = lo < 0.0L ? 0 : static_cast<u64>(lo) + 1;
    const auto last = static_cast<u64>(std::ceil(lambda + half));
    if (last - first > kMaxAtomSpan) {
      throw CapacityError("spectral measure at lambda = " + num(lambda) +
                          " needs more than 2^24 shells for tolerance " +
                          num(tol));
    }
    const zeta::ShellWindow w = zeta::shell_window(lambda, 2.0, first, last);
    if (w.estimate() + w.bound() <= tol * z0) return w;
  }
}

long double per_point_power(const Atom& a, long double q) {
  const auto points = static_cast<long double>(a.points);
  return points * std::pow(static_cast<long double>(a.mass) / points, q);
}

}  // namespace

SpectralMeasure spectral_measure(double lambda, double tol) {
  zeta::check_shift(lambda);
  if (!(tol > 0.0 && tol < 1.0)) {
    throw DomainError("measure tolerance must lie in (0, 1), got " + num(tol));
  }
  const long double z0 = local_sum(lambda, 2.0);
  const zeta::ShellWindow w = measure_window(lambda, z0, tol);

  SpectralMeasure mu;
  mu.lambda = lambda;
  std::vector<std::pair<u64, long double>> weights;
  std::vector<u64> points;
  CompensatedSum partial;
  const long double lam = lambda;
  arithmetic::for_each_shell(w.first, w.last + 1,
                             [&](const arithmetic::LatticeShell& s) {
                               const long double d = static_cast<long double>(s.n) - lam;
                               const long double v = static_cast<long double>(s.r2) / (d * d);
                               weights.emplace_back(s.n, v);
                               points.push_back(s.r2);
                               partial.add(v);
                             });
  const long double estimate = w.estimate();
  const long double bound = w.bound() + 8.0L * LDBL_EPSILON * partial.value();
  const long double z = partial.value() + estimate;
  mu.atoms.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    mu.atoms.push_back({weights[i].first, static_cast<double>(weights[i].second / z),
                        points[i]});
  }
  mu.tail_mass_bound = static_cast<double>(estimate / z);
  mu.normalizer = static_cast<double>(z);
  mu.normalizer_rel_error = static_cast<double>(bound / (z - bound));
  mu.neglected_mass_bound = static_cast<double>((estimate + bound) / (z - bound));
  return mu;
}

SpectralMeasure make_measure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("a measure needs at least one atom");
  CompensatedSum total;
  for (const auto& a : atoms) {
    if (!(a.mass > 0.0) || a.points == 0) {
      throw DomainError("atoms need positive mass and at least one point");
    }
    total.add(a.mass);
  }
  if (std::fabs(total.value() - 1.0L) > kNormalizationSlack) {
    throw DomainError("atom masses must sum to 1, got " +
                      num(static_cast<double>(total.value())));
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.n < y.n; });
  SpectralMeasure mu;
  mu.atoms = std::move(atoms);
  return mu;
}

SpectralMeasure point_mass() { return make_measure({{0, 1.0, 1}}); }

SpectralMeasure uniform_measure(std::size_t count) {
  if (count == 0) throw DomainError("uniform measure needs at least one atom");
  std::vector<Atom> atoms;
  atoms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    atoms.push_back({i, 1.0 / static_cast<double>(count), 1});
  }
  return make_measure(std::move(atoms));
}

SpectralMeasure single_shell(u64 m) {
  const u64 r = arithmetic::r2(m);
  if (r == 0) {
    throw DomainError(std::to_string(m) + " is not a sum of two squares");
  }
  return make_measure({{m, 1.0, r}});
}

double moment_sum(const SpectralMeasure& mu, double q) {
  require_moment_order(q);
  CompensatedSum sum;
  for (const auto& a : mu.atoms) sum.add(per_point_power(a, q));
  return static_cast<double>(sum.value());
}

MomentValue moment_sum_certified(const SpectralMeasure& mu, double q) {
  const double value = moment_sum(mu, q);
  const double eps = mu.normalizer_rel_error;
  // Every mass is off by at most a factor (1 +- eps); the left-out lattice
  // points carry at most neglected_mass_bound^q in total.
  const double scale = eps > 0.0 ? std::pow(1.0 - eps, -q) - 1.0 : 0.0;
  const double error = value * scale + std::pow(mu.neglected_mass_bound, q) +
                       1e-15 * value;
  return {value, error};
}

MomentValue moment_via_zeta(double lambda, double q, double tol) {
  require_moment_order(q);
  zeta::check_shift(lambda);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  // each sum to tol relative to its own local part, which bounds it below
  auto sum_at = [&](double e) {
    return zeta::shifted_zeta(lambda, e,
                              static_cast<double>(tol * local_sum(lambda, e)));
  };
  const zeta::ZetaValue z[] = {sum_at(2.0), sum_at(2.0 * q)};
  const long double z2 = z[0].real();
  const long double b2 = z[0].tail_bound;
  const long double z2q = z[1].real();
  const long double b2q = z[1].tail_bound;
  const long double lq = q;
  const long double value = z2q / std::pow(z2, lq);
  const long double upper = (z2q + b2q) / std::pow(z2 - b2, lq);
  const long double lower = (z2q - b2q) / std::pow(z2 + b2, lq);
  const long double error =
      std::max(upper - value, value - lower) + 1e-15L * value;
  return {static_cast<double>(value), static_cast<double>(error)};
}

double renyi_entropy(const SpectralMeasure& mu, double q) {
  return std::log(moment_sum(mu, q)) / (1.0 - q);
}

double shannon_entropy(const SpectralMeasure& mu) {
  CompensatedSum sum;
  for (const auto& a : mu.atoms) {
    const long double m = a.mass;
    sum.add(-m * std::log(m / static_cast<long double>(a.points)));
  }
  return static_cast<double>(sum.value());
}

double n_lambda_weak(u64 m) {
  if (m < 3) {
    throw DomainError("normal order needs m >= 3 (log log m must be defined)");
  }
  if (arithmetic::r2(m) == 0) {
    throw DomainError(std::to_string(m) + " is not a sum of two squares");
  }
  return std::pow(std::log(static_cast<double>(m)), 0.5 * std::numbers::ln2);
}

namespace {

std::span<const spectral::NewEigenvalue> strong_members(
    const spectral::NewEigenvalueSequence& seq, spectral::Window window) {
  auto members = spectral::members_in(seq, window);
  if (members.size() < kMinStrongMembers) {
    throw DomainError("window [" + num(window.lo) + ", " + num(window.hi) +
                      "] holds " + std::to_string(members.size()) +
                      " new eigenvalues; at least 10 are needed");
  }
  return members;
}

double strong_count(std::span<const spectral::NewEigenvalue> members) {
  const double width = spectral::mean_distance(
      members, std::numeric_limits<double>::infinity());
  const double lo = std::max(0.0, std::floor(members.front().lambda - width) - 1.0);
  const double hi = std::ceil(members.back().lambda + width) + 2.0;
  const arithmetic::R2Table table(static_cast<u64>(lo), static_cast<u64>(hi));
  CompensatedSum total;
  for (const auto& e : members) {
    total.add(static_cast<long double>(arithmetic::annulus_count(table, e.lambda, width)));
  }
  return static_cast<double>(total.value() / static_cast<long double>(members.size()));
}

std::vector<spectral::NewEigenvalue> stride_sample(
    std::span<const spectral::NewEigenvalue> members, std::size_t max_samples) {
  if (max_samples == 0) throw DomainError("max_samples must be positive");
  std::vector<spectral::NewEigenvalue> out;
  if (members.size() <= max_samples) {
    out.assign(members.begin(), members.end());
    return out;
  }
  out.reserve(max_samples);
  for (std::size_t i = 0; i < max_samples; ++i) {
    out.push_back(members[i * members.size() / max_samples]);
  }
  return out;
}

}  // namespace

double n_lambda_strong(const spectral::NewEigenvalueSequence& seq,
                       spectral::Window window) {
  return strong_count(strong_members(seq, window));
}

std::vector<ExponentEstimate> dq_estimates(
    const spectral::NewEigenvalueSequence& seq, std::span<const double> qs,
    spectral::Window window, const DqOptions& options) {
  if (qs.empty()) return {};
  for (double q : qs) require_moment_order(q);
  if (!(options.rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  const auto members = strong_members(seq, window);

  double n_estimate = 0.0;
  switch (options.normalization) {
    case Normalization::strong_annulus:
      n_estimate = strong_count(members);
      break;
    case Normalization::weak_normal_order:
    case Normalization::nearest_multiplicity: {
      CompensatedSum total;
      for (const auto& e : members) {
        total.add(options.normalization == Normalization::weak_normal_order
                      ? n_lambda_weak(e.nearest_laplace)
                      : static_cast<double>(arithmetic::r2(e.nearest_laplace)));
      }
      n_estimate = static_cast<double>(total.value() /
                                       static_cast<long double>(members.size()));
      break;
    }
  }
  const double log_n = std::log(n_estimate);

  const auto samples = stride_sample(members, options.max_samples);
  std::vector<double> exps{2.0};
  for (double q : qs) exps.push_back(2.0 * q);
  const double s_min = 2.0;

  // Plan every window first so that one table serves all of them.
  std::vector<double> tols(samples.size());
  u64 first = UINT64_MAX;
  u64 last = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    long double scale = local_sum(samples[i].lambda, s_min);
    for (double e : exps) scale = std::min(scale, local_sum(samples[i].lambda, e));
    tols[i] = static_cast<double>(options.rel_tol * scale);
    const auto w = zeta::plan_shell_window(samples[i].lambda, s_min, tols[i]);
    first = std::min(first, w.first);
    last = std::max(last, w.last);
  }
  std::optional<arithmetic::R2Table> table;
  if (last + 1 - first <= arithmetic::kMaxTableEntries) table.emplace(first, last + 1);

  std::vector<std::vector<double>> entropies(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto z = zeta::shifted_zeta(samples[i].lambda, exps, tols[i],
                                      table ? &*table : nullptr);
    const long double log_z2 = std::log(static_cast<long double>(z[0].real()));
    auto& h = entropies[i];
    for (std::size_t k = 0; k < qs.size(); ++k) {
      const long double q = qs[k];
      const long double log_m =
          std::log(static_cast<long double>(z[k + 1].real())) - q * log_z2;
      h.push_back(static_cast<double>(log_m / (1.0L - q)));
    }
  });

  std::vector<ExponentEstimate> out;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    CompensatedSum h;
    for (const auto& e : entropies) h.add(e[k]);
    ExponentEstimate est;
    est.q = qs[k];
    est.H_q = static_cast<double>(h.value() / static_cast<long double>(samples.size()));
    est.log_N = log_n;
    est.D_q = est.H_q / est.log_N;
    est.samples = samples.size();
    out.push_back(est);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ExponentEstimate& x, const ExponentEstimate& y) {
                     return x.q < y.q;
                   });
  return out;
}

ExponentEstimate dq_estimate(const spectral::NewEigenvalueSequence& seq, double q,
                             spectral::Window window, const DqOptions& options) {
  const double qs[] = {q};
  return dq_estimates(seq, qs, window, options).front();
}

QRange theoretical_q_range(double alpha) {
  if (!(alpha > 0.25 && alpha < 0.5)) {
    throw DomainError("coupling exponent alpha must lie in (1/4, 1/2), got " +
                      num(alpha));
  }
  const double denom = 2.0 - 4.0 * alpha;
  return {(1.0 - std::numbers::ln2) / denom, 1.0 / denom};
}

double theoretical_dq(double alpha, double q) {
  const QRange range = theoretical_q_range(alpha);
  if (!(q > range.lo && q <= range.hi)) {
    throw DomainError("q = " + num(q) + " outside the admissible interval (" +
                      num(range.lo) + ", " + num(range.hi) + "] for alpha = " +
                      num(alpha));
  }
  return (1.0 / (2.0 * alpha)) * (1.0 - 1.0 / (2.0 * q)) * std::numbers::ln2;
}

double d_star(const zeta::QuadraticForm& form, double q) {
  if (q == 0.5) {
    throw PoleError("d*_q has a pole at q = 1/2 (zeta_Q(2q) at s = 1)", 0.5,
                    std::numbers::pi / 2.0);
  }
  return zeta::epstein_zeta(form, {2.0 * q, 0.0}).real();
}

double epstein_derivative(const zeta::QuadraticForm& form, double s) {
  if (std::fabs(s - 1.0) < 0.1) {
    throw DomainError("derivative stencil would straddle the pole at s = 1");
  }
  constexpr double h = 1e-2;
  auto central = [&](double step) {
    const double up = zeta::epstein_zeta(form, {s + step, 0.0}).real();
    const double down = zeta::epstein_zeta(form, {s - step, 0.0}).real();
    return (up - down) / (2.0 * step);
  };
  const double d1 = central(h);
  const double d2 = central(h / 2.0);
  const double d4 = central(h / 4.0);
  // Two rounds of Richardson extrapolation remove the h^2 and h^4 terms.
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

double d_star_exponent(const zeta::QuadraticForm& form, double q) {
  const double d1 = d_star(form, 1.0);
  if (q == 1.0) {
    return std::log(d1) - 2.0 * epstein_derivative(form, 2.0) / d1;
  }
  const double dq = d_star(form, q);
  return (std::log(std::fabs(dq)) - q * std::log(std::fabs(d1))) / (1.0 - q);
}

double symmetry_check(const zeta::QuadraticForm& form, double q) {
  if (!std::isfinite(q)) throw DomainError("q must be finite");
  const double two_q = 2.0 * q;
  if (two_q == std::round(two_q)) {
    const double mirror = 0.5 - q;
    std::string which;
    if (q == 0.5 || mirror == 0.5) {
      which = "the pole of d*_q at q = 1/2";
    } else if (q == 1.0 || mirror == 1.0) {
      which = "the removable point q = 1 of D*_q";
    } else {
      which = "a pole of phi_Q at s = 2q = " + num(two_q);
    }
    throw PoleError("symmetry relation at q = " + num(q) + " runs into " + which,
                    q);
  }
  const double zeta2 = d_star(form, 1.0);
  const double phi = zeta::phi_q(form, {two_q, 0.0}).real();
  const double lhs = d_star_exponent(form, 0.5 - q);
  const double rhs =
      ((1.0 - q) / (0.5 + q)) *
      (d_star_exponent(form, q) +
       (std::log(std::fabs(phi)) + (two_q - 0.5) * std::log(zeta2)) / (1.0 - q));
  return std::fabs(lhs - rhs);
}

}  // namespace seba::multifractal
