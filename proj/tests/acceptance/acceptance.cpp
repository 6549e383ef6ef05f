// End-to-end checks. Usage: seba_acceptance N, with N in 1..11. Prints one
// PASS/FAIL line per clause and exits nonzero if any clause fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "oracles.hpp"
#include "seba/arithmetic.hpp"
#include "seba/error.hpp"
#include "seba/multifractal.hpp"
#include "seba/spectral.hpp"
#include "seba/zeta.hpp"

using namespace seba;

namespace {

bool g_ok = true;

void report(const std::string& name, bool pass, const std::string& detail) {
  g_ok = g_ok && pass;
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void r2_oracle() {
  const Clock clock;
  std::uint64_t mismatches = 0;
  std::uint64_t first = 0;
  for (std::uint64_t n = 0; n <= 100000; ++n) {
    if (arithmetic::r2(n) != oracle::r2_brute(n)) {
      if (mismatches++ == 0) first = n;
    }
  }
  const double t = clock.seconds();
  report("r2 equals lattice enumeration for n <= 1e5", mismatches == 0,
         std::to_string(mismatches) + " mismatches" +
             (mismatches ? ", first at n = " + std::to_string(first) : ""));
  report("r2 sweep runtime < 30 s", t < 30.0, fmt(t) + " s");
}

void square_lattice() {
  const Clock clock;
  double worst = 0.0;
  for (double s : {1.5, 2.0, 2.5}) {
    const double got = zeta::epstein_zeta(zeta::QuadraticForm(1.0), {s, 0.0}).real();
    const long double ref = 4.0L * oracle::riemann_zeta(s) * oracle::dirichlet_beta(s);
    worst = std::max(worst, std::fabs(got - static_cast<double>(ref)));
  }
  const double t = clock.seconds();
  report("Epstein zeta at a=1 equals 4 zeta(s) beta(s)", worst < 1e-10,
         "max error " + fmt(worst));
  report("square lattice runtime < 5 s", t < 5.0, fmt(t) + " s");
}

void functional_equation() {
  double worst = 0.0;
  for (double a : {1.0, 1.3}) {
    const zeta::QuadraticForm q(a);
    for (double s : {-1.5, -0.5, 0.3, 0.7, 1.7}) {
      const auto lhs = zeta::epstein_zeta(q, {1.0 - s, 0.0}).value;
      const auto rhs = zeta::phi_q(q, {s, 0.0}) * zeta::epstein_zeta(q, {s, 0.0}).value;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  report("functional equation residual < 1e-8", worst < 1e-8, "max residual " + fmt(worst));
}

void symmetry() {
  double worst = 0.0;
  for (double a : {1.0, 1.3}) {
    const zeta::QuadraticForm form(a);
    for (double q : {0.05, 0.1, 0.2, 0.35, 0.45}) {
      worst = std::max(worst, multifractal::symmetry_check(form, q));
      worst = std::max(worst, multifractal::symmetry_check(form, 0.5 - q));
    }
  }
  report("D* symmetry residual < 1e-8", worst < 1e-8, "max residual " + fmt(worst));
  const auto phi = zeta::phi_q(zeta::QuadraticForm(1.0), {0.5, 0.0});
  const double dev = std::abs(phi - std::complex<double>(1.0, 0.0));
  report("phi(1/2) = 1", dev <= 1e-12, "deviation " + fmt(dev));
}

void interlacing() {
  const spectral::SecularFunction f({0.0, 10000.0});
  for (double c : {-10.0, 0.0, 10.0}) {
    const auto roots = spectral::solve_secular(f, c);
    std::size_t violations = roots.size() == f.gaps().size() ? 0 : 1;
    for (std::size_t i = 0; i < roots.size() && i < f.gaps().size(); ++i) {
      const auto [lo, hi] = f.gaps()[i];
      if (!(roots[i].lambda > static_cast<double>(lo) && roots[i].lambda < static_cast<double>(hi))) {
        ++violations;
      }
    }
    report("one root strictly inside every gap of [0, 1e4], c = " + fmt(c), violations == 0,
           std::to_string(roots.size()) + " roots, " + std::to_string(f.gaps().size()) +
               " gaps, " + std::to_string(violations) + " violations");
  }
}

void normalization() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(0.0, 10000.0);
  std::size_t norm_bad = 0;
  std::size_t moment_bad = 0;
  double worst_norm = 0.0;
  for (int i = 0; i < 20; ++i) {
    double lambda = dist(rng);
    while (std::fabs(lambda - std::round(lambda)) < 1e-6) lambda = dist(rng);
    const auto mu = multifractal::spectral_measure(lambda);
    double total = 0.0;
    for (const auto& a : mu.atoms) total += a.mass;
    const double dev = std::fabs(total - 1.0);
    worst_norm = std::max(worst_norm, dev);
    if (dev > 1e-12 + mu.neglected_mass_bound) ++norm_bad;
    for (double q : {1.5, 2.0, 3.0}) {
      const auto direct = multifractal::moment_sum_certified(mu, q);
      const auto via = multifractal::moment_via_zeta(lambda, q);
      if (std::fabs(direct.value - via.value) > direct.error + via.error) ++moment_bad;
    }
  }
  report("measure mass within 1e-12 + tail certificate", norm_bad == 0,
         std::to_string(norm_bad) + " failures, max |sum - 1| " + fmt(worst_norm));
  report("moment_sum agrees with moment_via_zeta", moment_bad == 0,
         std::to_string(moment_bad) + " disagreements out of 60");
}

void weak_collapse() {
  const auto shells = arithmetic::shells_up_to(10000);
  // 50 representable m >= 1 spread over the range
  std::vector<std::size_t> picks;
  for (std::size_t k = 0; k < 50; ++k) picks.push_back(1 + k * (shells.size() - 3) / 49);
  double worst_h = 0.0;
  double worst_d = 0.0;
  for (std::size_t idx : picks) {
    const auto m = shells[idx].n;
    const auto gap = static_cast<double>(shells[idx + 1].n - m);
    const double lambda = static_cast<double>(m) + 1e-8 * gap;
    const auto mu = multifractal::spectral_measure(lambda);
    const double log_r = std::log(static_cast<double>(shells[idx].r2));
    for (double q : {1.5, 2.0, 3.0}) {
      const double h = multifractal::renyi_entropy(mu, q);
      worst_h = std::max(worst_h, std::fabs(h - log_r));
      worst_d = std::max(worst_d, std::fabs(h / log_r - 1.0));
    }
  }
  report("|H_q - log r2(m)| < 1e-3 next to 50 shells", worst_h < 1e-3, "max " + fmt(worst_h));
  report("D_q with N = r2(m) equals 1 within 1e-3", worst_d < 1e-3, "max " + fmt(worst_d));
}

void exponent_trend() {
  const Clock clock;
  double worst_top = 0.0;
  bool increasing = true;
  for (double alpha : {0.3, 0.35, 0.4, 0.45}) {
    const auto range = multifractal::theoretical_q_range(alpha);
    worst_top = std::max(worst_top,
                         std::fabs(multifractal::theoretical_dq(alpha, range.hi) - std::log(2.0)));
    double prev = -INFINITY;
    for (int k = 1; k <= 200; ++k) {
      const double q = range.lo + (range.hi - range.lo) * k / 200.0;
      const double d = multifractal::theoretical_dq(alpha, q);
      if (!(d > prev)) increasing = false;
      prev = d;
    }
  }
  report("theoretical D_q strictly increasing in q", increasing, "200-point grid, 4 alphas");
  report("theoretical D_q = log 2 at the upper end", worst_top <= 1e-12, "max error " + fmt(worst_top));

  const double qs[] = {1.2, 1.6, 2.0, 2.4};
  const auto seq = spectral::synthesize_sequence(0.4, 1e6, 42);
  const auto low = multifractal::dq_estimates(seq, qs, {1e4, 1e5});
  const auto high = multifractal::dq_estimates(seq, qs, {1e5, 1e6});
  bool positive = true;
  bool rising = true;
  bool toward = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < 4; ++i) {
    positive = positive && low[i].D_q > 0.0 && high[i].D_q > 0.0;
    if (i > 0) rising = rising && low[i].D_q > low[i - 1].D_q && high[i].D_q > high[i - 1].D_q;
    const double theory = multifractal::theoretical_dq(0.4, qs[i]);
    toward = toward && std::fabs(high[i].D_q - theory) < std::fabs(low[i].D_q - theory);
    detail << " q=" << qs[i] << ": " << fmt(low[i].D_q) << " -> " << fmt(high[i].D_q)
           << " (theory " << fmt(theory) << ")";
  }
  const double t = clock.seconds();
  report("pipeline D_q positive", positive, detail.str());
  report("pipeline D_q increasing in q", rising, detail.str());
  report("pipeline D_q moves toward theory as the window rises", toward, detail.str());
  report("D_q pipeline runtime < 10 min", t < 600.0, fmt(t) + " s");
}

void landau() {
  const Clock clock;
  const double r4 = arithmetic::landau_ratio(1e4);
  const double r5 = arithmetic::landau_ratio(1e5);
  const double r6 = arithmetic::landau_ratio(1e6);
  const double t = clock.seconds();
  const std::string d = fmt(r4) + ", " + fmt(r5) + ", " + fmt(r6);
  report("Landau ratio decreasing over 1e4, 1e5, 1e6", r4 > r5 && r5 > r6, d);
  report("Landau ratio in (0.74, 1) at 1e6", r6 > 0.74 && r6 < 1.0, fmt(r6));
  report("Landau runtime < 60 s", t < 60.0, fmt(t) + " s");
}

void ground_state() {
  for (double a : {1.0, 1.3}) {
    const zeta::QuadraticForm form(a);
    const double target = zeta::epstein_zeta(form, {2.4, 0.0}).real();
    std::vector<double> gaps;
    for (double lambda : {1e-1, 1e-2, 1e-3}) {
      gaps.push_back(std::fabs(zeta::zeta_star_shifted(form, lambda, 2.4, 1e-10).real() - target));
    }
    const std::string d = fmt(gaps[0]) + ", " + fmt(gaps[1]) + ", " + fmt(gaps[2]);
    report("ground-state discrepancy decreasing, a = " + fmt(a),
           gaps[0] > gaps[1] && gaps[1] > gaps[2], d);
    report("ground-state discrepancy < 1e-6 at lambda = 1e-3, a = " + fmt(a), gaps[2] < 1e-6,
           fmt(gaps[2]));
  }
}

void cli_determinism() {
  const std::vector<std::vector<std::string>> runs = {
      {"r2", "1000000"},
      {"shells", "--max", "500"},
      {"spectrum", "--max", "500"},
      {"newvals", "--mode", "secular", "--coupling", "2", "--max", "2000"},
      {"newvals", "--mode", "synthetic", "--alpha", "0.4", "--max", "5000", "--seed", "3"},
      {"measure", "--lambda", "10.5"},
      {"moments", "--lambda", "10.5", "--q", "3,1.5,2"},
      {"entropy", "--lambda", "10.5", "--q", "1,2"},
      {"dq", "--alpha", "0.4", "--q", "1.2,2", "--window", "10000:20000", "--seed", "42",
       "--samples", "200"},
      {"dq-theory", "--alpha", "0.4", "--q", "1,2"},
      {"epstein", "--a", "1.3", "--s", "2,1"},
      {"funceq", "--a", "1", "--s-grid", "-1.5,0.3"},
      {"dstar", "--a", "1", "--q", "0.1,1,2"},
      {"symmetry", "--a", "1", "--q", "0.1,0.35"},
      {"landau", "--x-grid", "1000,10000"},
  };
  for (const char* format : {"csv", "json"}) {
    for (const auto& args : runs) {
      std::vector<std::string> full = {"--format", format};
      full.insert(full.end(), args.begin(), args.end());
      std::string outputs[2];
      int codes[2];
      for (int k = 0; k < 2; ++k) {
        std::ostringstream out;
        std::ostringstream err;
        codes[k] = cli::run(full, out, err);
        outputs[k] = out.str();
      }
      const bool same = codes[0] == 0 && codes[1] == 0 && outputs[0] == outputs[1] &&
                        !outputs[0].empty();
      report(std::string("byte-identical reruns: ") + args[0] + " (" + format + ")", same,
             "exit " + std::to_string(codes[0]) + ", " + std::to_string(outputs[0].size()) +
                 " bytes");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<void()>>> criteria = {
      {1, {"r2 oracle", r2_oracle}},
      {2, {"square lattice identity", square_lattice}},
      {3, {"functional equation", functional_equation}},
      {4, {"symmetry relation", symmetry}},
      {5, {"interlacing", interlacing}},
      {6, {"measure normalization", normalization}},
      {7, {"weak coupling collapse", weak_collapse}},
      {8, {"fractal exponent trend", exponent_trend}},
      {9, {"Landau trend", landau}},
      {10, {"ground-state limit", ground_state}},
      {11, {"CLI determinism", cli_determinism}},
  };
  std::vector<int> chosen;
  if (argc < 2) {
    for (const auto& [k, v] : criteria) chosen.push_back(k);
  } else {
    for (int i = 1; i < argc; ++i) chosen.push_back(std::atoi(argv[i]));
  }
  for (int k : chosen) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    std::printf("== %d. %s\n", k, it->second.first);
    const Clock clock;
    try {
      it->second.second();
    } catch (const std::exception& e) {
      report(it->second.first, false, std::string("exception: ") + e.what());
    }
    std::printf("   (%.2f s)\n", clock.seconds());
  }
  return g_ok ? 0 : 1;
}
