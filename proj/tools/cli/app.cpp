#include "cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/record.hpp"
#include "seba/arithmetic.hpp"
#include "seba/error.hpp"
#include "seba/multifractal.hpp"
#include "seba/parallel.hpp"
#include "seba/spectral.hpp"
#include "seba/zeta.hpp"

namespace seba::cli {

namespace {

using Rows = std::vector<Record>;
using Action = std::function<Rows()>;
using u64 = std::uint64_t;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

std::string num(double v) { return format_double(v); }

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void require_finite(const std::vector<double>& v, const std::string& name) {
  for (double x : v) require(std::isfinite(x), name + " values must be finite");
}

// Runs f(i) for every grid index in parallel and concatenates the rows in
// grid order.
Rows sweep(std::size_t n, const std::function<Rows(std::size_t)>& f) {
  std::vector<Rows> parts(n);
  parallel_for(n, [&](std::size_t i) { parts[i] = f(i); });
  Rows out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

spectral::Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "window must look like LO:HI, got '" + text + "'");
  double lo = 0.0;
  double hi = 0.0;
  try {
    std::size_t used = 0;
    lo = std::stod(text.substr(0, colon), &used);
    require(used == colon, "bad window lower end in '" + text + "'");
    const std::string tail = text.substr(colon + 1);
    hi = std::stod(tail, &used);
    require(used == tail.size(), "bad window upper end in '" + text + "'");
  } catch (const std::logic_error&) {
    throw DomainError("window must look like LO:HI, got '" + text + "'");
  }
  require(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && hi > lo,
          "window needs 0 <= LO < HI, got '" + text + "'");
  return {lo, hi};
}

Value optional_value(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

// ---------------------------------------------------------------------------

Action add_r2(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "r2", "Lattice-point count r2(n) on the circle x^2 + y^2 = n, by factorization");
  auto n = std::make_shared<u64>();
  cmd->add_option("n", *n, "Non-negative integer")->required();
  return [n] {
    return Rows{Record().set("n", *n).set("r2", arithmetic::r2(*n))};
  };
}

Action add_shells(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "shells", "Integers n <= X that are sums of two squares, with r2(n)");
  auto x = std::make_shared<double>();
  cmd->add_option("--max", *x, "Largest n")->required();
  return [x] {
    require(std::isfinite(*x) && *x >= 0.0, "--max must be finite and >= 0");
    Rows rows;
    for (const auto& s : arithmetic::shells_up_to(*x)) {
      rows.push_back(Record().set("n", s.n).set("r2", s.r2));
    }
    return rows;
  };
}

Action add_spectrum(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "spectrum", "Laplace eigenvalues of the square torus up to X with multiplicities");
  auto x = std::make_shared<double>();
  cmd->add_option("--max", *x, "Largest eigenvalue")->required();
  return [x] {
    require(std::isfinite(*x) && *x >= 1.0, "--max must be finite and >= 1");
    Rows rows;
    for (const auto& e : spectral::laplace_spectrum(*x)) {
      rows.push_back(
          Record().set("eigenvalue", e.eigenvalue).set("multiplicity", e.multiplicity));
    }
    return rows;
  };
}

Action add_newvals(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "newvals",
      "New eigenvalues of the torus with a point scatterer: roots of the secular "
      "equation, or a synthetic sequence with mean distance (log x)^alpha");
  struct Opts {
    std::string mode;
    std::optional<double> coupling;
    std::optional<double> alpha;
    double x_max = 0.0;
    double x_min = 0.0;
    u64 seed = 1;
    double tail_tol = 1e-6;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--mode", o->mode, "secular or synthetic")
      ->required()
      ->check(CLI::IsMember({"secular", "synthetic"}));
  cmd->add_option("--coupling", o->coupling, "Extension parameter c (secular)");
  cmd->add_option("--alpha", o->alpha, "Coupling exponent in (-1/2, 1/2] (synthetic)");
  cmd->add_option("--max", o->x_max, "Upper end of the spectral window")->required();
  cmd->add_option("--min", o->x_min, "Lower end of the spectral window (secular)");
  cmd->add_option("--seed", o->seed, "Seed of the synthetic sequence");
  cmd->add_option("--tail-tol", o->tail_tol, "Tail tolerance of the secular sum");
  return [o] {
    Rows rows;
    if (o->mode == "secular") {
      require(o->coupling.has_value(), "secular mode needs --coupling");
      require(std::isfinite(*o->coupling), "--coupling must be finite");
      require(!o->alpha, "--alpha applies to synthetic mode only");
      const spectral::SecularFunction f({o->x_min, o->x_max},
                                        {.tail_tolerance = o->tail_tol});
      const auto values = spectral::solve_secular(f, *o->coupling);
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& v = values[i];
        const auto [lo, hi] = f.gaps()[i];
        // First-order effect of the tail error on the root, plus the
        // bisection tolerance.
        const double slope = static_cast<double>(f.derivative(v.lambda));
        const double err =
            f.tail_bound() / slope + 1e-12 * static_cast<double>(hi - lo);
        rows.push_back(Record()
                           .set("mode", o->mode)
                           .set("coupling", *o->coupling)
                           .set("alpha", std::monostate{})
                           .set("lambda", v.lambda)
                           .set("nearest_laplace", v.nearest_laplace)
                           .set("delta", v.delta)
                           .set("lambda_error", err));
      }
    } else {
      require(o->alpha.has_value(), "synthetic mode needs --alpha");
      require(!o->coupling, "--coupling applies to secular mode only");
      const auto seq = spectral::synthesize_sequence(*o->alpha, o->x_max, o->seed);
      for (const auto& v : seq.values) {
        rows.push_back(Record()
                           .set("mode", o->mode)
                           .set("coupling", std::monostate{})
                           .set("alpha", *o->alpha)
                           .set("lambda", v.lambda)
                           .set("nearest_laplace", v.nearest_laplace)
                           .set("delta", v.delta)
                           .set("lambda_error", 0.0));
      }
    }
    return rows;
  };
}

Action add_measure(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "measure",
      "Spectral measure of a new eigenvalue: shell masses r2(n)/(n-lambda)^2 "
      "normalized by zeta_lambda(2)");
  auto lambda = std::make_shared<double>();
  auto tol = std::make_shared<double>(1e-6);
  cmd->add_option("--lambda", *lambda, "Spectral parameter")->required();
  cmd->add_option("--tol", *tol, "Certified bound on the neglected mass");
  return [lambda, tol] {
    const auto mu = multifractal::spectral_measure(*lambda, *tol);
    Rows rows;
    for (const auto& a : mu.atoms) {
      rows.push_back(Record()
                         .set("lambda", mu.lambda)
                         .set("n", a.n)
                         .set("r2", a.points)
                         .set("mass", a.mass)
                         .set("tail_mass_bound", mu.tail_mass_bound)
                         .set("neglected_mass_bound", mu.neglected_mass_bound)
                         .set("normalizer", mu.normalizer)
                         .set("normalizer_rel_error", mu.normalizer_rel_error));
    }
    return rows;
  };
}

struct LambdaQ {
  double lambda = 0.0;
  std::vector<double> q;
  double tol = 1e-6;
};

std::shared_ptr<LambdaQ> lambda_q_options(CLI::App* cmd) {
  auto o = std::make_shared<LambdaQ>();
  cmd->add_option("--lambda", o->lambda, "Spectral parameter")->required();
  cmd->add_option("--q", o->q, "Comma-separated orders")->required()->delimiter(',');
  cmd->add_option("--tol", o->tol, "Measure tolerance");
  return o;
}

Action add_moments(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "moments",
      "Moment sums M_q of the spectral measure, directly and as "
      "zeta_lambda(2q)/zeta_lambda(2)^q");
  auto o = lambda_q_options(cmd);
  return [o] {
    const auto qs = sorted(o->q);
    for (double q : qs) require(q > 1.0 && std::isfinite(q), "moment orders need q > 1");
    const auto mu = multifractal::spectral_measure(o->lambda, o->tol);
    return sweep(qs.size(), [&](std::size_t i) {
      const auto direct = multifractal::moment_sum_certified(mu, qs[i]);
      const auto via = multifractal::moment_via_zeta(o->lambda, qs[i]);
      return Rows{Record()
                      .set("lambda", o->lambda)
                      .set("q", qs[i])
                      .set("M_q", direct.value)
                      .set("M_q_error", direct.error)
                      .set("M_q_zeta", via.value)
                      .set("M_q_zeta_error", via.error)};
    });
  };
}

Action add_entropy(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "entropy",
      "Renyi entropies H_q of the spectral measure; q = 1 gives the Shannon entropy");
  auto o = lambda_q_options(cmd);
  return [o] {
    const auto qs = sorted(o->q);
    for (double q : qs) require(q >= 1.0 && std::isfinite(q), "entropy orders need q >= 1");
    const auto mu = multifractal::spectral_measure(o->lambda, o->tol);
    return sweep(qs.size(), [&](std::size_t i) {
      const double q = qs[i];
      Record r;
      r.set("lambda", o->lambda).set("q", q);
      if (q == 1.0) {
        r.set("H_q", multifractal::shannon_entropy(mu)).set("H_q_error", std::monostate{});
      } else {
        const auto m = multifractal::moment_sum_certified(mu, q);
        const double err = m.error < m.value
                               ? -std::log1p(-m.error / m.value) / (q - 1.0)
                               : std::numeric_limits<double>::infinity();
        r.set("H_q", std::log(m.value) / (1.0 - q)).set("H_q_error", err);
      }
      r.set("neglected_mass_bound", mu.neglected_mass_bound);
      return Rows{r};
    });
  };
}

Action add_dq(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "dq",
      "Fractal exponents D_q = <H_q> / log N_lambda over a window of a synthetic "
      "strong-coupling sequence, next to the predicted curve");
  struct Opts {
    double alpha = 0.0;
    std::vector<double> q;
    std::string window;
    u64 seed = 1;
    std::string normalization = "strong";
    std::size_t samples = 2000;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--alpha", o->alpha, "Coupling exponent in (-1/2, 1/2]")->required();
  cmd->add_option("--q", o->q, "Comma-separated orders > 1")->required()->delimiter(',');
  cmd->add_option("--window", o->window, "Spectral window LO:HI")->required();
  cmd->add_option("--seed", o->seed, "Seed of the synthetic sequence");
  cmd->add_option("--normalization", o->normalization,
                  "N_lambda estimator: strong (annulus count), weak (normal "
                  "order), multiplicity (r2 of the nearest shell)")
      ->check(CLI::IsMember({"strong", "weak", "multiplicity"}));
  cmd->add_option("--samples", o->samples, "Eigenvalues used for the entropy average");
  return [o] {
    const auto qs = sorted(o->q);
    for (double q : qs) require(q > 1.0 && std::isfinite(q), "D_q needs q > 1");
    const auto window = parse_window(o->window);
    require(window.hi <= 1e7, "window upper end must be <= 1e7");
    multifractal::DqOptions opts;
    opts.max_samples = o->samples;
    opts.normalization = o->normalization == "strong"
                             ? multifractal::Normalization::strong_annulus
                         : o->normalization == "weak"
                             ? multifractal::Normalization::weak_normal_order
                             : multifractal::Normalization::nearest_multiplicity;
    const auto seq =
        spectral::synthesize_sequence(o->alpha, std::max(window.hi, 100.0), o->seed);
    const auto est = multifractal::dq_estimates(seq, qs, window, opts);
    Rows rows;
    for (const auto& e : est) {
      std::optional<double> theory;
      try {
        theory = multifractal::theoretical_dq(o->alpha, e.q);
      } catch (const DomainError&) {
      }
      rows.push_back(Record()
                         .set("alpha", o->alpha)
                         .set("window_lo", window.lo)
                         .set("window_hi", window.hi)
                         .set("normalization", o->normalization)
                         .set("q", e.q)
                         .set("H_q", e.H_q)
                         .set("log_N", e.log_N)
                         .set("D_q", e.D_q)
                         .set("D_q_theory", optional_value(theory))
                         .set("samples", static_cast<u64>(e.samples)));
    }
    return rows;
  };
}

Action add_dq_theory(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "dq-theory",
      "Predicted strong-coupling exponent (1/(2 alpha)) (1 - 1/(2q)) log 2");
  auto alpha = std::make_shared<double>();
  auto q = std::make_shared<std::vector<double>>();
  cmd->add_option("--alpha", *alpha, "Coupling exponent in (1/4, 1/2)")->required();
  cmd->add_option("--q", *q, "Comma-separated orders")->required()->delimiter(',');
  return [alpha, q] {
    const auto qs = sorted(*q);
    for (double v : qs) multifractal::theoretical_dq(*alpha, v);
    Rows rows;
    for (double v : qs) {
      rows.push_back(Record()
                         .set("alpha", *alpha)
                         .set("q", v)
                         .set("D_q", multifractal::theoretical_dq(*alpha, v)));
    }
    return rows;
  };
}

Action add_epstein(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "epstein",
      "Epstein zeta function of Q(x,y) = a^2 x^2 + y^2/a^2, continued to all s != 1");
  auto a = std::make_shared<double>();
  auto s = std::make_shared<std::vector<double>>();
  auto tol = std::make_shared<double>(1e-15);
  cmd->add_option("--a", *a, "Aspect parameter a > 0")->required();
  cmd->add_option("--s", *s, "RE[,IM]")->required()->delimiter(',')->expected(1, 2);
  cmd->add_option("--tol", *tol, "Truncation tolerance");
  return [a, s, tol] {
    require(s->size() == 1 || s->size() == 2, "--s takes RE or RE,IM");
    require_finite(*s, "--s");
    const zeta::QuadraticForm form(*a);
    const std::complex<double> arg((*s)[0], s->size() == 2 ? (*s)[1] : 0.0);
    const auto z = zeta::epstein_zeta(form, arg, *tol);
    return Rows{Record()
                    .set("a", *a)
                    .set("s_re", arg.real())
                    .set("s_im", arg.imag())
                    .set("value_re", z.value.real())
                    .set("value_im", z.value.imag())
                    .set("tail_bound", z.tail_bound)
                    .set("terms_used", z.terms_used)};
  };
}

Action add_funceq(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "funceq",
      "Functional equation zeta_Q(1-s) = phi_Q(s) zeta_Q(s) with "
      "phi_Q(s) = pi^(1-2s) Gamma(s)/Gamma(1-s)");
  auto a = std::make_shared<double>();
  auto grid = std::make_shared<std::vector<double>>();
  cmd->add_option("--a", *a, "Aspect parameter a > 0")->required();
  cmd->add_option("--s-grid", *grid, "Comma-separated real s")->required()->delimiter(',');
  return [a, grid] {
    const auto ss = sorted(*grid);
    require_finite(ss, "--s-grid");
    const zeta::QuadraticForm form(*a);
    return sweep(ss.size(), [&](std::size_t i) {
      const double s = ss[i];
      const auto left = zeta::epstein_zeta(form, {1.0 - s, 0.0});
      const auto right = zeta::epstein_zeta(form, {s, 0.0});
      const double phi = zeta::phi_q(form, {s, 0.0}).real();
      const double rhs = phi * right.real();
      return Rows{Record()
                      .set("a", *a)
                      .set("s", s)
                      .set("zeta_1_minus_s", left.real())
                      .set("phi", phi)
                      .set("zeta_s", right.real())
                      .set("residual", std::fabs(left.real() - rhs))
                      .set("tail_bound",
                           left.tail_bound + std::fabs(phi) * right.tail_bound)};
    });
  };
}

Action add_dstar(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "dstar",
      "Ground-state moments d*_q = zeta_Q(2q) and exponents "
      "D*_q = log(|d*_q| / |d*_1|^q) / (1 - q)");
  auto a = std::make_shared<double>();
  auto q = std::make_shared<std::vector<double>>();
  cmd->add_option("--a", *a, "Aspect parameter a > 0")->required();
  cmd->add_option("--q", *q, "Comma-separated orders")->required()->delimiter(',');
  return [a, q] {
    const auto qs = sorted(*q);
    require_finite(qs, "--q");
    for (double v : qs) {
      require(v != 0.5, "d*_q has a pole at q = 1/2");
      require(std::fabs(2.0 * v) <= 50.0, "|2q| must be <= 50");
    }
    const zeta::QuadraticForm form(*a);
    return sweep(qs.size(), [&](std::size_t i) {
      const auto z = zeta::epstein_zeta(form, {2.0 * qs[i], 0.0});
      return Rows{Record()
                      .set("a", *a)
                      .set("q", qs[i])
                      .set("d_star", z.real())
                      .set("tail_bound", z.tail_bound)
                      .set("D_star", multifractal::d_star_exponent(form, qs[i]))};
    });
  };
}

Action add_symmetry(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "symmetry",
      "Residual of the ground-state symmetry relation between D*_q and "
      "D*_(1/2-q) about q = 1/4");
  auto a = std::make_shared<double>();
  auto q = std::make_shared<std::vector<double>>();
  cmd->add_option("--a", *a, "Aspect parameter a > 0")->required();
  cmd->add_option("--q", *q, "Comma-separated orders")->required()->delimiter(',');
  return [a, q] {
    const auto qs = sorted(*q);
    require_finite(qs, "--q");
    for (double v : qs) {
      require(2.0 * v != std::round(2.0 * v),
              "q = " + num(v) + " makes 2q an integer, a pole of the relation");
      require(std::fabs(2.0 * v) <= 48.0, "|2q| must be <= 48");
    }
    const zeta::QuadraticForm form(*a);
    return sweep(qs.size(), [&](std::size_t i) {
      const double v = qs[i];
      return Rows{Record()
                      .set("a", *a)
                      .set("q", v)
                      .set("mirror_q", 0.5 - v)
                      .set("D_star_q", multifractal::d_star_exponent(form, v))
                      .set("D_star_mirror", multifractal::d_star_exponent(form, 0.5 - v))
                      .set("residual", multifractal::symmetry_check(form, v))};
    });
  };
}

Action add_landau(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "landau",
      "Density of sums of two squares: B(x) sqrt(log x) / x, which decreases "
      "toward a constant");
  auto grid = std::make_shared<std::vector<double>>();
  cmd->add_option("--x-grid", *grid, "Comma-separated x >= 10")->required()->delimiter(',');
  return [grid] {
    const auto xs = sorted(*grid);
    for (double x : xs) {
      require(std::isfinite(x) && x >= 10.0, "landau needs x >= 10");
      require(x <= static_cast<double>(arithmetic::kMaxTableEntries),
              "x exceeds the sieve budget of 2^27");
    }
    return sweep(xs.size(), [&](std::size_t i) {
      const double x = xs[i];
      return Rows{Record()
                      .set("x", x)
                      .set("representable",
                           arithmetic::representable_count(static_cast<u64>(x)))
                      .set("ratio", arithmetic::landau_ratio(x))};
    });
  };
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Lattice sums, spectra and multifractal exponents of the square torus "
      "with a point scatterer"};
  app.name("seba");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string format = "csv";
  std::string output;
  bool timing = false;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", output, "Write to this file instead of stdout");
  app.add_flag("--timing", timing, "Add a wall_time_s column");

  std::vector<std::pair<CLI::App*, Action>> commands;
  for (auto add : {add_r2, add_shells, add_spectrum, add_newvals, add_measure,
                   add_moments, add_entropy, add_dq, add_dq_theory, add_epstein,
                   add_funceq, add_dstar, add_symmetry, add_landau}) {
    Action action = add(app);
    commands.emplace_back(app.get_subcommands({}).back(), std::move(action));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Rows rows;
  try {
    for (auto& [cmd, action] : commands) {
      if (cmd->parsed()) rows = action();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitDomain;
  }
  if (timing) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    for (auto& r : rows) r.set("wall_time_s", seconds);
  }

  const Format fmt = format == "json" ? Format::json : Format::csv;
  if (output.empty()) {
    write(out, rows, fmt);
    out.flush();
    return kExitOk;
  }
  std::ostringstream buffer;
  write(buffer, rows, fmt);
  std::ofstream file(output, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open " << output << " for writing\n";
    return kExitDomain;
  }
  file << buffer.str();
  file.close();
  if (!file) {
    err << "error: failed writing " << output << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  std::vector<const char*> argv{"seba"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace seba::cli
