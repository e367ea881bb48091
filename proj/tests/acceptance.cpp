// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fracrelax/fitting.hpp"
#include "fracrelax/mlf.hpp"
#include "fracrelax/powerlaw.hpp"
#include "fracrelax/relax.hpp"
#include "fracrelax/rng.hpp"
#include "fracrelax/verify.hpp"
#include "fracrelax/volterra.hpp"

using namespace fracrelax;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0.0 || secs < budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s  %2d %-26s %s (%.2f s%s)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              secs, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome from_suite(const SuiteReport& r, const char* what) {
  double worst = 0.0;
  for (const auto& d : r.json["draws"]) {
    for (const char* key : {"error", "max_coeff"}) {
      if (d.contains(key)) worst = std::max(worst, d[key].get<double>());
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d ok, worst %s %.2e", r.trials - r.failures, r.trials, what,
                worst);
  return {r.failures == 0, buf};
}

double rel_coeff(const PowerSum& got, const PowerSum& want) {
  return (got - want).max_abs_coeff() / std::max(want.max_abs_coeff(), 1e-300);
}

double erfcx(double x) {
  if (x < 5.0) return std::exp(x * x) * std::erfc(x);
  double s = 1.0, t = 1.0;
  for (int k = 1; k < 30; ++k) {
    t *= -(2.0 * k - 1.0) / (2.0 * x * x);
    s += t;
  }
  return s / (x * std::sqrt(M_PI));
}

// Least-squares slope of log|f| against log x on a log grid.
double loglog_slope(const std::function<double(double)>& f, double lo, double hi, int pts = 41) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < pts; ++i) {
    const double lx = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (pts - 1);
    const double ly = std::log(std::fabs(f(std::exp(lx))));
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
}

Outcome projector_structure() {
  Rng rng(21);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double a = rng.uniform(0.1, 0.95);
    const PowerSum fc{{rng.uniform(-2, 2), 0.0}, {rng.uniform(-2, 2), rng.uniform(1.0, 3.0)}};
    const PowerSum f = fc + PowerSum::monomial(rng.uniform(-2, 2), a - 1.0);
    // Caputo: one kernel term x^0 with coefficient f(0).
    auto c = projector_apply(DerivativeSpec(a, {1.0 - a}), fc);
    if (c.coeffs.sigma.size() != 1 || std::fabs(c.coeffs.sigma[0]) > 1e-14) return {false, "Caputo exponent"};
    worst = std::max(worst, std::fabs(c.coeffs.p[0] - value_at_zero(fc)));
    // Riemann-Liouville: x^{a-1} with coefficient (I^{1-a} f)(0) / Gamma(a).
    auto r = projector_apply(DerivativeSpec(a, {0.0}), f);
    if (std::fabs(r.coeffs.sigma[0] - (a - 1.0)) > 1e-14) return {false, "RL exponent"};
    const double rl = value_at_zero(rl_integral(1.0 - a, f)) / std::tgamma(a);
    worst = std::max(worst, std::fabs(r.coeffs.p[0] - rl) / std::max(1.0, std::fabs(rl)));
    // Hilfer of type g: x^{a+g-1} with (I^{(1-a)(1-b)} f)(0) / Gamma(a+g).
    const double g = rng.uniform(0.0, 1.0 - a);
    const PowerSum fh{{rng.uniform(-2, 2), a + g - 1.0}, {rng.uniform(-2, 2), 1.5}};
    auto h = projector_apply(DerivativeSpec(a, {g}), fh);
    if (std::fabs(h.coeffs.sigma[0] - (a + g - 1.0)) > 1e-14) return {false, "Hilfer exponent"};
    const double hv = value_at_zero(rl_integral(1.0 - a - g, fh)) / std::tgamma(a + g);
    worst = std::max(worst, std::fabs(h.coeffs.p[0] - hv) / std::max(1.0, std::fabs(hv)));
  }
  return {worst <= 1e-12, fmt("special cases worst %.2e", worst)};
}

Outcome mittag_leffler() {
  double e1 = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = 10.0 * i / 199.0;
    const double want = erfcx(x);
    e1 = std::max(e1, std::fabs(eval_ml(0.5, 1.0, -x) - want) / want);
  }
  double e2 = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.01 * std::pow(1e4, i / 100.0);
    const double ex = std::exp(-x);
    e2 = std::max(e2, std::fabs(eval_ml(1.0, 1.0, -x) - ex) / ex);
    const double b2 = -std::expm1(-x) / x;
    e2 = std::max(e2, std::fabs(eval_ml(1.0, 2.0, -x) - b2) / b2);
    const double b3 = (std::expm1(-x) + x) / (x * x);
    if (x > 1e-2) e2 = std::max(e2, std::fabs(eval_ml(1.0, 3.0, -x) - b3) / b3);
  }
  // |E - leading| <= C x^-2 on [1e2, 1e5]: the remainder decays at least as x^-2.
  double worst_slope = -1e300, C = 0.0;
  for (double a : {0.3, 0.5, 0.8}) {
    for (double b : {1.0, 1.2}) {
      auto rem = [&](double x) {
        return eval_ml(a, b, -x) - eval_ml_asymptotic_leading({a, b, -x});
      };
      worst_slope = std::max(worst_slope, loglog_slope(rem, 1e2, 1e5));
      for (int i = 0; i <= 30; ++i) {
        const double x = 1e2 * std::pow(1e3, i / 30.0);
        C = std::max(C, std::fabs(rem(x)) * x * x);
      }
    }
  }
  const bool ok = e1 <= 1e-10 && e2 <= 1e-12 && worst_slope <= -2.0 + 0.02 && std::isfinite(C);
  char buf[200];
  std::snprintf(buf, sizeof buf, "erfc %.2e, exp forms %.2e, remainder slope <= %.3f, C = %.3g",
                e1, e2, worst_slope, C);
  return {ok, buf};
}

Outcome picard_vs_closed_form() {
  const double a = 0.6;
  std::vector<std::pair<std::string, DerivativeSpec>> specs{
      {"RL", DerivativeSpec(a, {0.0, 1.0})},
      {"Caputo", DerivativeSpec(a, {1.0 - a, 1.0})},
      {"2L-vertex", DerivativeSpec(a, {1.0 - a, a})},
      {"Hilfer", DerivativeSpec(a, {0.2, 1.0})},
      {"edge-g1", DerivativeSpec(a, {1.0 - a, 0.8})},
      {"edge-g2", DerivativeSpec(a, {0.25, 0.75})}};
  Rng rng(5);
  for (int i = 0; i < 5; ++i) {
    DerivativeSpec s = random_triangle_spec(rng, rng.uniform(0.2, 1.0));
    while (triangle_region(s) != RegionLabel::Interior) s = random_triangle_spec(rng, s.alpha());
    specs.emplace_back("interior", s);
  }
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, spec] : specs) {
    const SpecClass c = classify(spec);
    std::vector<double> y;
    for (int k = 0; k < c.effective.n(); ++k) y.push_back(1.0 + 0.5 * k);
    const double lambda = 1.0;
    const GradedGrid grid(5.0, 4096, GradedGrid::default_grading(c.effective.sigma()));
    const VolterraProblem vp{spec, [lambda](double, double v) { return -lambda * v; }, y, grid,
                             1e-13, 2000};
    const PicardResult pr = picard_solve(vp);
    const RelaxationSolution sol = solve_relaxation({spec, lambda, y});
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      if (grid[i] < 0.1) continue;
      const double ex = evaluate_solution(sol, grid[i]);
      num = std::max(num, std::fabs(ex - pr.solution.values[i]));
      den = std::max(den, std::fabs(ex));
    }
    if (num / den > worst) {
      worst = num / den;
      worst_name = name;
    }
  }
  return {worst <= 1e-5, fmt("11 specs, worst sup-norm relative %.2e", worst) + " (" + worst_name + ")"};
}

Outcome laplace_identity() {
  const std::vector<std::pair<std::string, RelaxationProblem>> cases{
      {"Caputo", {DerivativeSpec(0.7, {0.3}), 1.3, {2.0}}},
      {"RL", {DerivativeSpec(0.6, {0.0}), 1.0, {1.0}}},
      {"2L", {DerivativeSpec(0.5, {0.3, 0.9}), 1.0, {1.0, 0.5}}}};
  double worst = 0.0;
  for (const auto& [name, p] : cases) {
    for (const auto& c : laplace_verify(p, {1.0, 2.0, 5.0})) worst = std::max(worst, c.rel_error);
  }
  return {worst <= 1e-4, fmt("worst relative %.2e at s in {1,2,5}", worst)};
}

Outcome asymptotics() {
  struct Case { const char* name; RelaxationProblem p; };
  const std::vector<Case> cases{{"Caputo", {DerivativeSpec(0.7, {0.3}), 1.3, {2.0}}},
                                {"Hilfer", {DerivativeSpec(0.6, {0.2}), 1.0, {1.0}}},
                                {"2L", {DerivativeSpec(0.5, {0.3, 0.9}), 1.0, {1.0, 0.5}}}};
  std::string detail;
  bool ok = true;
  for (const auto& c : cases) {
    const auto sol = solve_relaxation(c.p);
    double lead = -1e300;
    for (const auto& t : asymptotic_form(c.p).terms) {
      if (t.coeff != 0.0) lead = std::max(lead, t.exponent);
    }
    const double slope = loglog_slope([&](double x) { return evaluate_solution(sol, x); }, 1e3, 1e5);
    ok = ok && std::fabs(slope - lead) <= 0.02;
    detail += std::string(c.name) + fmt(" %.4f/%.2f, ", slope, lead);
  }
  const RelaxationProblem rl{DerivativeSpec(0.5, {0.0}), 1.0, {1.0}};
  const auto sol = solve_relaxation(rl);
  const double s1 = rl.spec.partial_sums()[0];
  const double slope = loglog_slope([&](double x) { return evaluate_solution(sol, x); }, 1e3, 1e5);
  const bool dropped = asymptotic_form(rl).terms[0].coeff == 0.0 && slope < s1 - 1.0 + 0.02;
  detail += fmt("RL %.4f < %.2f", slope, s1 - 1.0 + 0.02);
  return {ok && dropped, detail};
}

Outcome reduction_equivalence() {
  Rng rng(13);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double a = rng.uniform(0.1, 0.95);
    // gamma_2 = 1 merges into Hilfer of type gamma_1 + gamma_2 - 1.
    const double g1 = rng.uniform(0.0, 1.0 - a);
    const DerivativeSpec merged(a, {g1, 1.0});
    const DerivativeSpec hil(a, {g1 + 1.0 - 1.0});
    const PowerSum f = detail::random_projector_input(rng, hil);
    worst = std::max(worst, rel_coeff(nth_level_derivative(merged, f), nth_level_derivative(hil, f)));
    // a + g1 + g2 <= 1 drops the inner factor: Hilfer of type g1.
    const double h1 = rng.uniform(0.0, 1.0 - a);
    const double h2 = rng.uniform(0.0, 1.0 - a - h1);
    const DerivativeSpec low(a, {h1, h2});
    const DerivativeSpec hil2(a, {h1});
    const PowerSum f2 = detail::random_projector_input(rng, hil2);
    worst = std::max(worst, rel_coeff(nth_level_derivative(low, f2), nth_level_derivative(hil2, f2)));
  }
  return {worst <= 1e-10, fmt("100 comparisons, worst coefficient %.2e", worst)};
}

Outcome fit_recovery() {
  const RelaxationProblem truth{DerivativeSpec(0.7, {0.3}), 1.3, {2.0}};
  const auto sol = solve_relaxation(truth);
  FitProblem base;
  base.n = 1;
  for (int i = 0; i < 60; ++i) {
    const double x = std::pow(10.0, -2.0 + 4.0 * i / 59.0);
    base.x.push_back(x);
    base.y.push_back(evaluate_solution(sol, x));
  }
  base.free_mask = {false, false, true, true};
  base.bounds = default_fit_bounds(1);
  double worst = 0.0, slowest = 0.0;
  for (unsigned long long seed = 1; seed <= 5; ++seed) {
    FitProblem p = base;
    Rng start(seed);
    p.initial_guess = {0.7, 0.3, start.uniform(0.2, 5.0), start.uniform(0.5, 5.0)};
    p.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const FitResult r = fit(p);
    slowest = std::max(slowest,
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    worst = std::max({worst, std::fabs(r.parameters[2] / 1.3 - 1.0),
                      std::fabs(r.parameters[3] / 2.0 - 1.0)});
  }
  return {worst <= 0.01 && slowest < 10.0,
          fmt("worst relative %.2e, slowest fit %.2f s", worst, slowest)};
}

}  // namespace

int main() {
  run(1, "fundamental theorem", 1.0, [] { return from_suite(suite_ftfc({100, 7, 1024}), "coefficient"); });
  run(2, "kernel annihilation", 1.0, [] { return from_suite(suite_kernel({50, 7, 1024}), "image"); });
  run(3, "projector", 0.0, [] {
    Outcome a = from_suite(suite_projector({100, 7, 1024}), "residual");
    Outcome b = projector_structure();
    return Outcome{a.pass && b.pass, a.detail + "; " + b.detail};
  });
  run(4, "mittag-leffler", 5.0, mittag_leffler);
  run(5, "picard vs closed form", 30.0, picard_vs_closed_form);
  run(6, "complete monotonicity", 20.0, [] { return from_suite(suite_cm({25, 7, 1024}), "-"); });
  run(7, "laplace identity", 10.0, laplace_identity);
  run(8, "asymptotic slopes", 0.0, asymptotics);
  run(9, "reduction equivalence", 0.0, reduction_equivalence);
  run(10, "fit recovery", 0.0, fit_recovery);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
