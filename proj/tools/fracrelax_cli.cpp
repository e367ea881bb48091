// fracrelax command-line front end.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracrelax/fitting.hpp"
#include "fracrelax/io.hpp"
#include "fracrelax/mlf.hpp"
#include "fracrelax/relax.hpp"
#include "fracrelax/specparams.hpp"
#include "fracrelax/verify.hpp"
#include "fracrelax/volterra.hpp"

using namespace fracrelax;

namespace {

struct SpecOptions {
  std::string spec_path;
  std::optional<double> alpha;
  std::vector<double> gamma;
};

void add_spec_options(CLI::App* cmd, SpecOptions& o) {
  auto* file = cmd->add_option("--spec", o.spec_path, "spec JSON {\"n\",\"alpha\",\"gamma\"}")
                   ->check(CLI::ExistingFile);
  auto* a = cmd->add_option("--alpha", o.alpha, "order alpha in (0, 1]");
  auto* g = cmd->add_option("--gamma", o.gamma, "type gamma_1,...,gamma_n")->delimiter(',');
  file->excludes(a)->excludes(g);
}

DerivativeSpec load_spec(const SpecOptions& o) {
  if (!o.spec_path.empty()) return spec_from_json(read_json_file(o.spec_path));
  if (!o.alpha || o.gamma.empty()) {
    throw ValidationError("give either --spec FILE or both --alpha and --gamma");
  }
  return DerivativeSpec(*o.alpha, o.gamma);
}

std::string sidecar_path(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return out.substr(0, dot) + ".json";
  }
  return out + ".json";
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    atomic_write(out, text);
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// --- subcommands -----------------------------------------------------------

struct MlfOptions {
  double alpha = 1.0, beta = 1.0, z = 0.0;
};

int run_mlf(const MlfOptions& o, const std::string& format, const std::string& out) {
  const MLValue v = eval_ml_detailed({o.alpha, o.beta, o.z});
  if (format == "json") {
    emit(out, Json{{"alpha", o.alpha}, {"beta", o.beta}, {"z", o.z}, {"value", v.value},
                   {"regime", std::string(to_string(v.regime))}}
                  .dump(2) + "\n");
  } else {
    emit(out, num(v.value) + " " + std::string(to_string(v.regime)) + "\n");
  }
  return 0;
}

int run_classify(const SpecOptions& so, const std::string& format, const std::string& out) {
  const DerivativeSpec spec = load_spec(so);
  const ValidationReport v = validate(spec);
  if (!v.valid) require_valid(spec);
  const SpecClass c = classify(spec);
  if (format == "json") {
    Json j{{"spec", to_json(spec)}, {"classification", to_json(c)}, {"validation", to_json(v)}};
    if (spec.n() == 2) j["region"] = std::string(to_string(triangle_region(spec)));
    emit(out, j.dump(2) + "\n");
  } else {
    std::string text = label(c) + "\n" + c.notes + "\n";
    if (spec.n() == 2) text += "region: " + std::string(to_string(triangle_region(spec))) + "\n";
    emit(out, text);
  }
  return 0;
}

struct SolveOptions {
  double lambda = 1.0;
  std::vector<double> init;
  double xmax = 10.0;
  int points = 200;
};

int run_solve(const SpecOptions& so, const SolveOptions& o, const std::string& out) {
  const DerivativeSpec spec = load_spec(so);
  const RelaxationProblem p{spec, o.lambda, o.init};
  const RelaxationSolution sol = solve_relaxation(p);
  if (o.points < 2) throw ValidationError("--points must be >= 2");
  std::vector<double> sig;
  for (const auto& t : sol.terms) sig.push_back(t.sigma);
  const GradedGrid grid(o.xmax, o.points, GradedGrid::default_grading(sig));
  std::vector<double> ys(grid.size());
  for (int i = 0; i < grid.size(); ++i) ys[i] = evaluate_solution(sol, grid[i]);
  const std::string csv = xy_csv(grid.nodes(), ys);
  Json side{{"spec", to_json(spec)},
            {"classification", to_json(classify(spec))},
            {"solution", to_json(sol)},
            {"cm_verdict", to_json(cm_verdict(p))},
            {"asymptotic_form", to_json(asymptotic_form(p))}};
  if (out.empty()) {
    std::cout << csv;
    return 0;
  }
  atomic_write(out, csv);
  atomic_write(sidecar_path(out), side.dump(2) + "\n");
  return 0;
}

struct PicardOptions {
  std::string rhs = "linear:-1.0";
  std::vector<double> init;
  double tol = 1e-10;
  int max_iter = 500;
  double xmax = 5.0;
  int points = 1024;
};

int run_picard(const SpecOptions& so, const PicardOptions& o, const std::string& out) {
  const DerivativeSpec spec = load_spec(so);
  const auto sigma = classify(spec).effective.sigma();
  if (o.points < 16) throw ValidationError("--points must be >= 16");
  const GradedGrid grid(o.xmax, o.points, GradedGrid::default_grading(sigma));
  const VolterraProblem p{spec, make_rhs(o.rhs), o.init, grid, o.tol, o.max_iter};
  PicardResult r;
  try {
    r = picard_solve(p);
  } catch (const PicardNonConvergence& e) {
    std::cerr << "convergence log:";
    for (double c : e.last().history) std::cerr << " " << c;
    std::cerr << "\n";
    throw;
  }
  const std::string csv = xy_csv(grid.nodes(), r.solution.values);
  Json log{{"spec", to_json(spec)}, {"rhs", o.rhs},        {"iterations", r.iterations},
           {"converged", r.converged}, {"residual", r.residual}, {"history", r.history}};
  if (out.empty()) {
    std::cout << csv;
    std::cerr << "iterations " << r.iterations << ", residual " << r.residual << "\n";
    return 0;
  }
  atomic_write(out, csv);
  atomic_write(sidecar_path(out), log.dump(2) + "\n");
  return 0;
}

struct FitOptions {
  std::string data;
  int n = 1;
  std::vector<std::string> free;
  std::string bounds;
  std::vector<std::string> guess;
  std::uint64_t seed = 42;
  std::string curve;
  bool downweight_origin = false;
};

// alpha = 0.5 and sigma_k = (alpha - 1)(k - 1) / n: a truly nth level,
// admissible starting type (Caputo for n = 1).
std::vector<double> default_guess(int n) {
  const double alpha = 0.5;
  std::vector<double> p{alpha};
  double prev = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double sigma = (alpha - 1.0) * (k - 1) / n;
    p.push_back(k == 1 ? sigma + 1.0 - alpha : sigma - prev + 1.0);
    prev = sigma;
  }
  p.push_back(1.0);
  for (int k = 1; k <= n; ++k) p.push_back(1.0);
  return p;
}

int slot_of(const std::vector<std::string>& names, const std::string& key) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == key) return static_cast<int>(i);
  }
  throw ValidationError("unknown fit parameter '" + key + "'");
}

int run_fit(const FitOptions& o, const std::string& out) {
  if (o.n < 1) throw ValidationError("--n must be >= 1");
  FitProblem p;
  p.n = o.n;
  read_xy_csv(read_text_file(o.data), p.x, p.y);
  const auto names = fit_parameter_names(o.n);
  p.free_mask.assign(names.size(), false);
  for (const auto& f : o.free) p.free_mask[slot_of(names, f)] = true;
  p.bounds = default_fit_bounds(o.n);
  if (!o.bounds.empty()) {
    const Json b = read_json_file(o.bounds);
    if (!b.is_object()) throw ValidationError("bounds JSON must be an object");
    for (auto it = b.begin(); it != b.end(); ++it) {
      const int i = slot_of(names, it.key());
      try {
        const auto lh = it.value().get<std::vector<double>>();
        if (lh.size() != 2) throw ValidationError("bounds for '" + it.key() + "' need [lo, hi]");
        p.bounds.lo[i] = lh[0];
        p.bounds.hi[i] = lh[1];
      } catch (const Json::exception&) {
        throw ValidationError("bounds for '" + it.key() + "' must be [lo, hi]");
      }
    }
  }
  p.initial_guess = default_guess(o.n);
  for (const auto& g : o.guess) {
    const auto eq = g.find('=');
    if (eq == std::string::npos) throw ValidationError("--guess entries look like name=value");
    try {
      p.initial_guess[slot_of(names, g.substr(0, eq))] = std::stod(g.substr(eq + 1));
    } catch (const std::invalid_argument&) {
      throw ValidationError("bad number in --guess '" + g + "'");
    }
  }
  p.seed = o.seed;
  p.downweight_origin = o.downweight_origin;
  const FitResult r = fit(p);
  Json j = to_json(r, o.n);
  j["tail"] = to_json(fit_report_tail(p, r));
  std::string curve_csv;
  if (!o.curve.empty()) {
    const auto model = fit_model(o.n, r.parameters);
    const RelaxationSolution sol = solve_relaxation(*model);
    std::vector<double> ys;
    for (double x : p.x) ys.push_back(evaluate_solution(sol, x));
    curve_csv = xy_csv(p.x, ys);
  }
  emit(out, j.dump(2) + "\n");
  if (!o.curve.empty()) atomic_write(o.curve, curve_csv);
  return 0;
}

int run_verify(const std::string& suite, const SuiteOptions& o, const std::string& out) {
  const SuiteReport r = run_suite(suite, o);
  emit(out, r.json.dump(2) + "\n");
  std::cerr << suite << ": " << r.trials << " trials, " << r.failures << " failure(s)\n";
  return r.failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nth level fractional derivatives, Mittag-Leffler relaxation and friends"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out, format = "text";
  std::uint64_t seed = 7;
  app.add_option("--out", out, "output file (written atomically)");
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  MlfOptions mo;
  auto* mlf = app.add_subcommand("mlf", "evaluate E_{alpha,beta}(z), z <= 0");
  mlf->add_option("--alpha", mo.alpha)->required();
  mlf->add_option("--beta", mo.beta)->required();
  mlf->add_option("--z", mo.z)->required();

  SpecOptions cso;
  auto* cls = app.add_subcommand("classify", "validate and classify a derivative type");
  add_spec_options(cls, cso);

  SpecOptions sso;
  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "closed-form relaxation solution");
  add_spec_options(solve, sso);
  solve->add_option("--lambda", so.lambda, "relaxation rate (> 0)")->required();
  solve->add_option("--init", so.init, "initial values y_1,...")->delimiter(',')->required();
  solve->add_option("--xmax", so.xmax);
  solve->add_option("--points", so.points);

  SpecOptions pso;
  PicardOptions po;
  auto* picard = app.add_subcommand("picard", "Picard iteration for D y = F(x, y)");
  add_spec_options(picard, pso);
  picard->add_option("--rhs", po.rhs, "linear:c or logistic:a,b");
  picard->add_option("--init", po.init)->delimiter(',')->required();
  picard->add_option("--tol", po.tol);
  picard->add_option("--max-iter", po.max_iter);
  picard->add_option("--xmax", po.xmax);
  picard->add_option("--points", po.points);

  FitOptions fo;
  auto* fitcmd = app.add_subcommand("fit", "least-squares fit of x,y data");
  fitcmd->add_option("--data", fo.data, "CSV with header x,y")->required()->check(CLI::ExistingFile);
  fitcmd->add_option("--n", fo.n, "level");
  fitcmd->add_option("--free", fo.free, "alpha,gamma1,..,lambda,y1,..")->delimiter(',')->required();
  fitcmd->add_option("--bounds", fo.bounds, "JSON {name: [lo, hi]}")->check(CLI::ExistingFile);
  fitcmd->add_option("--guess", fo.guess, "name=value,...")->delimiter(',');
  fitcmd->add_option("--seed", fo.seed);
  fitcmd->add_option("--curve", fo.curve, "fitted curve CSV");
  fitcmd->add_flag("--downweight-origin", fo.downweight_origin);

  std::string suite;
  SuiteOptions vo;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "ftfc, projector, kernel, laplace, picard or cm")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", vo.trials);
  verify->add_option("--seed", seed);
  verify->add_option("--points", vo.points);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*mlf) return run_mlf(mo, format, out);
    if (*cls) return run_classify(cso, format, out);
    if (*solve) return run_solve(sso, so, out);
    if (*picard) return run_picard(pso, po, out);
    if (*fitcmd) return run_fit(fo, out);
    if (*verify) {
      vo.seed = seed;
      return run_verify(suite, vo, out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
