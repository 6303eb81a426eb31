// Command-line front end: packings, instances, solver runs, bounds, sweeps, fits.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sco/bounds.hpp"
#include "sco/ensembles.hpp"
#include "sco/harness.hpp"
#include "sco/oracles.hpp"
#include "sco/packing.hpp"
#include "sco/rng.hpp"
#include "sco/solvers.hpp"

namespace {

using namespace sco;

constexpr int kGateFailed = 2;

struct SpecArgs {
  std::string cls = "convex";
  std::string oracle = "B";
  int dim = 16;
  double lipschitz = 1.0;
  std::string p = "2";
  double radius = 0.5;
  double delta = 0.25;
  double theta = 0.0;
  int sparsity = 0;

  ClassSpec build() const {
    ClassSpec s;
    s.kind = parse_function_class(cls);
    s.oracle = parse_oracle_kind(oracle);
    s.dim = dim;
    s.lipschitz = lipschitz;
    s.p_norm = std::stod(p);
    s.radius = radius;
    s.delta = delta;
    s.theta = theta;
    s.sparsity = sparsity;
    s.validate();
    return s;
  }
};

void add_spec_options(CLI::App* app, SpecArgs& a) {
  app->add_option("--class", a.cls, "convex | strong | sparse")->capture_default_str();
  app->add_option("--oracle", a.oracle, "A | B")->capture_default_str();
  app->add_option("--dim", a.dim)->capture_default_str();
  app->add_option("--lipschitz", a.lipschitz)->capture_default_str();
  app->add_option("--p", a.p, "gradient-noise norm exponent; 'inf' allowed")->capture_default_str();
  app->add_option("--radius", a.radius)->capture_default_str();
  app->add_option("--delta", a.delta)->capture_default_str();
  app->add_option("--theta", a.theta, "strong class only")->capture_default_str();
  app->add_option("--sparsity", a.sparsity, "sparse class only")->capture_default_str();
}

PackingSet packing_for(const ClassSpec& spec, std::uint64_t seed, std::size_t max_size = 4096) {
  PackingOptions opts;
  opts.max_size = max_size;
  return spec.kind == FunctionClass::SparseOpt ? build_sparse_packing(spec.dim, spec.sparsity, seed, opts)
                                               : build_dense_packing(spec.dim, seed, opts);
}

std::string join(const Eigen::VectorXd& v) {
  std::ostringstream out;
  out << std::setprecision(12);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

// --- packing ---------------------------------------------------------------

int cmd_packing(int dim, int k, std::uint64_t seed, std::size_t max_size, const std::string& out) {
  PackingOptions opts;
  opts.max_size = max_size;
  const PackingSet set = k > 0 ? build_sparse_packing(dim, k, seed, opts) : build_dense_packing(dim, seed, opts);
  const PackingReport report = verify_packing(set, true, max_size);
  std::cout << "kind " << (set.kind == PackingKind::Dense ? "dense" : "sparse") << "\n"
            << "dim " << set.dim << "\n"
            << "size " << set.size() << "\n"
            << "required_separation " << set.min_separation << "\n"
            << "min_pairwise " << report.min_pairwise << "\n"
            << "status " << (report.ok ? "ok" : "violations") << "\n";
  for (const auto& v : report.violations) std::cout << "violation " << v.describe() << "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out);
    for (const Vertex& v : set.vertices) {
      for (Eigen::Index i = 0; i < v.size(); ++i) f << (i ? "," : "") << v[i];
      f << "\n";
    }
  }
  return report.ok ? 0 : kGateFailed;
}

// --- instance / verify -----------------------------------------------------

int cmd_instance(const SpecArgs& args, std::size_t alpha_index, std::uint64_t packing_seed) {
  const ClassSpec spec = args.build();
  const PackingSet set = packing_for(spec, packing_seed);
  require(alpha_index < set.size(), ErrorCode::OutOfRange,
          "alpha index " + std::to_string(alpha_index) + " outside packing of size " + std::to_string(set.size()));
  const auto ensemble = make_ensemble<double>(spec, set.vertices);
  const auto& inst = ensemble[alpha_index];
  std::cout << std::setprecision(12) << "c " << inst.prefactor() << "\n";
  if (spec.kind == FunctionClass::StronglyConvex)
    std::cout << "kappa " << std::sqrt(strong_convexity_kappa_sq(spec)) << "\n";
  std::cout << "minimizer " << join(inst.minimizer()) << "\n"
            << "min_value " << inst.min_value() << "\n"
            << "packing_size " << set.size() << "\n";
  if (ensemble.size() >= 2) std::cout << "psi " << separation_psi(ensemble) << "\n";
  return 0;
}

int cmd_verify(const SpecArgs& args, int max_dim, std::size_t draws, std::uint64_t seed) {
  require(max_dim >= 1 && max_dim <= 4, ErrorCode::InvalidArgument, "--max-dim must lie in [1, 4]");
  const double step = max_dim <= 3 ? 1e-3 : 1e-2;
  CounterRng rng(seed);
  int failures = 0;
  for (int d = 1; d <= max_dim; ++d) {
    SpecArgs a = args;
    a.dim = d;
    if (a.cls == "sparse") {
      if (d < 2) continue;
      a.sparsity = 1;
    }
    const ClassSpec spec = a.build();
    for (std::size_t n = 0; n < draws; ++n) {
      auto draw = [&] {
        Vertex v(d);
        for (int i = 0; i < d; ++i) v[i] = rng.bernoulli(0.5) ? 1 : -1;
        if (spec.kind == FunctionClass::SparseOpt) {
          v.setZero();
          v[static_cast<int>(rng.below(d))] = rng.bernoulli(0.5) ? 1 : -1;
        }
        return v;
      };
      const auto x = make_instance(spec, draw());
      const auto y = make_instance(spec, draw());
      const double tol = 2.0 * (lipschitz_linf(x) + lipschitz_linf(y)) * step;
      const auto rep = discrepancy(x, y, step);
      const double grid = grid_minimum(x, step);
      const bool ok = std::abs(rep.analytic - *rep.bruteforce) <= tol && std::abs(x.min_value() - grid) <= tol;
      failures += !ok;
      std::cout << std::setprecision(10) << "d=" << d << " draw=" << n << " rho_analytic=" << rep.analytic
                << " rho_grid=" << *rep.bruteforce << " min=" << x.min_value() << " grid_min=" << grid
                << " tol=" << tol << (ok ? " PASS" : " FAIL") << "\n";
    }
  }
  std::cout << (failures ? "FAIL " : "PASS ") << failures << " mismatches\n";
  return failures ? kGateFailed : 0;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string solver = "sgd";
  double prox_a = 2.0;
  std::string set = "box";
  double set_q = 2.0;
  std::uint64_t horizon = 1000;
  std::uint64_t seed = 0;
  std::uint64_t packing_seed = 0;
  std::size_t alpha_index = 0;
  double eta0 = 0.0;  // 0: r/L
  double lambda = 0.0;  // > 0 switches to eta_t = 1/(lambda t)
  std::string trace;
};

int cmd_run(const SpecArgs& sargs, const RunArgs& a) {
  const ClassSpec spec = sargs.build();
  const PackingSet packing = packing_for(spec, a.packing_seed);
  require(a.alpha_index < packing.size(), ErrorCode::OutOfRange, "alpha index outside packing");
  SolverConfig cfg;
  cfg.horizon = a.horizon;
  cfg.seed = a.seed;
  if (a.solver == "sgd") cfg.prox = ProxSpec::euclidean_half();
  else if (a.solver == "mirror") cfg.prox = ProxSpec::power(a.prox_a);
  else throw Error(ErrorCode::InvalidArgument, "unknown solver '" + a.solver + "'");
  if (a.set == "box") cfg.set = FeasibleSet::box(spec.radius);
  else if (a.set == "l2") cfg.set = FeasibleSet::l2_ball(spec.radius);
  else if (a.set == "lq") cfg.set = FeasibleSet::lq_ball(a.set_q, spec.radius);
  else throw Error(ErrorCode::InvalidArgument, "unknown set '" + a.set + "'");
  cfg.stepsize = a.lambda > 0 ? StepSchedule::inverse_t(a.lambda)
                              : StepSchedule::inverse_sqrt(a.eta0 > 0 ? a.eta0 : spec.radius / spec.lipschitz);
  OracleStream<double> oracle(make_instance(spec, packing.vertices[a.alpha_index]), derive_seed(a.seed, 0x0AC1E));
  const auto out = run(oracle, cfg);
  const auto& last = out.gap_trace.back();
  std::cout << std::setprecision(12) << "queries " << out.queries_used << "\n"
            << "averaged_gap " << last.averaged_gap << "\n"
            << "iterate_gap " << last.iterate_gap << "\n";
  if (!a.trace.empty()) {
    std::ofstream f(a.trace);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + a.trace);
    f << "t,gap\n" << std::setprecision(17);
    for (const auto& g : out.gap_trace) f << g.t << "," << g.averaged_gap << "\n";
  }
  return 0;
}

// --- bounds ----------------------------------------------------------------

struct BoundsArgs {
  std::string formula;
  std::uint64_t horizon = 1;
  int ell = 1;
  bool identification = false;
  bool selftest = false;
  std::size_t trials = 300;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::uint64_t packing_seed = 0;
  double eta0 = 0.0;
};

int cmd_selftest(const ClassSpec& spec, const BoundsArgs& a) {
  const PackingSet packing = packing_for(spec, a.packing_seed);
  const auto inst = make_instance(spec, packing.vertices.front());
  CounterRng rng(derive_seed(a.seed, 0x7E57));
  Eigen::VectorXd x(spec.dim);
  for (int i = 0; i < spec.dim; ++i) x[i] = spec.radius * (2.0 * rng.uniform() - 1.0);
  OracleStream<double> stream(inst, derive_seed(a.seed, 1));
  const BiasEstimate bias = bias_estimate(stream, x, a.samples);
  OracleStream<double> stream2(inst, derive_seed(a.seed, 2));
  const SecondMomentEstimate m2 = second_moment_estimate(stream2, x, a.samples);
  const double bound = per_sample_gradient_bound(inst);
  const double sigma_sq = spec.lipschitz * spec.lipschitz;
  const bool bias_ok = bias.within(4.0);
  const bool moment_ok = m2.mean <= sigma_sq + 4.0 * m2.std_error + 1e-12;
  const bool hard_ok = m2.max_norm <= bound * (1 + 1e-12);
  std::cout << std::setprecision(6) << (bias_ok ? "PASS" : "FAIL") << " unbiased value_gap=" << bias.value_gap
            << " (4 se=" << 4 * bias.value_stderr << ") max_grad_gap=" << bias.gradient_gap.maxCoeff() << "\n"
            << (moment_ok ? "PASS" : "FAIL") << " second_moment mean=" << m2.mean << " sigma^2=" << sigma_sq
            << " margin=" << sigma_sq - m2.mean << " (4 se=" << 4 * m2.std_error << ")\n"
            << (hard_ok ? "PASS" : "FAIL") << " per_sample_norm max=" << m2.max_norm << " bound=" << bound << "\n";
  return bias_ok && moment_ok && hard_ok ? 0 : kGateFailed;
}

int cmd_identification(const ClassSpec& spec, const BoundsArgs& a) {
  const PackingSet packing = packing_for(spec, a.packing_seed);
  const auto ensemble = make_ensemble<double>(spec, packing.vertices);
  SolverConfig cfg;
  cfg.horizon = a.horizon;
  cfg.set = FeasibleSet::box(spec.radius);
  cfg.stepsize = StepSchedule::inverse_sqrt(a.eta0 > 0 ? a.eta0 : spec.radius / spec.lipschitz);
  const auto res = identification_experiment(ensemble, spec.oracle, cfg, a.trials, a.seed);
  const int ell = spec.oracle == OracleKind::A ? 1 : spec.dim;
  std::cout << "trials,errors,error_rate,mean_gap,psi_over_9,fallbacks,fano_bound\n"
            << std::setprecision(10) << res.trials << "," << res.errors << "," << res.empirical_error_rate << ","
            << res.mean_opt_gap << "," << res.psi_over_9 << "," << res.fallbacks << ","
            << fano_bound(spec.dim, a.horizon, ell, spec.delta) << "\n";
  return 0;
}

int cmd_bounds(const SpecArgs& sargs, const BoundsArgs& a) {
  if (a.selftest) return cmd_selftest(sargs.build(), a);
  if (a.identification) return cmd_identification(sargs.build(), a);
  std::cout << std::setprecision(12);
  if (a.formula == "kl") {
    std::cout << bernoulli_kl(sargs.delta) << "\n";
  } else if (a.formula == "fano") {
    std::cout << fano_bound(sargs.dim, a.horizon, a.ell, sargs.delta) << "\n";
  } else if (a.formula == "lecam") {
    std::cout << lecam_bound(a.horizon, sargs.delta) << "\n";
  } else if (a.formula == "sparse-fano") {
    std::cout << sparse_fano_bound(sargs.dim, sargs.sparsity, a.horizon, sargs.delta) << "\n";
  } else if (a.formula == "rate") {
    const TheoremRate rate = theorem_rate(sargs.build(), a.horizon);
    std::cout << rate.value << " theorem=" << rate.theorem << " active=" << rate.active_term << "\n";
    for (const auto& t : rate.terms) std::cout << "  " << t.name << " " << t.value << "\n";
  } else {
    throw Error(ErrorCode::InvalidArgument, "pick --formula, --identification or --selftest-oracle");
  }
  return 0;
}

// --- sweep / fit -----------------------------------------------------------

std::vector<RateFit> fits_for(const std::vector<SweepRow>& rows, const SweepConfig& c) {
  std::vector<RateFit> fits;
  auto attempt = [&](FitAxis axis, std::size_t levels) {
    if (levels < 3) return;
    try {
      fits.push_back(fit_rate(rows, axis));
    } catch (const Error& e) {
      std::cerr << "fit along " << to_string(axis) << " skipped: " << e.what() << "\n";
    }
  };
  const bool single_d = c.dims.size() == 1;
  const bool single_T = c.horizons.size() == 1;
  const bool single_k = c.sparsities.size() <= 1;
  if (single_d && single_k) attempt(FitAxis::T, c.horizons.size());
  if (single_T && single_k) attempt(FitAxis::d, c.dims.size());
  if (single_d && single_T) attempt(FitAxis::k, c.sparsities.size());
  return fits;
}

int cmd_sweep(const std::string& config_path, const std::string& out) {
  SweepConfig config = load_sweep_config(config_path);
  if (!out.empty()) config.output_path = out;
  require(!config.output_path.empty(), ErrorCode::InvalidArgument, "no output path (use --out or output=)");
  const auto rows = run_sweep(config);
  const auto fits = fits_for(rows, config);
  emit_report(rows, fits, config, config.output_path);
  std::cout << "rows " << rows.size() << " -> " << config.output_path << "\n";
  for (const auto& f : fits)
    std::cout << "slope_" << to_string(f.axis) << " " << f.slope << " +- " << f.std_error << "\n";
  return 0;
}

struct SlopeGate {
  FitAxis axis = FitAxis::T;
  double target = 0.0;
  double tol = 0.0;
};

SlopeGate parse_gate(const std::vector<std::string>& tokens) {
  std::string joined;
  for (const auto& t : tokens) joined += t + ",";
  SlopeGate g;
  bool have_target = false, have_tol = false;
  std::stringstream ss(joined);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument, "bad --assert-slope token '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "axis") g.axis = parse_fit_axis(value);
    else if (key == "target") g.target = std::stod(value), have_target = true;
    else if (key == "tol") g.tol = std::stod(value), have_tol = true;
    else throw Error(ErrorCode::InvalidArgument, "unknown --assert-slope key '" + key + "'");
  }
  require(have_target && have_tol, ErrorCode::InvalidArgument, "--assert-slope needs target= and tol=");
  return g;
}

int cmd_fit(const std::string& in, const std::string& axis, const std::string& filter,
            const std::vector<std::string>& gate_tokens) {
  const auto rows = read_csv(in);
  const RowFilter f = parse_row_filter(filter);
  const RateFit fit = fit_rate(rows, parse_fit_axis(axis), f);
  std::cout << std::setprecision(6) << "axis " << to_string(fit.axis) << " slope " << fit.slope << " +- "
            << fit.std_error << " intercept " << fit.intercept << " points " << fit.points_used << "\n";
  if (gate_tokens.empty()) return 0;
  const SlopeGate gate = parse_gate(gate_tokens);
  const RateFit gfit = gate.axis == fit.axis ? fit : fit_rate(rows, gate.axis, f);
  const bool ok = std::abs(gfit.slope - gate.target) <= gate.tol;
  std::cout << (ok ? "PASS" : "FAIL") << " slope_" << to_string(gate.axis) << " " << gfit.slope << " target "
            << gate.target << " tol " << gate.tol << "\n";
  return ok ? 0 : kGateFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic convex optimization lower-bound toolkit"};
  app.set_version_flag("--version", std::string(sco::version_string()));
  app.require_subcommand(1);
  int status = 0;

  auto* packing = app.add_subcommand("packing", "build and verify a hypercube packing");
  int p_dim = 16, p_k = 0;
  std::uint64_t p_seed = 0;
  std::size_t p_max = 4096;
  std::string p_out;
  packing->add_option("--dim", p_dim)->required();
  packing->add_option("--sparsity", p_k, "k > 0 builds a k-sparse packing");
  packing->add_option("--seed", p_seed)->required();
  packing->add_option("--max-size", p_max)->capture_default_str();
  packing->add_option("--out", p_out, "write vertices, one CSV row each");
  packing->callback([&] { status = cmd_packing(p_dim, p_k, p_seed, p_max, p_out); });

  SpecArgs i_spec;
  std::size_t i_alpha = 0;
  std::uint64_t i_pseed = 0;
  auto* instance = app.add_subcommand("instance", "print one hard instance and the ensemble separation");
  add_spec_options(instance, i_spec);
  instance->add_option("--alpha-index", i_alpha)->capture_default_str();
  instance->add_option("--packing-seed", i_pseed)->capture_default_str();
  instance->callback([&] { status = cmd_instance(i_spec, i_alpha, i_pseed); });

  SpecArgs v_spec;
  int v_max = 3;
  std::size_t v_draws = 20;
  std::uint64_t v_seed = 0;
  auto* verify = app.add_subcommand("verify", "brute-force cross-check of minimizers and discrepancies");
  add_spec_options(verify, v_spec);
  verify->add_option("--max-dim", v_max)->capture_default_str();
  verify->add_option("--draws", v_draws)->capture_default_str();
  verify->add_option("--seed", v_seed)->capture_default_str();
  verify->callback([&] { status = cmd_verify(v_spec, v_max, v_draws, v_seed); });

  SpecArgs r_spec;
  RunArgs r_args;
  auto* runc = app.add_subcommand("run", "run one solver against one instance");
  add_spec_options(runc, r_spec);
  runc->add_option("--solver", r_args.solver, "sgd | mirror")->capture_default_str();
  runc->add_option("--prox-a", r_args.prox_a, "Phi_a exponent for mirror")->capture_default_str();
  runc->add_option("--set", r_args.set, "box | l2 | lq")->capture_default_str();
  runc->add_option("--set-q", r_args.set_q, "q of the lq ball")->capture_default_str();
  runc->add_option("--T", r_args.horizon)->required();
  runc->add_option("--seed", r_args.seed)->required();
  runc->add_option("--packing-seed", r_args.packing_seed)->capture_default_str();
  runc->add_option("--alpha-index", r_args.alpha_index)->capture_default_str();
  runc->add_option("--eta0", r_args.eta0, "eta_t = eta0/sqrt(t); default r/L");
  runc->add_option("--lambda", r_args.lambda, "use eta_t = 1/(lambda t)");
  runc->add_option("--trace", r_args.trace, "write (t, gap) CSV");
  runc->callback([&] { status = cmd_run(r_spec, r_args); });

  SpecArgs b_spec;
  BoundsArgs b_args;
  auto* bounds = app.add_subcommand("bounds", "information bounds, identification and oracle self-test");
  add_spec_options(bounds, b_spec);
  bounds->add_option("--formula", b_args.formula, "fano | lecam | sparse-fano | kl | rate");
  bounds->add_option("--T", b_args.horizon)->capture_default_str();
  bounds->add_option("--ell", b_args.ell, "coins per round")->capture_default_str();
  bounds->add_flag("--identification", b_args.identification);
  bounds->add_flag("--selftest-oracle", b_args.selftest);
  bounds->add_option("--trials", b_args.trials)->capture_default_str();
  bounds->add_option("--samples", b_args.samples)->capture_default_str();
  bounds->add_option("--seed", b_args.seed)->capture_default_str();
  bounds->add_option("--packing-seed", b_args.packing_seed)->capture_default_str();
  bounds->add_option("--eta0", b_args.eta0, "identification solver step; default r/L");
  bounds->callback([&] { status = cmd_bounds(b_spec, b_args); });

  std::string s_config, s_out;
  auto* sweep = app.add_subcommand("sweep", "run a sweep and write CSV plus manifest");
  sweep->add_option("--config", s_config)->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", s_out);
  sweep->callback([&] { status = cmd_sweep(s_config, s_out); });

  std::string f_in, f_axis = "T", f_filter;
  std::vector<std::string> f_gate;
  auto* fit = app.add_subcommand("fit", "log-log slope of a sweep CSV");
  fit->add_option("--in", f_in)->required()->check(CLI::ExistingFile);
  fit->add_option("--axis", f_axis, "T | d | k")->capture_default_str();
  fit->add_option("--filter", f_filter, "e.g. d=16,k=4");
  fit->add_option("--assert-slope", f_gate, "axis=T target=-0.5 tol=0.1")->expected(1, 3);
  fit->callback([&] { status = cmd_fit(f_in, f_axis, f_filter, f_gate); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}
