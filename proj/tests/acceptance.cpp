// Acceptance criteria 1-10 at desk scale. Prints one PASS/FAIL line per
// criterion; exits nonzero if any fails. `acceptance 3 5` runs a subset.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "sco/bounds.hpp"
#include "sco/harness.hpp"
#include "sco/oracles.hpp"
#include "sco/packing.hpp"

namespace {

using namespace sco;

// Pinned tolerances.
constexpr double kSlopeTolT = 0.1;
constexpr double kSlopeTolD = 0.15;
constexpr double kSlopeTolStrong = 0.2;
constexpr double kRatioFactor = 2.0;
constexpr double kIdentSlack = 0.07;
constexpr std::size_t kIdentTrials = 300;
constexpr double kFanoExample = 0.9514;
constexpr double kFanoTol = 1e-4;
constexpr double kLeCamTol = 1e-12;
constexpr double kGrid = 1e-3;
constexpr int kBruteDraws = 20;
constexpr std::size_t kOracleSamples = 100000;
constexpr double kSigmas = 4.0;

// The sup over instances runs over vertices and over these delta scales;
// inf pins delta = 1/4.
const std::vector<double> kDeltaScales{0.25, 1.0, 4.0, kInf};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<std::uint64_t> horizons_pow2(int lo, int hi) {
  std::vector<std::uint64_t> out;
  for (int k = lo; k <= hi; ++k) out.push_back(1ull << k);
  return out;
}

SweepConfig base_sweep(std::size_t seeds, int max_vertices) {
  SweepConfig c;
  c.master_seed = 42;
  for (std::size_t i = 0; i < seeds; ++i) c.seeds.push_back(1000 + i);
  c.max_vertices = max_vertices;
  c.delta_rule = DeltaRule::Matched;
  c.delta_scales = kDeltaScales;
  return c;
}

SweepConfig convex_sgd_sweep() {
  SweepConfig c = base_sweep(50, 8);
  c.base.kind = FunctionClass::ConvexLipschitz;
  c.base.oracle = OracleKind::B;
  c.base.p_norm = 2.0;
  c.base.radius = 0.5;
  c.base.lipschitz = 1.0;
  c.solver = SolverKind::Sgd;
  c.dims = {16};
  c.horizons = horizons_pow2(8, 14);
  return c;
}

SweepConfig box_mirror_sweep(std::size_t seeds) {
  SweepConfig c = base_sweep(seeds, 4);
  c.base.kind = FunctionClass::ConvexLipschitz;
  c.base.oracle = OracleKind::B;
  c.base.p_norm = 4.0;
  c.base.radius = 0.5;
  c.solver = SolverKind::Recommended;
  c.geometry = Geometry::Box;
  c.step_rule = StepRule::MinimizerTuned;
  return c;
}

SweepConfig sparse_sweep(std::size_t seeds) {
  SweepConfig c = base_sweep(seeds, 2);
  c.base.kind = FunctionClass::SparseOpt;
  c.base.oracle = OracleKind::B;
  c.base.p_norm = kInf;
  c.base.radius = 1.0;
  c.base.sparsity = 4;
  c.solver = SolverKind::Recommended;
  c.geometry = Geometry::Sparse;
  c.step_rule = StepRule::MinimizerTuned;
  c.dims = {1024};
  return c;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome slope_check(const SweepConfig& c, FitAxis axis, double target, double tol) {
  const RateFit f = fit_rate(run_sweep(c), axis);
  return {std::abs(f.slope - target) <= tol,
          fmt("slope %.4f (target %.2f +- %.2f)", f.slope, target, tol) + fmt(", stderr %.3f", f.std_error)};
}

Outcome criterion1() { return slope_check(convex_sgd_sweep(), FitAxis::T, -0.5, kSlopeTolT); }

Outcome criterion2() {
  SweepConfig c = convex_sgd_sweep();
  c.dims = {4, 16, 64, 256};
  c.horizons = {4096};
  return slope_check(c, FitAxis::d, 0.5, kSlopeTolD);
}

Outcome criterion3() {
  SweepConfig c = box_mirror_sweep(20);
  c.dims = {16};
  c.horizons = horizons_pow2(8, 14);
  const Outcome t = slope_check(c, FitAxis::T, -0.5, kSlopeTolT);

  SweepConfig cd = box_mirror_sweep(10);
  cd.dims = {16, 256};
  cd.horizons = {4096};
  const auto rows = run_sweep(cd);
  const double ratio = rows[1].mean_gap / rows[0].mean_gap;
  const double expect = std::pow(16.0, 0.75);
  const bool ratio_ok = ratio >= expect / kRatioFactor && ratio <= expect * kRatioFactor;
  return {t.pass && ratio_ok, "T " + t.detail + fmt("; gap(256)/gap(16) = %.3f (expect %.3f within x%.0f)", ratio,
                                                       expect, kRatioFactor)};
}

Outcome criterion4() {
  SweepConfig c = base_sweep(50, 8);
  c.base.kind = FunctionClass::StronglyConvex;
  c.base.oracle = OracleKind::A;
  c.base.p_norm = 1.0;
  c.base.radius = 1.0;
  c.base.theta = 0.0;
  c.schedule = ScheduleKind::InverseT;
  c.dims = {16};
  c.horizons = horizons_pow2(8, 14);
  // Interior minimizer at every delta the sweep can pick, and L / kappa^2 large enough.
  ClassSpec spec = c.base;
  spec.dim = 16;
  spec.delta = 0.25;
  const bool interior = strong_interior_case(spec.theta, spec.delta);
  const bool compat = check_compat(spec);
  Outcome out = slope_check(c, FitAxis::T, -1.0, kSlopeTolStrong);
  out.pass = out.pass && interior && compat;
  out.detail += std::string("; interior ") + (interior ? "yes" : "no") + ", compat " + (compat ? "yes" : "no");
  return out;
}

Outcome criterion5() {
  SweepConfig c = sparse_sweep(3);
  c.horizons = horizons_pow2(8, 14);
  const Outcome t = slope_check(c, FitAxis::T, -0.5, kSlopeTolT);

  SweepConfig ck = sparse_sweep(10);
  ck.horizons = {4096};
  ck.sparsities = {2, 8};
  const auto rows = run_sweep(ck);
  const double ratio = rows[1].mean_gap / rows[0].mean_gap;
  const bool ratio_ok = ratio >= 4.0 / kRatioFactor && ratio <= 4.0 * kRatioFactor;
  return {t.pass && ratio_ok, "T " + t.detail + fmt("; gap(k=8)/gap(k=2) = %.3f (expect 4 within x%.0f)", ratio,
                                                       kRatioFactor)};
}

Outcome criterion6() {
  ClassSpec spec;
  spec.kind = FunctionClass::ConvexLipschitz;
  spec.oracle = OracleKind::B;
  spec.dim = 16;
  spec.delta = 0.1;
  spec.radius = 0.5;
  const PackingSet pack = build_dense_packing(spec.dim, 6);
  const auto ens = make_ensemble(spec, std::span<const Vertex>(pack.vertices));
  SolverConfig cfg;
  cfg.stepsize = StepSchedule::inverse_sqrt(spec.radius / spec.lipschitz);

  // Smallest power-of-two T whose measured mean gap is within psi/9.
  IdentificationResult solved;
  std::uint64_t T = 256;
  for (; T <= (1u << 18); T *= 2) {
    cfg.horizon = T;
    solved = identification_experiment(ens, OracleKind::B, cfg, kIdentTrials, 61);
    if (solved.mean_opt_gap <= solved.psi_over_9) break;
  }
  const bool markov = solved.mean_opt_gap <= solved.psi_over_9;
  const bool upper = markov && solved.empirical_error_rate <= 1.0 / 3 + kIdentSlack;

  cfg.horizon = 1;
  const IdentificationResult hopeless = identification_experiment(ens, OracleKind::B, cfg, kIdentTrials, 62);
  const double fano = fano_bound(spec.dim, 1, spec.dim, spec.delta);
  const bool lower = hopeless.empirical_error_rate >= fano - kIdentSlack;
  return {upper && lower,
          fmt("T=%.0f: gap %.3g <= psi/9 %.3g, ", double(T), solved.mean_opt_gap, solved.psi_over_9) +
              fmt("error %.3f <= %.3f; ", solved.empirical_error_rate, 1.0 / 3 + kIdentSlack) +
              fmt("T=1: error %.3f >= fano %.3f - %.2f", hopeless.empirical_error_rate, fano, kIdentSlack)};
}

Outcome criterion7() {
  CounterRng rng(7);
  int kl_bad = 0;
  for (int n = 0; n < 1000; ++n) {
    const double delta = 0.25 * (1.0 - rng.uniform());
    kl_bad += bernoulli_kl(delta) > 16 * delta * delta;
  }
  const double fano = fano_bound(1000, 100, 1, 0.05);
  const double lecam = lecam_bound(8, 0.1);
  const bool ok = kl_bad == 0 && std::abs(fano - kFanoExample) <= kFanoTol && std::abs(lecam - 0.2) <= kLeCamTol;
  return {ok, fmt("kl violations %.0f/1000, fano %.6f, lecam %.15f", kl_bad, fano, lecam)};
}

Outcome criterion8() {
  CounterRng rng(8);
  int checks = 0, bad = 0;
  double worst = 0;
  for (FunctionClass kind : {FunctionClass::ConvexLipschitz, FunctionClass::StronglyConvex, FunctionClass::SparseOpt}) {
    for (int d = 1; d <= 3; ++d) {
      if (kind == FunctionClass::SparseOpt && d < 2) continue;  // needs 1 <= k <= d/2
      for (int n = 0; n < kBruteDraws; ++n) {
        ClassSpec s;
        s.kind = kind;
        s.dim = d;
        s.lipschitz = 0.5 + 1.5 * rng.uniform();
        s.radius = 0.25 + 0.75 * rng.uniform();
        s.delta = 0.25 * (1.0 - rng.uniform());
        const bool use_b = rng.bernoulli(0.5);
        s.oracle = use_b ? OracleKind::B : OracleKind::A;
        s.p_norm = use_b ? 4.0 : (kind == FunctionClass::StronglyConvex ? 1.0 : 2.0);
        if (kind == FunctionClass::StronglyConvex) s.theta = 0.9 * rng.uniform();
        if (kind == FunctionClass::SparseOpt) {
          s.oracle = OracleKind::B;
          s.p_norm = kInf;
          s.sparsity = 1;
        }
        auto draw = [&] {
          Vertex v(d);
          for (int i = 0; i < d; ++i) v[i] = rng.bernoulli(0.5) ? 1 : -1;
          if (kind == FunctionClass::SparseOpt) {
            v.setZero();
            v[static_cast<int>(rng.below(d))] = rng.bernoulli(0.5) ? 1 : -1;
          }
          return v;
        };
        const HardInstance<double> a(s, draw()), b(s, draw());
        const double tol = 2.0 * (lipschitz_linf(a) + lipschitz_linf(b)) * kGrid;
        const DiscrepancyReport rep = discrepancy(a, b, kGrid);
        const double err = std::max(std::abs(rep.analytic - *rep.bruteforce),
                                    std::abs(a.min_value() - grid_minimum(a, kGrid)));
        worst = std::max(worst, err / tol);
        bad += err > tol;
        ++checks;
      }
    }
  }
  return {bad == 0, fmt("%.0f draws, %.0f mismatches, worst error/tol %.3f", checks, bad, worst)};
}

Outcome criterion9() {
  struct Kind {
    FunctionClass cls;
    OracleKind oracle;
    double p;
  };
  const Kind kinds[] = {{FunctionClass::ConvexLipschitz, OracleKind::A, 2.0},
                        {FunctionClass::ConvexLipschitz, OracleKind::B, 4.0},
                        {FunctionClass::StronglyConvex, OracleKind::A, 1.0},
                        {FunctionClass::StronglyConvex, OracleKind::B, 4.0},
                        {FunctionClass::SparseOpt, OracleKind::B, kInf}};
  int bad = 0;
  std::string detail;
  for (const Kind& k : kinds) {
    ClassSpec s;
    s.kind = k.cls;
    s.oracle = k.oracle;
    s.p_norm = k.p;
    s.dim = 8;
    s.delta = 0.2;
    s.radius = k.cls == FunctionClass::StronglyConvex ? 1.0 : 0.5;
    s.theta = k.cls == FunctionClass::StronglyConvex ? 0.2 : 0.0;
    s.sparsity = k.cls == FunctionClass::SparseOpt ? 2 : 0;
    Vertex alpha(8);
    for (int i = 0; i < 8; ++i) alpha[i] = i % 3 == 0 ? -1 : 1;
    if (k.cls == FunctionClass::SparseOpt) alpha << 0, 1, 0, 0, 0, -1, 0, 0;
    const HardInstance<double> inst(s, alpha);
    CounterRng rng(derive_seed(9, static_cast<std::uint64_t>(k.cls), static_cast<std::uint64_t>(k.oracle)));
    VectorXd x(8);
    for (int i = 0; i < 8; ++i) x[i] = s.radius * (2 * rng.uniform() - 1);

    OracleStream<double> unbiased(inst, 901);
    const bool bias_ok = bias_estimate(unbiased, x, kOracleSamples).within(kSigmas);
    OracleStream<double> moment(inst, 902);
    const SecondMomentEstimate m = second_moment_estimate(moment, x, kOracleSamples);
    const double sigma_sq = s.lipschitz * s.lipschitz;
    const bool moment_ok = m.mean - kSigmas * m.std_error <= sigma_sq;
    const bool hard_ok = m.max_norm <= per_sample_gradient_bound(inst) * (1 + 1e-12) &&
                         per_sample_gradient_bound(inst) <= s.lipschitz * (1 + 1e-12);
    bad += !(bias_ok && moment_ok && hard_ok);
    detail += std::string(detail.empty() ? "" : "; ") + to_string(k.cls) + "/" + to_string(k.oracle) +
              fmt(" E|g|^2 %.4f max %.4f", m.mean, m.max_norm) + (bias_ok ? "" : " BIAS") +
              (moment_ok ? "" : " MOMENT") + (hard_ok ? "" : " HARD");
  }
  return {bad == 0, detail};
}

Outcome criterion10() {
  const SweepConfig c = convex_sgd_sweep();
  const auto dir = std::filesystem::temp_directory_path() / "sco_acceptance_rerun";
  std::filesystem::create_directories(dir);
  emit_report(run_sweep(c), {}, c, dir / "first.csv");
  emit_report(run_sweep(c), {}, c, dir / "second.csv");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string a = slurp(dir / "first.csv"), b = slurp(dir / "second.csv");
  return {!a.empty() && a == b, fmt("%.0f bytes, identical: ", double(a.size())) + (a == b ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("criterion %2d %s  %s  [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
