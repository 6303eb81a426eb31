#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sco/harness.hpp"
#include "sco/oracles.hpp"

namespace sco {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sco_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

SweepRow synthetic(int d, std::uint64_t T, double gap) {
  SweepRow r;
  r.cls = "convex_lipschitz";
  r.d = d;
  r.T = T;
  r.seed_count = 1;
  r.mean_gap = gap;
  return r;
}

class ScopedThreads {
 public:
  explicit ScopedThreads(const char* n) {
    if (const char* old = std::getenv("SCO_THREADS")) saved_ = old;
    ::setenv("SCO_THREADS", n, 1);
  }
  ~ScopedThreads() {
    if (saved_.empty()) ::unsetenv("SCO_THREADS");
    else ::setenv("SCO_THREADS", saved_.c_str(), 1);
  }

 private:
  std::string saved_;
};

TEST(Config, ParsesEveryKey) {
  const SweepConfig c = parse_sweep_config(R"(
# comment line
class = sparse
oracle = B
lipschitz = 2
p = inf
radius = 0.25
delta = 0.1   # trailing comment
sparsity = 2
dims = 64, 128
horizons = 16,64,256
sparsities = 2,4
seeds = 5,6,7
master_seed = 9
max_vertices = 3
solver = recommended
geometry = sparse
schedule = inverse_sqrt
step_rule = tuned
eta_scale = 0.5
delta_rule = matched
delta_scales = 0.25, 1, inf
c0 = 2
output = out.csv
)");
  EXPECT_EQ(c.base.kind, FunctionClass::SparseOpt);
  EXPECT_EQ(c.base.oracle, OracleKind::B);
  EXPECT_EQ(c.base.lipschitz, 2.0);
  EXPECT_TRUE(std::isinf(c.base.p_norm));
  EXPECT_EQ(c.base.radius, 0.25);
  EXPECT_EQ(c.base.delta, 0.1);
  EXPECT_EQ(c.dims, (std::vector<int>{64, 128}));
  EXPECT_EQ(c.horizons, (std::vector<std::uint64_t>{16, 64, 256}));
  EXPECT_EQ(c.sparsities, (std::vector<int>{2, 4}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{5, 6, 7}));
  EXPECT_EQ(c.master_seed, 9u);
  EXPECT_EQ(c.max_vertices, 3);
  EXPECT_EQ(c.solver, SolverKind::Recommended);
  EXPECT_EQ(c.geometry, Geometry::Sparse);
  EXPECT_EQ(c.step_rule, StepRule::MinimizerTuned);
  EXPECT_EQ(c.eta_scale, 0.5);
  EXPECT_EQ(c.delta_rule, DeltaRule::Matched);
  ASSERT_EQ(c.delta_scales.size(), 3u);
  EXPECT_TRUE(std::isinf(c.delta_scales[2]));
  EXPECT_EQ(c.constants.c0, 2.0);
  EXPECT_EQ(c.output_path, "out.csv");
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, SeedCountDerivesDistinctSeeds) {
  const SweepConfig c = parse_sweep_config("dims = 4\nhorizons = 8\nseed_count = 5\nmaster_seed = 3\n");
  ASSERT_EQ(c.seeds.size(), 5u);
  for (std::size_t i = 1; i < 5; ++i) EXPECT_NE(c.seeds[i], c.seeds[i - 1]);
  EXPECT_EQ(c.seeds, parse_sweep_config("dims = 4\nhorizons = 8\nseed_count = 5\nmaster_seed = 3\n").seeds);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_sweep_config("colour = red\n"), Error);
  EXPECT_THROW(parse_sweep_config("dims 4\n"), Error);
  EXPECT_THROW(parse_sweep_config("seeds = 1\nseed_count = 2\n"), Error);
  EXPECT_THROW(parse_sweep_config("solver = newton\n"), Error);
  EXPECT_THROW(parse_sweep_config("dims = four\n"), Error);
  EXPECT_THROW(load_sweep_config("/nonexistent/sweep.cfg"), Error);
}

TEST(Config, ValidationCatchesBadCells) {
  SweepConfig c = parse_sweep_config("dims = 4\nhorizons = 8\nseeds = 1\n");
  EXPECT_NO_THROW(c.validate());
  c.seeds.clear();
  EXPECT_THROW(c.validate(), Error);
  c.seeds = {1};
  c.eta_scale = 0;
  EXPECT_THROW(c.validate(), Error);
  c.eta_scale = 1;
  c.delta_scales.clear();
  EXPECT_THROW(c.validate(), Error);
  c.delta_scales = {1.0};
  c.base.kind = FunctionClass::SparseOpt;
  c.base.oracle = OracleKind::B;
  c.base.p_norm = kInf;
  c.sparsities = {3};  // > d/2
  EXPECT_THROW(c.validate(), Error);
}

TEST(MatchedDelta, FollowsInformationNormalizer) {
  ClassSpec s;
  s.dim = 16;
  s.oracle = OracleKind::A;
  EXPECT_NEAR(matched_delta(s, 1024, 1.0), std::sqrt(16.0 / 1024), 1e-15);
  s.oracle = OracleKind::B;
  EXPECT_NEAR(matched_delta(s, 1024, 2.0), 2 * std::sqrt(1.0 / 1024), 1e-15);
  EXPECT_EQ(matched_delta(s, 1, 1.0), 0.25);
  EXPECT_EQ(matched_delta(s, 1024, kInf), 0.25);
  s.kind = FunctionClass::SparseOpt;
  s.p_norm = kInf;
  s.dim = 1024;
  s.sparsity = 4;
  EXPECT_NEAR(matched_delta(s, 1 << 20, 1.0), std::sqrt(std::log(1020.0 / 2) / (1 << 20)), 1e-15);
}

TEST(CellSolver, StepRules) {
  SweepConfig c = parse_sweep_config("dims = 4\nhorizons = 8\nseeds = 1\nradius = 0.5\nlipschitz = 2\n");
  ClassSpec spec = c.base;
  spec.dim = 4;
  EXPECT_DOUBLE_EQ(cell_solver_config(c, spec, 8).stepsize.scale, 0.25);
  c.step_rule = StepRule::MinimizerTuned;
  c.eta_scale = 3;
  // SGD prox: Phi(x*) = |x*|^2 / 2 with x* = +-r/2 in every coordinate.
  const double phi = 0.5 * 4 * 0.25 * 0.25;
  EXPECT_NEAR(cell_solver_config(c, spec, 8).stepsize.scale, 3 * std::sqrt(2 * phi) / 2, 1e-15);
  EXPECT_EQ(cell_solver_config(c, spec, 8).checkpoints, (std::vector<std::uint64_t>{8}));
  c.schedule = ScheduleKind::InverseT;
  EXPECT_THROW(cell_solver_config(c, spec, 8), Error);
}

TEST(Fit, ExactInverseSqrtInHorizon) {
  std::vector<SweepRow> rows;
  for (std::uint64_t T = 16; T <= 4096; T *= 4) rows.push_back(synthetic(8, T, 1.0 / std::sqrt(double(T))));
  const RateFit f = fit_rate(rows, FitAxis::T);
  EXPECT_NEAR(f.slope, -0.5, 1e-9);
  EXPECT_NEAR(f.intercept, 0.0, 1e-9);
  EXPECT_LT(f.std_error, 1e-9);
  EXPECT_EQ(f.points_used, 5);
}

TEST(Fit, ExactSqrtInDimensionWithIntercept) {
  std::vector<SweepRow> rows;
  for (int d : {4, 16, 64, 256}) rows.push_back(synthetic(d, 100, 3 * std::sqrt(double(d))));
  const RateFit f = fit_rate(rows, FitAxis::d);
  EXPECT_NEAR(f.slope, 0.5, 1e-9);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-9);
}

TEST(Fit, FilterSelectsRows) {
  std::vector<SweepRow> rows;
  for (int d : {4, 16})
    for (std::uint64_t T = 16; T <= 1024; T *= 4) rows.push_back(synthetic(d, T, d / double(T)));
  const RateFit f = fit_rate(rows, FitAxis::T, parse_row_filter("d=16"));
  EXPECT_NEAR(f.slope, -1.0, 1e-9);
  EXPECT_NEAR(f.intercept, std::log(16.0), 1e-9);
  EXPECT_EQ(f.points_used, 4);
  EXPECT_THROW(parse_row_filter("colour=red"), Error);
}

TEST(Fit, Errors) {
  std::vector<SweepRow> rows{synthetic(4, 16, 0.1), synthetic(4, 64, 0.0), synthetic(4, 256, 0.02)};
  try {
    fit_rate(rows, FitAxis::T);
    FAIL() << "expected NonPositiveGap";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveGap);
  }
  rows.resize(2);
  rows[1].mean_gap = 0.05;
  try {
    fit_rate(rows, FitAxis::T);
    FAIL() << "expected InsufficientPoints";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientPoints);
  }
  EXPECT_THROW(parse_fit_axis("x"), Error);
}

TEST(Csv, HeaderAndRoundTrip) {
  std::vector<SweepRow> rows{synthetic(4, 16, 0.123456789012345678), synthetic(64, 1 << 20, 1e-7)};
  rows[0].std_gap = 0.01;
  rows[0].theorem_rate = 1.0 / 144;
  rows[0].active_term = "cap";
  rows[1].active_term = "sqrt_d_over_T";
  const std::string text = format_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), "class,d,T,k,seed_count,mean_gap,std_gap,theorem_rate,active_term");
  const auto back = parse_csv(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].mean_gap, rows[0].mean_gap);
  EXPECT_EQ(back[0].theorem_rate, rows[0].theorem_rate);
  EXPECT_EQ(back[1].T, rows[1].T);
  EXPECT_EQ(format_csv(back), text);
  EXPECT_THROW(parse_csv("d,T\n1,2\n"), Error);
}

TEST(Report, ZeroFitsManifest) {
  const fs::path dir = scratch_dir("manifest");
  const fs::path csv = dir / "run.csv";
  SweepConfig c = parse_sweep_config("dims = 4\nhorizons = 8\nseeds = 1\nmaster_seed = 42\n");
  emit_report({synthetic(4, 8, 0.5)}, {}, c, csv);
  EXPECT_EQ(manifest_path(csv), dir / "run.manifest.json");
  ASSERT_TRUE(fs::exists(manifest_path(csv)));
  const auto m = nlohmann::json::parse(slurp(manifest_path(csv)));
  EXPECT_EQ(m["fit_count"], 0);
  EXPECT_TRUE(m["fits"].empty());
  EXPECT_EQ(m["master_seed"], 42);
  EXPECT_EQ(m["row_count"], 1);
  EXPECT_EQ(m["config"]["dims"], nlohmann::json::array({4}));
  EXPECT_EQ(read_csv(csv).size(), 1u);
}

TEST(Sweep, OneCellReproducesASingleRun) {
  const SweepConfig c =
      parse_sweep_config("dims = 1\nhorizons = 256\nseeds = 17\nmax_vertices = 1\nmaster_seed = 2\n");
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 1u);
  // The one sampled vertex of the d = 1 packing is +1 or -1; rerun both by hand.
  ClassSpec spec = c.base;
  spec.dim = 1;
  const std::uint64_t seed = derive_seed(17, derive_seed(1, 256, 0), 0);
  bool matched = false;
  for (int sign : {1, -1}) {
    SolverConfig solver = cell_solver_config(c, spec, 256);
    OracleStream<double> stream(HardInstance<double>(spec, Vertex::Constant(1, sign)), seed);
    matched |= run(stream, solver).gap_trace.back().averaged_gap == rows[0].mean_gap;
  }
  EXPECT_TRUE(matched);
  EXPECT_EQ(rows[0].std_gap, 0.0);
}

TEST(Sweep, GapsGrowWithDimensionAndStayNonNegative) {
  const SweepConfig c = parse_sweep_config("dims = 4,16,64\nhorizons = 4096\nseed_count = 4\nmax_vertices = 4\n");
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_TRUE(std::isfinite(r.mean_gap));
    EXPECT_GE(r.mean_gap, -1e-9);
    EXPECT_FALSE(r.failed);
    EXPECT_EQ(r.seed_count, 4u);
  }
  EXPECT_LT(rows[0].mean_gap, rows[1].mean_gap);
  EXPECT_LT(rows[1].mean_gap, rows[2].mean_gap);
}

TEST(Sweep, RowsOrderedAndDeterministicAcrossThreadCounts) {
  const SweepConfig c = parse_sweep_config(R"(
dims = 8, 4
horizons = 256, 64
seed_count = 3
max_vertices = 3
delta_rule = matched
delta_scales = 0.5, 2
)");
  std::string one, many;
  {
    ScopedThreads t("1");
    one = format_csv(run_sweep(c));
  }
  {
    ScopedThreads t("4");
    many = format_csv(run_sweep(c));
  }
  EXPECT_EQ(one, many);
  const auto rows = parse_csv(one);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].d, 4);
  EXPECT_EQ(rows[0].T, 64u);
  EXPECT_EQ(rows[1].T, 256u);
  EXPECT_EQ(rows[3].d, 8);

  const fs::path dir = scratch_dir("rerun");
  emit_report(run_sweep(c), {}, c, dir / "a.csv");
  emit_report(run_sweep(c), {}, c, dir / "b.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.csv"), one);
}

TEST(Sweep, WorstDeltaScaleIsReported) {
  const std::string base = "dims = 8\nhorizons = 256\nseed_count = 3\nmax_vertices = 2\ndelta_rule = matched\n";
  const SweepRow first = run_sweep(parse_sweep_config(base + "delta_scales = 0.5\n"))[0];
  const SweepConfig c = parse_sweep_config(base + "delta_scales = 0.5, 2\n");
  const SweepRow both = run_sweep(c)[0];
  // The first scale runs on the same seeds in both sweeps, so the max can only grow.
  EXPECT_GE(both.mean_gap, first.mean_gap);
  ClassSpec spec = c.base;
  spec.dim = 8;
  EXPECT_TRUE(both.delta == matched_delta(spec, 256, 0.5) || both.delta == matched_delta(spec, 256, 2.0));
}

TEST(Version, NonEmpty) { EXPECT_GT(std::string(version_string()).size(), 0u); }

}  // namespace
}  // namespace sco
