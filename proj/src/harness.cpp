#include "sco/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sco/oracles.hpp"
#include "sco/packing.hpp"
#include "sco/parallel.hpp"
#include "sco/rng.hpp"

#ifndef SCO_VERSION
#define SCO_VERSION "unknown"
#endif

namespace sco {

const char* version_string() noexcept { return SCO_VERSION; }

double matched_delta(const ClassSpec& spec, std::uint64_t horizon, double scale) {
  require(horizon >= 1, ErrorCode::InvalidArgument, "T must be >= 1");
  require(scale > 0, ErrorCode::InvalidArgument, "delta scale must be positive");
  double info = 1.0;
  if (spec.kind == FunctionClass::SparseOpt) {
    info = std::log((spec.dim - spec.sparsity) / (0.5 * spec.sparsity));
  } else if (spec.oracle == OracleKind::A) {
    info = spec.dim;
  }
  return std::min(0.25, scale * std::sqrt(info / static_cast<double>(horizon)));
}

// ---------------------------------------------------------------------------
// Config

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return kInf;
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == v.size() && !v.empty(), ErrorCode::InvalidArgument,
          "key '" + key + "': '" + v + "' is not a number");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == v.size() && !v.empty() && v[0] != '-', ErrorCode::InvalidArgument,
          "key '" + key + "': '" + v + "' is not an unsigned integer");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const std::uint64_t u = parse_u64(key, v);
  require(u <= static_cast<std::uint64_t>(std::numeric_limits<int>::max()), ErrorCode::InvalidArgument,
          "key '" + key + "': value too large");
  return static_cast<int>(u);
}

const char* to_string(SolverKind s) {
  switch (s) {
    case SolverKind::Sgd: return "sgd";
    case SolverKind::Mirror: return "mirror";
    case SolverKind::Recommended: return "recommended";
  }
  return "?";
}

const char* to_string(Geometry g) {
  switch (g) {
    case Geometry::Dual: return "dual";
    case Geometry::Box: return "box";
    case Geometry::Sparse: return "sparse";
  }
  return "?";
}

}  // namespace

void SweepConfig::validate() const {
  require(!dims.empty() && !horizons.empty(), ErrorCode::InvalidArgument, "dims and horizons must be nonempty");
  require(!seeds.empty(), ErrorCode::InvalidArgument, "at least one seed is required");
  require(max_vertices >= 1, ErrorCode::InvalidArgument, "max_vertices must be >= 1");
  require(eta_scale > 0, ErrorCode::InvalidArgument, "eta_scale must be positive");
  require(!delta_scales.empty(), ErrorCode::InvalidArgument, "delta_scales must be nonempty");
  for (double s : delta_scales) require(s > 0, ErrorCode::InvalidArgument, "delta scales must be positive");
  for (std::uint64_t T : horizons) require(T >= 1, ErrorCode::InvalidArgument, "horizons must be >= 1");
  const std::vector<int> ks = sparsities.empty() ? std::vector<int>{base.sparsity} : sparsities;
  for (int d : dims) {
    for (int k : ks) {
      ClassSpec spec = base;
      spec.dim = d;
      spec.sparsity = k;
      spec.validate();
      if (spec.kind == FunctionClass::StronglyConvex)
        require(check_compat(spec), ErrorCode::InvalidArgument,
                "cell d=" + std::to_string(d) + " violates L/kappa^2 >= (r/4) d^(1/p)");
    }
  }
}

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_seed_list = false;
  std::optional<std::size_t> seed_count;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument,
            "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key == "class") c.base.kind = parse_function_class(v);
    else if (key == "oracle") c.base.oracle = parse_oracle_kind(v);
    else if (key == "lipschitz") c.base.lipschitz = parse_double(key, v);
    else if (key == "p") c.base.p_norm = parse_double(key, v);
    else if (key == "radius") c.base.radius = parse_double(key, v);
    else if (key == "delta") c.base.delta = parse_double(key, v);
    else if (key == "theta") c.base.theta = parse_double(key, v);
    else if (key == "sparsity") c.base.sparsity = parse_int(key, v);
    else if (key == "dims") { c.dims.clear(); for (auto& s : split(v, ',')) c.dims.push_back(parse_int(key, s)); }
    else if (key == "horizons") { c.horizons.clear(); for (auto& s : split(v, ',')) c.horizons.push_back(parse_u64(key, s)); }
    else if (key == "sparsities") { c.sparsities.clear(); for (auto& s : split(v, ',')) c.sparsities.push_back(parse_int(key, s)); }
    else if (key == "seeds") { have_seed_list = true; c.seeds.clear(); for (auto& s : split(v, ',')) c.seeds.push_back(parse_u64(key, s)); }
    else if (key == "seed_count") seed_count = parse_u64(key, v);
    else if (key == "master_seed") c.master_seed = parse_u64(key, v);
    else if (key == "max_vertices") c.max_vertices = parse_int(key, v);
    else if (key == "solver") {
      if (v == "sgd") c.solver = SolverKind::Sgd;
      else if (v == "mirror") c.solver = SolverKind::Mirror;
      else if (v == "recommended") c.solver = SolverKind::Recommended;
      else throw Error(ErrorCode::InvalidArgument, "unknown solver '" + v + "'");
    } else if (key == "geometry") {
      if (v == "dual") c.geometry = Geometry::Dual;
      else if (v == "box") c.geometry = Geometry::Box;
      else if (v == "sparse") c.geometry = Geometry::Sparse;
      else throw Error(ErrorCode::InvalidArgument, "unknown geometry '" + v + "'");
    } else if (key == "prox_a") c.prox_a = parse_double(key, v);
    else if (key == "schedule") {
      if (v == "inverse_sqrt") c.schedule = ScheduleKind::InverseSqrt;
      else if (v == "inverse_t") c.schedule = ScheduleKind::InverseT;
      else throw Error(ErrorCode::InvalidArgument, "unknown schedule '" + v + "'");
    } else if (key == "eta_scale") c.eta_scale = parse_double(key, v);
    else if (key == "delta_rule") {
      if (v == "fixed") c.delta_rule = DeltaRule::Fixed;
      else if (v == "matched") c.delta_rule = DeltaRule::Matched;
      else throw Error(ErrorCode::InvalidArgument, "unknown delta rule '" + v + "'");
    } else if (key == "delta_scales") { c.delta_scales.clear(); for (auto& s : split(v, ',')) c.delta_scales.push_back(parse_double(key, s)); }
    else if (key == "step_rule") {
      if (v == "r_over_L") c.step_rule = StepRule::RadiusOverL;
      else if (v == "tuned") c.step_rule = StepRule::MinimizerTuned;
      else throw Error(ErrorCode::InvalidArgument, "unknown step rule '" + v + "'");
    }
    else if (key == "c0") c.constants.c0 = parse_double(key, v);
    else if (key == "c1") c.constants.c1 = parse_double(key, v);
    else if (key == "c2") c.constants.c2 = parse_double(key, v);
    else if (key == "output") c.output_path = v;
    else throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  require(!(have_seed_list && seed_count), ErrorCode::InvalidArgument, "give either seeds or seed_count, not both");
  if (seed_count) {
    c.seeds.clear();
    for (std::size_t i = 0; i < *seed_count; ++i) c.seeds.push_back(derive_seed(c.master_seed, 0x5EED, i));
  }
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_config(buf.str());
}

// ---------------------------------------------------------------------------
// Sweep

SolverConfig cell_solver_config(const SweepConfig& config, const ClassSpec& spec, std::uint64_t horizon) {
  SolverConfig s;
  s.set = FeasibleSet::box(spec.radius);
  s.horizon = horizon;
  s.checkpoints = {horizon};
  switch (config.solver) {
    case SolverKind::Sgd: s.prox = ProxSpec::euclidean_half(); break;
    case SolverKind::Mirror: s.prox = ProxSpec::power(config.prox_a); break;
    case SolverKind::Recommended:
      s.prox = recommended_prox(config.geometry, spec.dim, spec.p_norm).prox;
      break;
  }
  if (config.schedule == ScheduleKind::InverseSqrt) {
    double eta0 = spec.radius / spec.lipschitz;
    if (config.step_rule == StepRule::MinimizerTuned) {
      // Phi(x*) is the same for every vertex: the minimizer only flips signs.
      Vertex alpha = Vertex::Zero(spec.dim);
      alpha.head(spec.kind == FunctionClass::SparseOpt ? spec.sparsity : spec.dim).setOnes();
      const HardInstance<double> probe(spec, alpha);
      eta0 = std::sqrt(2.0 * prox_value(s.prox, probe.minimizer())) / spec.lipschitz;
    }
    s.stepsize = StepSchedule::inverse_sqrt(config.eta_scale * eta0);
  } else {
    require(spec.kind == FunctionClass::StronglyConvex, ErrorCode::UnsupportedCombination,
            "the 1/(kappa^2 t) schedule needs the strongly convex family");
    s.stepsize = StepSchedule::inverse_t(strong_convexity_kappa_sq(spec) / config.eta_scale);
  }
  return s;
}

namespace {

struct Cell {
  int d;
  std::uint64_t T;
  int k;
};

std::uint64_t cell_key(const Cell& c) {
  return derive_seed(static_cast<std::uint64_t>(c.d), c.T, static_cast<std::uint64_t>(c.k));
}

// Up to `count` distinct packing indices drawn without replacement.
std::vector<std::size_t> sample_vertices(std::size_t size, int count, std::uint64_t seed) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  CounterRng rng(seed);
  const std::size_t take = std::min<std::size_t>(size, static_cast<std::size_t>(count));
  for (std::size_t j = 0; j < take; ++j)
    std::swap(idx[j], idx[j + rng.below(size - j)]);
  idx.resize(take);
  return idx;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<int> dims = config.dims, ks = config.sparsities;
  std::vector<std::uint64_t> Ts = config.horizons;
  if (ks.empty()) ks = {config.base.sparsity};
  for (auto* v : {&dims, &ks}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  std::sort(Ts.begin(), Ts.end());
  Ts.erase(std::unique(Ts.begin(), Ts.end()), Ts.end());

  std::vector<Cell> cells;
  for (int d : dims)
    for (std::uint64_t T : Ts)
      for (int k : ks) cells.push_back({d, T, k});

  // Packings and vertex samples depend on (d, k) only, so every T sees the same vertices.
  std::map<std::pair<int, int>, std::vector<Vertex>> chosen;
  for (int d : dims) {
    for (int k : ks) {
      const std::uint64_t pseed = derive_seed(config.master_seed, 0xBAC4, static_cast<std::uint64_t>(d) << 20 | k);
      const PackingSet set = config.base.kind == FunctionClass::SparseOpt ? build_sparse_packing(d, k, pseed)
                                                                           : build_dense_packing(d, pseed);
      std::vector<Vertex> picked;
      for (std::size_t i : sample_vertices(set.size(), config.max_vertices, derive_seed(pseed, 0xA1FA)))
        picked.push_back(set.vertices[i]);
      chosen[{d, k}] = std::move(picked);
    }
  }

  const std::vector<double> scales =
      config.delta_rule == DeltaRule::Matched ? config.delta_scales : std::vector<double>{1.0};
  struct Task {
    std::size_t cell;
    std::size_t scale;
    std::size_t vertex;
    std::size_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t m = 0; m < scales.size(); ++m)
      for (std::size_t v = 0; v < chosen.at({cells[c].d, cells[c].k}).size(); ++v)
        for (std::size_t s = 0; s < config.seeds.size(); ++s) tasks.push_back({c, m, v, s});

  auto cell_spec = [&](const Cell& cell, std::size_t m) {
    ClassSpec spec = config.base;
    spec.dim = cell.d;
    spec.sparsity = cell.k;
    if (config.delta_rule == DeltaRule::Matched) spec.delta = matched_delta(spec, cell.T, scales[m]);
    return spec;
  };

  std::vector<double> gaps(tasks.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<char> failed(tasks.size(), 0);
  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    const Cell& cell = cells[task.cell];
    try {
      const ClassSpec spec = cell_spec(cell, task.scale);
      const Vertex& alpha = chosen.at({cell.d, cell.k})[task.vertex];
      SolverConfig solver = cell_solver_config(config, spec, cell.T);
      solver.seed = derive_seed(config.seeds[task.seed], cell_key(cell), task.scale << 32 | task.vertex);
      OracleStream<double> stream(HardInstance<double>(spec, alpha), solver.seed);
      gaps[i] = run(stream, solver).gap_trace.back().averaged_gap;
    } catch (const Error&) {
      failed[i] = 1;
    }
  });

  std::vector<SweepRow> rows;
  std::size_t t = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    SweepRow row;
    row.cls = to_string(config.base.kind);
    row.d = cell.d;
    row.T = cell.T;
    row.k = config.base.kind == FunctionClass::SparseOpt ? cell.k : 0;
    row.seed_count = config.seeds.size();
    const TheoremRate rate = theorem_rate(cell_spec(cell, 0), cell.T, config.constants);
    row.theorem_rate = rate.value;
    row.active_term = rate.active_term;
    const std::size_t nv = chosen.at({cell.d, cell.k}).size();
    row.mean_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < scales.size(); ++m) {
      for (std::size_t v = 0; v < nv; ++v) {
        double sum = 0, sq = 0;
        const std::size_t n = config.seeds.size();
        for (std::size_t s = 0; s < n; ++s, ++t) {
          row.failed |= failed[t] != 0;
          sum += gaps[t];
          sq += gaps[t] * gaps[t];
        }
        const double mean = sum / static_cast<double>(n);
        if (mean > row.mean_gap) {
          row.mean_gap = mean;
          row.std_gap = n > 1 ? std::sqrt(std::max(0.0, (sq - n * mean * mean) / static_cast<double>(n - 1))) : 0.0;
          row.delta = cell_spec(cell, m).delta;
        }
      }
    }
    if (row.failed) {
      row.mean_gap = row.std_gap = std::numeric_limits<double>::quiet_NaN();
      row.active_term = "failed";
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Fitting

FitAxis parse_fit_axis(const std::string& name) {
  if (name == "T") return FitAxis::T;
  if (name == "d") return FitAxis::d;
  if (name == "k") return FitAxis::k;
  throw Error(ErrorCode::InvalidArgument, "unknown axis '" + name + "'");
}

const char* to_string(FitAxis axis) noexcept {
  switch (axis) {
    case FitAxis::T: return "T";
    case FitAxis::d: return "d";
    case FitAxis::k: return "k";
  }
  return "?";
}

RowFilter parse_row_filter(const std::string& text) {
  RowFilter out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument, "filter item '" + item + "' lacks '='");
    const std::string key = trim(item.substr(0, eq));
    require(key == "class" || key == "d" || key == "T" || key == "k", ErrorCode::InvalidArgument,
            "filter column must be class, d, T or k");
    out.emplace_back(key, trim(item.substr(eq + 1)));
  }
  return out;
}

namespace {

std::string column(const SweepRow& r, const std::string& key) {
  if (key == "class") return r.cls;
  if (key == "d") return std::to_string(r.d);
  if (key == "T") return std::to_string(r.T);
  return std::to_string(r.k);
}

double axis_value(const SweepRow& r, FitAxis axis) {
  switch (axis) {
    case FitAxis::T: return static_cast<double>(r.T);
    case FitAxis::d: return r.d;
    case FitAxis::k: return r.k;
  }
  return 0.0;
}

}  // namespace

RateFit fit_rate(const std::vector<SweepRow>& rows, FitAxis axis, const RowFilter& filter) {
  std::vector<double> xs, ys;
  for (const SweepRow& r : rows) {
    const bool keep = std::all_of(filter.begin(), filter.end(),
                                  [&](const auto& kv) { return column(r, kv.first) == kv.second; });
    if (!keep) continue;
    require(std::isfinite(r.mean_gap) && r.mean_gap > 0, ErrorCode::NonPositiveGap,
            "row d=" + std::to_string(r.d) + " T=" + std::to_string(r.T) + " has gap " +
                std::to_string(r.mean_gap));
    require(axis_value(r, axis) > 0, ErrorCode::InvalidArgument, "axis values must be positive");
    xs.push_back(std::log(axis_value(r, axis)));
    ys.push_back(std::log(r.mean_gap));
  }
  require(xs.size() >= 3, ErrorCode::InsufficientPoints,
          "need at least 3 rows, got " + std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0, ErrorCode::InsufficientPoints, "axis values are all equal");
  RateFit fit;
  fit.axis = axis;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - fit.intercept - fit.slope * xs[i];
    ssr += e * e;
  }
  fit.std_error = xs.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  fit.points_used = static_cast<int>(xs.size());
  return fit;
}

// ---------------------------------------------------------------------------
// Reports

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << kCsvHeader << '\n' << std::setprecision(17);
  for (const SweepRow& r : rows) {
    out << r.cls << ',' << r.d << ',' << r.T << ',' << r.k << ',' << r.seed_count << ',' << r.mean_gap << ','
        << r.std_gap << ',' << r.theorem_rate << ',' << r.active_term << '\n';
  }
  return out.str();
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && trim(line) == kCsvHeader, ErrorCode::IoError,
          "CSV header does not match the report schema");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') f.emplace_back();  // getline drops a trailing empty field
    require(f.size() == 9, ErrorCode::IoError, "CSV row has " + std::to_string(f.size()) + " fields");
    SweepRow r;
    r.cls = f[0];
    r.d = std::stoi(f[1]);
    r.T = std::stoull(f[2]);
    r.k = std::stoi(f[3]);
    r.seed_count = std::stoull(f[4]);
    r.mean_gap = std::stod(f[5]);
    r.std_gap = std::stod(f[6]);
    r.theorem_rate = std::stod(f[7]);
    r.active_term = f[8];
    r.failed = r.active_term == "failed";
    rows.push_back(r);
  }
  return rows;
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".manifest.json");
  return p;
}

namespace {

nlohmann::ordered_json config_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  j["class"] = to_string(c.base.kind);
  j["oracle"] = to_string(c.base.oracle);
  j["lipschitz"] = c.base.lipschitz;
  j["p"] = std::isinf(c.base.p_norm) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(c.base.p_norm);
  j["radius"] = c.base.radius;
  j["delta"] = c.base.delta;
  j["theta"] = c.base.theta;
  j["sparsity"] = c.base.sparsity;
  j["dims"] = c.dims;
  j["horizons"] = c.horizons;
  j["sparsities"] = c.sparsities;
  j["seeds"] = c.seeds;
  j["max_vertices"] = c.max_vertices;
  j["solver"] = to_string(c.solver);
  j["geometry"] = to_string(c.geometry);
  j["prox_a"] = c.prox_a;
  j["schedule"] = c.schedule == ScheduleKind::InverseSqrt ? "inverse_sqrt" : "inverse_t";
  j["step_rule"] = c.step_rule == StepRule::RadiusOverL ? "r_over_L" : "tuned";
  j["eta_scale"] = c.eta_scale;
  j["delta_rule"] = c.delta_rule == DeltaRule::Fixed ? "fixed" : "matched";
  j["delta_scales"] = c.delta_scales;
  j["constants"] = {{"c0", c.constants.c0}, {"c1", c.constants.c1}, {"c2", c.constants.c2}};
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

void emit_report(const std::vector<SweepRow>& rows, const std::vector<RateFit>& fits, const SweepConfig& config,
                 const std::filesystem::path& path) {
  write_file(path, format_csv(rows));
  nlohmann::ordered_json m;
  m["version"] = version_string();
  m["master_seed"] = config.master_seed;
  m["config"] = config_json(config);
  m["row_count"] = rows.size();
  m["fit_count"] = fits.size();
  m["fits"] = nlohmann::ordered_json::array();
  for (const RateFit& f : fits) {
    m["fits"].push_back({{"axis", to_string(f.axis)},
                         {"slope", f.slope},
                         {"intercept", f.intercept},
                         {"stderr", f.std_error},
                         {"points_used", f.points_used}});
  }
  write_file(manifest_path(path), m.dump(2) + "\n");
}

}  // namespace sco
