#ifndef SCO_HARNESS_HPP_
#define SCO_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sco/bounds.hpp"
#include "sco/ensembles.hpp"
#include "sco/solvers.hpp"

namespace sco {

enum class SolverKind { Sgd, Mirror, Recommended };
enum class ScheduleKind { InverseSqrt, InverseT };

/// How a cell picks delta. Fixed uses the template's delta everywhere. Matched
/// follows the lower-bound construction: delta = min(1/4, scale * sqrt(I / T)),
/// where I is the information normalizer of the ensemble (d for Oracle A,
/// 1 for Oracle B, ln((d-k)/(k/2)) for the sparse family). With several
/// scales the cell reports the worst one, so the sup runs over delta as well.
enum class DeltaRule { Fixed, Matched };

/// eta_0 for the 1/sqrt(t) schedule: r/L, or sqrt(2 Phi(x*))/L, the choice that
/// balances the mirror descent bound L sqrt(Phi(x*)/T). Phi(x*) is shared by
/// every member of an ensemble, so the tuned step does not reveal alpha.
enum class StepRule { RadiusOverL, MinimizerTuned };

double matched_delta(const ClassSpec& spec, std::uint64_t horizon, double scale);

struct SweepConfig {
  ClassSpec base;  // dim and sparsity are overridden per cell
  std::vector<int> dims;
  std::vector<std::uint64_t> horizons;
  std::vector<int> sparsities;  // empty: use base.sparsity
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 0;  // packing and vertex sampling
  int max_vertices = 8;

  SolverKind solver = SolverKind::Sgd;
  Geometry geometry = Geometry::Box;  // for SolverKind::Recommended
  double prox_a = 2.0;                // for SolverKind::Mirror
  ScheduleKind schedule = ScheduleKind::InverseSqrt;
  StepRule step_rule = StepRule::RadiusOverL;
  double eta_scale = 1.0;  // multiplies eta_0, or eta_t = eta_scale / (kappa^2 t)
  DeltaRule delta_rule = DeltaRule::Fixed;
  std::vector<double> delta_scales{1.0};  // Matched only
  RateConstants constants;
  std::string output_path;

  void validate() const;
};

/// Parses `key = value` lines (# comments, comma-separated lists).
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct SweepRow {
  std::string cls;
  int d = 0;
  std::uint64_t T = 0;
  int k = 0;
  std::size_t seed_count = 0;
  double mean_gap = 0.0;  // max over sampled vertices of the mean over seeds
  double std_gap = 0.0;   // spread over seeds at the worst vertex
  double theorem_rate = 0.0;
  std::string active_term;
  double delta = 0.0;     // delta at the worst (scale, vertex); not emitted
  bool failed = false;
};

/// Per-cell solver configuration (prox, stepsize, horizon) for a spec.
SolverConfig cell_solver_config(const SweepConfig& config, const ClassSpec& spec, std::uint64_t horizon);

/// Runs every (d, T, k) cell, ordered lexicographically. Deterministic given
/// the config, independent of SCO_THREADS.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

enum class FitAxis { T, d, k };
FitAxis parse_fit_axis(const std::string& name);
const char* to_string(FitAxis axis) noexcept;

struct RateFit {
  FitAxis axis = FitAxis::T;
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  int points_used = 0;
};

/// Row filter as column=value pairs over {class, d, T, k}.
using RowFilter = std::vector<std::pair<std::string, std::string>>;
RowFilter parse_row_filter(const std::string& text);

/// OLS of ln(mean_gap) on ln(axis) over the rows passing `filter`.
RateFit fit_rate(const std::vector<SweepRow>& rows, FitAxis axis, const RowFilter& filter = {});

inline constexpr const char* kCsvHeader =
    "class,d,T,k,seed_count,mean_gap,std_gap,theorem_rate,active_term";

std::string format_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

/// Manifest written next to the CSV: <stem>.manifest.json.
std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

/// Writes the CSV and its JSON manifest (config, version, master seed, fits).
void emit_report(const std::vector<SweepRow>& rows, const std::vector<RateFit>& fits,
                 const SweepConfig& config, const std::filesystem::path& path);

const char* version_string() noexcept;

}  // namespace sco

#endif  // SCO_HARNESS_HPP_
