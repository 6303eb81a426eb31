#include "sco/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sco/oracles.hpp"
#include "sco/parallel.hpp"

namespace sco {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void check_delta(double delta) {
  require(delta > 0 && delta <= 0.25, ErrorCode::OutOfRange, "delta must lie in (0, 1/4]");
}

}  // namespace

double bernoulli_kl(double delta) {
  require(delta >= 0 && delta < 0.5, ErrorCode::OutOfRange, "delta must lie in [0, 1/2)");
  return 2.0 * delta * std::log1p(4.0 * delta / (1.0 - 2.0 * delta));
}

double fano_bound(int dim, std::uint64_t horizon, int coins_per_round, double delta) {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  require(coins_per_round >= 1 && coins_per_round <= dim, ErrorCode::InvalidArgument,
          "coins per round must lie in [1, d]");
  check_delta(delta);
  const double info = 16.0 * coins_per_round * static_cast<double>(horizon) * delta * delta;
  return clamp01(1.0 - (info + std::log(2.0)) / (0.5 * dim * (std::log(2.0) - 0.5)));
}

double fano_bound(const BoundInputs& in) {
  return fano_bound(in.dim, in.horizon, in.coins_per_round, in.delta);
}

double lecam_bound(std::uint64_t horizon, double delta) {
  check_delta(delta);
  require(horizon >= 1, ErrorCode::OutOfRange, "T must be >= 1");
  return clamp01(1.0 - std::sqrt(8.0 * static_cast<double>(horizon) * delta * delta));
}

double sparse_fano_bound(int dim, int k, std::uint64_t horizon, double delta) {
  require(k >= 1 && k <= dim / 2, ErrorCode::InvalidSparsity, "need 1 <= k <= floor(d/2)");
  check_delta(delta);
  const double half_k = 0.5 * k;
  const double denom = half_k * std::log((dim - k) / half_k);
  if (denom <= 0) return 0.0;  // packing too small for Fano to say anything
  const double info = 32.0 * k * static_cast<double>(horizon) * delta * delta;
  return clamp01(1.0 - 2.0 * (info + std::log(2.0)) / denom);
}

TheoremRate theorem_rate(const ClassSpec& spec, std::uint64_t horizon, const RateConstants& k) {
  spec.validate();
  require(horizon >= 1, ErrorCode::InvalidArgument, "T must be >= 1");
  const double L = spec.lipschitz;
  const double r = spec.radius;
  const double d = spec.dim;
  const double T = static_cast<double>(horizon);
  const double inv_p = inverse_exponent(spec.p_norm);
  TheoremRate out;
  switch (spec.kind) {
    case FunctionClass::ConvexLipschitz:
      if (spec.p_norm <= 2.0) {
        out.theorem = "1a";
        out.terms = {{"sqrt_d_over_T", k.c0 * L * r * std::sqrt(d / T)}, {"cap", L * r / 144.0}};
      } else {
        const double dp = std::pow(d, 1.0 - inv_p);
        out.theorem = "1b";
        out.terms = {{"d_pow_over_sqrt_T", k.c0 * L * r * dp / std::sqrt(T)}, {"cap", L * dp * r / 72.0}};
      }
      break;
    case FunctionClass::StronglyConvex: {
      const double kappa_sq = strong_convexity_kappa_sq(spec);
      if (spec.p_norm == 1.0) {
        out.theorem = "2a";
        out.terms = {{"fast", k.c1 * L * L / (kappa_sq * T)},
                     {"slow", k.c2 * L * r * std::sqrt(d / T)},
                     {"fast_cap", L * L / (1152.0 * kappa_sq * d)},
                     {"cap", L * r / 144.0}};
      } else {
        const double d1 = std::pow(d, 1.0 - 2.0 * inv_p);
        const double d2 = std::pow(d, 1.0 - inv_p);
        out.theorem = "2b";
        out.terms = {{"fast", k.c1 * L * L * d1 / (kappa_sq * T)},
                     {"slow", k.c2 * L * r * d2 / std::sqrt(T)},
                     {"fast_cap", L * L * d1 / (1152.0 * kappa_sq)},
                     {"cap", L * r * d2 / 144.0}};
      }
      break;
    }
    case FunctionClass::SparseOpt: {
      const double kk = spec.sparsity;
      out.theorem = "3";
      out.terms = {{"sparse", k.c0 * L * r * std::sqrt(kk * kk * std::log(d / kk) / T)},
                   {"cap", L * kk * r / 432.0}};
      break;
    }
  }
  const auto best = std::min_element(out.terms.begin(), out.terms.end(),
                                     [](const RateTerm& a, const RateTerm& b) { return a.value < b.value; });
  out.value = best->value;
  out.active_term = best->name;
  return out;
}

Identification identify_vertex(const std::vector<HardInstance<double>>& ensemble, const VectorXd& x,
                               double psi, CounterRng& fallback_rng) {
  require(ensemble.size() >= 2, ErrorCode::TooFewInstances, "need at least two instances");
  Identification out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ensemble.size(); ++j) {
    const double gap = ensemble[j].gap(x);
    if (gap <= psi / 3.0) {
      ++out.candidates;
      if (gap < best) {
        best = gap;
        out.index = j;
      }
    }
  }
  if (out.candidates == 0) {
    out.fallback = true;
    out.index = static_cast<std::size_t>(fallback_rng.below(ensemble.size()));
  }
  return out;
}

Identification identify_vertex(const std::vector<HardInstance<double>>& ensemble, const VectorXd& x,
                               CounterRng& fallback_rng) {
  return identify_vertex(ensemble, x, separation_psi(ensemble), fallback_rng);
}

IdentificationResult identification_experiment(const std::vector<HardInstance<double>>& ensemble,
                                               OracleKind oracle, const SolverConfig& solver,
                                               std::size_t trials, std::uint64_t master_seed) {
  require(trials >= 30, ErrorCode::InvalidArgument, "identification needs at least 30 trials");
  require(ensemble.size() >= 2, ErrorCode::TooFewInstances, "need at least two instances");
  std::vector<HardInstance<double>> members;
  members.reserve(ensemble.size());
  for (const auto& inst : ensemble) {
    ClassSpec spec = inst.spec();
    spec.oracle = oracle;
    members.emplace_back(spec, inst.alpha());
  }
  const double psi = separation_psi(members);

  struct Trial {
    bool error = false;
    bool fallback = false;
    double gap = 0.0;
  };
  std::vector<Trial> results(trials);
  parallel_for(trials, [&](std::size_t trial) {
    const std::uint64_t seed = derive_seed(master_seed, 0x1D, trial);
    CounterRng pick(derive_seed(seed, 1));
    const auto truth = static_cast<std::size_t>(pick.below(members.size()));
    OracleStream<double> stream(members[truth], derive_seed(seed, 2));
    SolverConfig cfg = solver;
    cfg.checkpoints = {cfg.horizon};
    const auto run_out = run(stream, cfg);
    CounterRng fallback(derive_seed(seed, 3));
    const auto id = identify_vertex(members, run_out.output(), psi, fallback);
    results[trial] = {id.index != truth, id.fallback, members[truth].gap(run_out.output())};
  });

  IdentificationResult out;
  out.trials = trials;
  out.psi_over_9 = psi / 9.0;
  double gap_sum = 0.0;
  for (const Trial& t : results) {
    out.errors += t.error;
    out.fallbacks += t.fallback;
    gap_sum += t.gap;
  }
  out.empirical_error_rate = static_cast<double>(out.errors) / static_cast<double>(trials);
  out.mean_opt_gap = gap_sum / static_cast<double>(trials);
  return out;
}

}  // namespace sco
