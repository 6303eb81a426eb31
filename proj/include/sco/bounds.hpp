#ifndef SCO_BOUNDS_HPP_
#define SCO_BOUNDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sco/common.hpp"
#include "sco/ensembles.hpp"
#include "sco/rng.hpp"
#include "sco/solvers.hpp"

namespace sco {

/// KL( Bern(1/2 + delta) || Bern(1/2 - delta) ) = 2 delta ln(1 + 4 delta / (1 - 2 delta)), in nats.
double bernoulli_kl(double delta);

/// Unspecified universal constants of the rate theorems.
struct RateConstants {
  double c0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

struct BoundInputs {
  int dim = 1;
  std::uint64_t horizon = 1;   // T
  int coins_per_round = 1;     // ell: 1 for Oracle A, d for Oracle B
  double delta = 0.25;
  int sparsity = 0;
  RateConstants constants;
};

/// Fano: 1 - (16 ell T delta^2 + ln 2) / ((d/2) ln(2/sqrt(e))), clamped to [0, 1].
double fano_bound(const BoundInputs& in);
double fano_bound(int dim, std::uint64_t horizon, int coins_per_round, double delta);

/// Le Cam: max(0, 1 - sqrt(8 T delta^2)).
double lecam_bound(std::uint64_t horizon, double delta);

/// 1 - 2 (32 k T delta^2 + ln 2) / ((k/2) ln((d-k)/(k/2))), clamped to [0, 1].
double sparse_fano_bound(int dim, int k, std::uint64_t horizon, double delta);

struct RateTerm {
  std::string name;
  double value = 0.0;
};

struct TheoremRate {
  std::string theorem;  // "1a", "1b", "2a", "2b", "3"
  double value = 0.0;   // min over terms
  std::string active_term;
  std::vector<RateTerm> terms;
};

/// Lower-bound rate expression for the class of `spec` at horizon T.
TheoremRate theorem_rate(const ClassSpec& spec, std::uint64_t horizon, const RateConstants& k = {});

struct Identification {
  std::size_t index = 0;  // into the ensemble
  bool fallback = false;  // no instance had gap <= psi/3; index drawn uniformly
  std::size_t candidates = 0;  // instances with gap <= psi/3
};

/// Decoding rule of the optimization-to-testing reduction: the instance whose
/// gap at x is at most psi/3, else a uniform draw from `fallback_rng`.
Identification identify_vertex(const std::vector<HardInstance<double>>& ensemble,
                               const VectorXd& x, double psi, CounterRng& fallback_rng);
Identification identify_vertex(const std::vector<HardInstance<double>>& ensemble,
                               const VectorXd& x, CounterRng& fallback_rng);

struct IdentificationResult {
  std::size_t trials = 0;
  std::size_t errors = 0;
  double empirical_error_rate = 0.0;
  double psi_over_9 = 0.0;
  double mean_opt_gap = 0.0;
  std::size_t fallbacks = 0;
};

/// Draws alpha* uniformly, optimizes against its oracle, decodes the averaged
/// iterate and counts misidentifications. Trials run in parallel on derived
/// seeds; the result does not depend on the thread count.
IdentificationResult identification_experiment(const std::vector<HardInstance<double>>& ensemble,
                                               OracleKind oracle, const SolverConfig& solver,
                                               std::size_t trials, std::uint64_t master_seed);

}  // namespace sco

#endif  // SCO_BOUNDS_HPP_
