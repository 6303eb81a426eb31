#ifndef SCO_ORACLES_HPP_
#define SCO_ORACLES_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "sco/common.hpp"
#include "sco/ensembles.hpp"
#include "sco/rng.hpp"

namespace sco {

template <typename Scalar = double>
struct OracleAnswer {
  Scalar value_estimate{};
  Vector<Scalar> gradient_estimate;
  std::optional<int> coordinate_revealed;  // Oracle A only; diagnostics, not for solvers
  std::vector<bool> coin_outcomes;         // 1 coin for A, d coins for B, none when exact
};

/// Exact mode returns g and its minimum-norm subgradient; it exists for
/// noiseless smoke tests and consumes no randomness.
enum class OracleMode { Stochastic, Exact };

/// Per-sample bound on ||g_hat||_p that the prefactor choice guarantees.
template <typename Scalar>
Scalar per_sample_gradient_bound(const HardInstance<Scalar>& inst) {
  const ClassSpec& s = inst.spec();
  const Scalar c = inst.prefactor();
  const Scalar d_pow = std::pow(Scalar(s.dim), Scalar(inverse_exponent(s.p_norm) - 1.0));
  switch (s.kind) {
    case FunctionClass::ConvexLipschitz:
      return s.oracle == OracleKind::A ? Scalar(2) * c : c * d_pow;
    case FunctionClass::StronglyConvex:
      return s.oracle == OracleKind::A ? c * Scalar(s.radius) : c * Scalar(s.radius) * d_pow;
    case FunctionClass::SparseOpt:
      return c * Scalar(1 + s.delta);
  }
  return Scalar(0);
}

/// Seeded stream of answers from Oracle A or B (chosen by the instance spec).
template <typename Scalar = double>
class OracleStream {
 public:
  OracleStream(HardInstance<Scalar> instance, std::uint64_t seed,
               OracleMode mode = OracleMode::Stochastic)
      : instance_(std::move(instance)), rng_(seed), mode_(mode) {}

  OracleKind kind() const { return instance_.spec().oracle; }
  OracleMode mode() const { return mode_; }
  const HardInstance<Scalar>& instance() const { return instance_; }
  std::uint64_t queries_served() const { return queries_; }
  const CounterRng& rng_state() const { return rng_; }

  OracleAnswer<Scalar> query(const Vector<Scalar>& x) {
    instance_.check_domain(x);
    ++queries_;
    if (mode_ == OracleMode::Exact) {
      return {instance_.eval(x), instance_.subgradient(x), std::nullopt, {}};
    }
    const int d = instance_.dim();
    if (kind() == OracleKind::A) {
      const int i = static_cast<int>(rng_.below(static_cast<std::uint64_t>(d)));
      const bool heads = rng_.bernoulli(static_cast<double>(instance_.coin_bias(i)));
      return answer_a(x, i, heads);
    }
    std::vector<bool> coins(d);
    for (int i = 0; i < d; ++i) coins[i] = rng_.bernoulli(static_cast<double>(instance_.coin_bias(i)));
    return answer_b(x, coins);
  }

  /// Answer with the randomness pinned: `coordinate` is used by Oracle A only,
  /// `coins` must hold 1 entry for A and d entries for B.
  OracleAnswer<Scalar> query_forced(const Vector<Scalar>& x, int coordinate,
                                    const std::vector<bool>& coins) const {
    instance_.check_domain(x);
    if (kind() == OracleKind::A) {
      require(coordinate >= 0 && coordinate < instance_.dim() && coins.size() == 1,
              ErrorCode::InvalidArgument, "Oracle A needs one coordinate and one coin");
      return answer_a(x, coordinate, coins[0]);
    }
    require(coins.size() == static_cast<std::size_t>(instance_.dim()), ErrorCode::InvalidArgument,
            "Oracle B needs d coins");
    return answer_b(x, coins);
  }

 private:
  OracleAnswer<Scalar> answer_a(const Vector<Scalar>& x, int i, bool heads) const {
    const int sign = heads ? +1 : -1;
    const Scalar c = instance_.prefactor();
    OracleAnswer<Scalar> out;
    out.value_estimate = c * instance_.piece().value(x[i], sign);
    out.gradient_estimate = Vector<Scalar>::Zero(instance_.dim());
    out.gradient_estimate[i] = c * instance_.piece().derivative(x[i], sign);
    out.coordinate_revealed = i;
    out.coin_outcomes = {heads};
    return out;
  }

  OracleAnswer<Scalar> answer_b(const Vector<Scalar>& x, const std::vector<bool>& coins) const {
    const int d = instance_.dim();
    const Scalar scale = instance_.prefactor() / Scalar(d);
    OracleAnswer<Scalar> out;
    out.gradient_estimate.resize(d);
    Scalar value(0);
    for (int i = 0; i < d; ++i) {
      const int sign = coins[i] ? +1 : -1;
      value += instance_.piece().value(x[i], sign);
      out.gradient_estimate[i] = scale * instance_.piece().derivative(x[i], sign);
    }
    out.value_estimate = scale * value;
    out.coin_outcomes = coins;
    return out;
  }

  HardInstance<Scalar> instance_;
  CounterRng rng_;
  OracleMode mode_;
  std::uint64_t queries_ = 0;
};

/// Monte Carlo comparison of oracle means against g and its gradient.
struct BiasEstimate {
  double value_gap = 0.0;       // |mean value - g(x)|
  double value_stderr = 0.0;
  double gradient_gap_p = 0.0;  // ||mean gradient - grad g(x)||_p
  Eigen::VectorXd gradient_gap;     // coordinatewise |mean - grad|
  Eigen::VectorXd gradient_stderr;  // coordinatewise standard errors
  std::size_t samples = 0;

  /// Every gap within `sigmas` standard errors (plus round-off).
  bool within(double sigmas) const {
    if (value_gap > sigmas * value_stderr + 1e-12) return false;
    return ((gradient_gap.array() - sigmas * gradient_stderr.array()) <= 1e-12).all();
  }
};

struct SecondMomentEstimate {
  double mean = 0.0;    // empirical E ||g_hat||_p^2
  double std_error = 0.0;
  double max_norm = 0.0;  // largest per-sample ||g_hat||_p seen
  std::size_t samples = 0;
};

template <typename Scalar>
BiasEstimate bias_estimate(OracleStream<Scalar>& stream, const Vector<Scalar>& x, std::size_t n) {
  require(n >= 1000, ErrorCode::InvalidArgument, "bias estimate needs n >= 1000");
  const auto& inst = stream.instance();
  const Eigen::Index d = inst.dim();
  double v_sum = 0, v_sq = 0;
  Eigen::VectorXd g_sum = Eigen::VectorXd::Zero(d), g_sq = Eigen::VectorXd::Zero(d);
  for (std::size_t s = 0; s < n; ++s) {
    const auto ans = stream.query(x);
    const double v = static_cast<double>(ans.value_estimate);
    v_sum += v;
    v_sq += v * v;
    const Eigen::VectorXd g = ans.gradient_estimate.template cast<double>();
    g_sum += g;
    g_sq += g.cwiseProduct(g);
  }
  const double nn = static_cast<double>(n);
  auto stderr_of = [nn](double sum, double sq) {
    const double mean = sum / nn;
    return std::sqrt(std::max(0.0, sq / nn - mean * mean) / (nn - 1.0));
  };
  BiasEstimate out;
  out.samples = n;
  out.value_gap = std::abs(v_sum / nn - static_cast<double>(inst.eval(x)));
  out.value_stderr = stderr_of(v_sum, v_sq);
  const Eigen::VectorXd truth = inst.subgradient(x).template cast<double>();
  out.gradient_gap = (g_sum / nn - truth).cwiseAbs();
  out.gradient_stderr.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) out.gradient_stderr[i] = stderr_of(g_sum[i], g_sq[i]);
  out.gradient_gap_p = lp_norm(out.gradient_gap, inst.spec().p_norm);
  return out;
}

template <typename Scalar>
SecondMomentEstimate second_moment_estimate(OracleStream<Scalar>& stream, const Vector<Scalar>& x,
                                            std::size_t n) {
  require(n >= 1000, ErrorCode::InvalidArgument, "second moment estimate needs n >= 1000");
  const double p = stream.instance().spec().p_norm;
  double sum = 0, sq = 0, worst = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const double norm = static_cast<double>(lp_norm(stream.query(x).gradient_estimate, p));
    const double m = norm * norm;
    sum += m;
    sq += m * m;
    worst = std::max(worst, norm);
  }
  const double nn = static_cast<double>(n);
  SecondMomentEstimate out;
  out.samples = n;
  out.mean = sum / nn;
  out.std_error = std::sqrt(std::max(0.0, sq / nn - out.mean * out.mean) / (nn - 1.0));
  out.max_norm = worst;
  return out;
}

}  // namespace sco

#endif  // SCO_ORACLES_HPP_
