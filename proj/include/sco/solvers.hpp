#ifndef SCO_SOLVERS_HPP_
#define SCO_SOLVERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sco/common.hpp"
#include "sco/ensembles.hpp"
#include "sco/oracles.hpp"

namespace sco {

/// Prox function: either 1/2 ||x||_2^2 (plain SGD) or Phi_a(x) = ||x||_a^2 / (a-1).
/// Note Phi_2 = ||x||_2^2 is twice the SGD prox.
struct ProxSpec {
  enum class Kind { EuclideanHalf, Power };
  Kind kind = Kind::EuclideanHalf;
  double a = 2.0;

  static ProxSpec euclidean_half() { return {Kind::EuclideanHalf, 2.0}; }
  static ProxSpec power(double a) {
    require(a > 1.0 && a <= 2.0, ErrorCode::InvalidArgument, "prox exponent must lie in (1, 2]");
    return {Kind::Power, a};
  }
  /// Norm in which the prox is 1-strongly convex.
  double norm_exponent() const { return kind == Kind::EuclideanHalf ? 2.0 : a; }
  bool operator==(const ProxSpec&) const = default;
};

struct FeasibleSet {
  enum class Shape { Box, L2Ball, LqBall };
  Shape shape = Shape::Box;
  double radius = 0.5;
  double q = kInf;  // LqBall only

  static FeasibleSet box(double r) { return {Shape::Box, r, kInf}; }
  static FeasibleSet l2_ball(double radius) { return {Shape::L2Ball, radius, 2.0}; }
  static FeasibleSet lq_ball(double q, double radius) {
    require(q >= 1.0, ErrorCode::InvalidArgument, "lq ball needs q >= 1");
    return {Shape::LqBall, radius, q};
  }
  double norm_exponent() const {
    return shape == Shape::Box ? kInf : shape == Shape::L2Ball ? 2.0 : q;
  }
  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x, double tol = 1e-9) const {
    return static_cast<double>(lp_norm(x, norm_exponent())) <= radius * (1.0 + tol);
  }
  bool operator==(const FeasibleSet&) const = default;
};

struct StepSchedule {
  enum class Kind { InverseSqrt, InverseT };
  Kind kind = Kind::InverseSqrt;
  double scale = 1.0;  // eta_0 for InverseSqrt, lambda for InverseT

  static StepSchedule inverse_sqrt(double eta0) { return {Kind::InverseSqrt, eta0}; }
  static StepSchedule inverse_t(double lambda) { return {Kind::InverseT, lambda}; }
  double eta(std::uint64_t t) const {
    const double tt = static_cast<double>(t);
    return kind == Kind::InverseSqrt ? scale / std::sqrt(tt) : 1.0 / (scale * tt);
  }
};

struct SolverConfig {
  ProxSpec prox = ProxSpec::euclidean_half();
  FeasibleSet set = FeasibleSet::box(0.5);
  std::uint64_t horizon = 1;
  StepSchedule stepsize = StepSchedule::inverse_sqrt(1.0);
  bool averaging = true;  // which iterate `SolverRun::output` reports
  double inner_tol = 1e-8;
  int inner_max_iters = 10'000;
  std::uint64_t seed = 0;
  // Times t at which gap_trace records; empty means every t.
  std::vector<std::uint64_t> checkpoints;
};

struct GapPoint {
  std::uint64_t t = 0;
  double averaged_gap = 0.0;  // gap of (x_1 + ... + x_t) / t
  double iterate_gap = 0.0;   // gap of x_t
};

template <typename Scalar = double>
struct SolverRun {
  Vector<Scalar> final_iterate;     // x_{T+1}
  Vector<Scalar> averaged_iterate;  // (x_1 + ... + x_T) / T
  std::vector<GapPoint> gap_trace;
  std::uint64_t queries_used = 0;
  bool averaging = true;

  const Vector<Scalar>& output() const { return averaging ? averaged_iterate : final_iterate; }
};

// ---------------------------------------------------------------------------
// Prox function calculus

template <typename Scalar>
Scalar prox_value(const ProxSpec& prox, const Vector<Scalar>& x) {
  if (prox.kind == ProxSpec::Kind::EuclideanHalf) return Scalar(0.5) * x.squaredNorm();
  const Scalar n = lp_norm(x, prox.a);
  return n * n / Scalar(prox.a - 1.0);
}

/// Gradient of the prox; grad Phi_a(0) = 0.
template <typename Scalar>
Vector<Scalar> prox_gradient(const ProxSpec& prox, const Vector<Scalar>& x) {
  if (prox.kind == ProxSpec::Kind::EuclideanHalf) return x;
  const Scalar a(prox.a);
  if (prox.a == 2.0) return Scalar(2) * x;
  const Scalar m = x.cwiseAbs().maxCoeff();
  if (m == Scalar(0)) return Vector<Scalar>::Zero(x.size());
  // With y = x/m: grad_i = 2/(a-1) * m * ||y||_a^(2-a) * |y_i|^(a-1) * sign(x_i).
  const Scalar ny = lp_norm(Vector<Scalar>(x / m), prox.a);
  const Scalar scale = Scalar(2) / (a - Scalar(1)) * m * std::pow(ny, Scalar(2) - a);
  Vector<Scalar> g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    g[i] = x[i] == Scalar(0) ? Scalar(0)
                             : scale * std::pow(std::abs(x[i]) / m, a - Scalar(1)) * sign_or_zero(x[i]);
  return g;
}

template <typename Scalar>
Scalar bregman(const ProxSpec& prox, const Vector<Scalar>& x, const Vector<Scalar>& y) {
  return prox_value(prox, x) - prox_value(prox, y) - prox_gradient(prox, y).dot(x - y);
}

// ---------------------------------------------------------------------------
// Euclidean projections

namespace detail {

// Smallest z >= 0 with z + lambda q z^(q-1) = y (y >= 0, q > 1).
inline double lq_shrink(double y, double lambda, double q) {
  if (y == 0.0 || lambda == 0.0) return y;
  double lo = 0.0, hi = y;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * y; ++it) {
    const double z = 0.5 * (lo + hi);
    (z + lambda * q * std::pow(z, q - 1.0) > y ? hi : lo) = z;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Euclidean projection onto the lq ball, by bisection on the multiplier of
/// sum |x_i|^q <= R^q (tolerance 1e-10 on the multiplier, relative).
template <typename Scalar>
Vector<Scalar> project_lq_ball(const Vector<Scalar>& y, double q, double radius) {
  if (static_cast<double>(lp_norm(y, q)) <= radius) return y;
  if (std::isinf(q)) return y.cwiseMax(Scalar(-radius)).cwiseMin(Scalar(radius));
  if (q == 2.0) return y * Scalar(radius / static_cast<double>(y.norm()));
  const Eigen::VectorXd ay = y.template cast<double>().cwiseAbs();
  auto shrink = [&](double lambda) {
    Eigen::VectorXd z(ay.size());
    for (Eigen::Index i = 0; i < ay.size(); ++i)
      z[i] = q == 1.0 ? std::max(0.0, ay[i] - lambda) : detail::lq_shrink(ay[i], lambda, q);
    return z;
  };
  double lo = 0.0, hi = 1.0;
  while (lp_norm(shrink(hi), q) > radius) hi *= 2.0;
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (lp_norm(shrink(mid), q) > radius ? lo : hi) = mid;
  }
  const Eigen::VectorXd z = shrink(hi);
  Vector<Scalar> out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = Scalar(z[i]) * sign_or_zero(y[i]);
  return out;
}

template <typename Scalar>
Vector<Scalar> project(const FeasibleSet& set, const Vector<Scalar>& y) {
  switch (set.shape) {
    case FeasibleSet::Shape::Box:
      return y.cwiseMax(Scalar(-set.radius)).cwiseMin(Scalar(set.radius));
    case FeasibleSet::Shape::L2Ball: {
      const Scalar n = y.norm();
      return n <= Scalar(set.radius) ? y : Vector<Scalar>(y * (Scalar(set.radius) / n));
    }
    case FeasibleSet::Shape::LqBall:
      return project_lq_ball(y, set.q, set.radius);
  }
  return y;
}

// ---------------------------------------------------------------------------
// Mirror steps. Each step solves  min_{x in S}  Phi(x) - <theta, x>,
// theta = grad Phi(x_t) - eta g_t.

namespace detail {

// Exact minimizer of Phi_a(x) - <theta, x> over the box B_inf(r), a in (1, 2).
// KKT gives x_i = sign(theta_i) min(r, (|theta_i|/s)^(1/(a-1))) where
// s = 2/(a-1) ||x||_a^(2-a); u = log s is the root of an increasing function
// whose slope lies in [1, 1/(a-1)], found by safeguarded Newton in log space.
template <typename Scalar>
Vector<Scalar> power_box_step(double a, double r, const Vector<Scalar>& theta) {
  const Eigen::Index d = theta.size();
  Vector<Scalar> x = Vector<Scalar>::Zero(d);
  std::vector<double> lt;
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (theta[i] != Scalar(0)) {
      lt.push_back(std::log(std::abs(static_cast<double>(theta[i]))));
      idx.push_back(i);
    }
  }
  if (idx.empty()) return x;
  const double inv = 1.0 / (a - 1.0);
  const double log_r = std::log(r);
  const double log_c = std::log(2.0 * inv);
  auto log_sum_exp = [](const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double e : v) s += std::exp(e - m);
    return m + std::log(s);
  };
  std::vector<double> buf(lt.size());
  // F(u) = u - log_c - (2-a) log ||x(u)||_a, with slope 1 + (2-a)/(a-1) * (share of
  // ||x||_a^a carried by unclamped coordinates).
  auto eval = [&](double u, double& deriv) {
    for (std::size_t j = 0; j < lt.size(); ++j) buf[j] = a * std::min(log_r, (lt[j] - u) * inv);
    const double m = *std::max_element(buf.begin(), buf.end());
    double all = 0.0, free = 0.0;
    for (std::size_t j = 0; j < lt.size(); ++j) {
      const double e = std::exp(buf[j] - m);
      all += e;
      if ((lt[j] - u) * inv < log_r) free += e;
    }
    deriv = 1.0 + (2.0 - a) * inv * free / all;
    return u - log_c - (2.0 - a) * (m + std::log(all)) / a;
  };
  for (std::size_t j = 0; j < lt.size(); ++j) buf[j] = a * lt[j] * inv;
  const double u_free = (a - 1.0) * (log_c + (2.0 - a) * log_sum_exp(buf) / a);
  const double u_all = *std::min_element(lt.begin(), lt.end()) - (a - 1.0) * log_r;
  const double u_box = log_c + (2.0 - a) * (log_r + std::log(static_cast<double>(lt.size())) / a);
  double u;
  if (u_box <= u_all) {
    u = u_box;  // every coordinate sits on the boundary
  } else if (*std::max_element(lt.begin(), lt.end()) - u_free <= (a - 1.0) * log_r) {
    u = u_free;  // unconstrained minimizer is feasible
  } else {
    double lo = u_all, hi = std::min(u_free, u_box);
    u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      double deriv;
      const double f = eval(u, deriv);
      if (f == 0.0) break;
      (f > 0 ? hi : lo) = u;
      double next = u - f / deriv;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double tol = 1e-15 * std::max(1.0, std::abs(u));
      const bool done = std::abs(next - u) <= tol || hi - lo <= tol;
      u = next;
      if (done) break;
    }
  }
  for (std::size_t j = 0; j < lt.size(); ++j) {
    const double mag = std::exp(std::min(log_r, (lt[j] - u) * inv));
    x[idx[j]] = Scalar(std::min(r, mag)) * sign_or_zero(theta[idx[j]]);
  }
  return x;
}

// Phi_a over its own l_a ball: the unconstrained minimizer scaled onto the ball.
template <typename Scalar>
Vector<Scalar> power_ball_step(double a, double radius, const Vector<Scalar>& theta) {
  const double b = a / (a - 1.0);
  const double tn = static_cast<double>(lp_norm(theta, b));
  if (tn == 0.0) return Vector<Scalar>::Zero(theta.size());
  // Unconstrained minimizer has ||x||_a = (a-1) ||theta||_b / 2 and x_i ∝ sign(theta_i)|theta_i|^(b-1).
  const double rho = std::min(radius, 0.5 * (a - 1.0) * tn);
  Vector<Scalar> x(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    x[i] = Scalar(std::pow(std::abs(static_cast<double>(theta[i])) / tn, b - 1.0)) * sign_or_zero(theta[i]);
  return x * Scalar(rho);
}

}  // namespace detail

namespace detail {

// Conjugate of the prox and its gradient: Phi_a^*(y) = (a-1)/4 ||y||_b^2 with
// b = a/(a-1); for the SGD prox Phi^* = Phi.
template <typename Scalar>
Scalar prox_conjugate(const ProxSpec& prox, const Vector<Scalar>& y) {
  if (prox.kind == ProxSpec::Kind::EuclideanHalf) return Scalar(0.5) * y.squaredNorm();
  const Scalar n = lp_norm(y, dual_exponent(prox.a));
  return Scalar((prox.a - 1.0) / 4.0) * n * n;
}

template <typename Scalar>
Vector<Scalar> prox_conjugate_gradient(const ProxSpec& prox, const Vector<Scalar>& y) {
  if (prox.kind == ProxSpec::Kind::EuclideanHalf) return y;
  const double b = dual_exponent(prox.a);
  const Scalar n = lp_norm(y, b);
  if (n == Scalar(0)) return Vector<Scalar>::Zero(y.size());
  Vector<Scalar> g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    g[i] = Scalar(std::pow(std::abs(static_cast<double>(y[i] / n)), b - 1.0)) * sign_or_zero(y[i]);
  return Scalar((prox.a - 1.0) / 2.0) * n * g;
}

}  // namespace detail

/// Generic inner solver for argmin_{x in S} Phi(x) - <theta, x>, theta =
/// grad Phi(x_t) - eta g_t. Runs FISTA on the Fenchel dual
///   min_u Phi^*(theta - u) + R ||u||_{q'},
/// whose smooth part has a 1/2-Lipschitz gradient (1 for the SGD prox) and
/// whose prox is v - t Proj_S(v / t). Stops once the duality gap at the
/// projected primal point x = Proj_S(grad Phi^*(theta - u)) is <= tol, which
/// certifies the inner objective to within tol.
template <typename Scalar>
Vector<Scalar> mirror_step_inner(const ProxSpec& prox, const FeasibleSet& set,
                                 const Vector<Scalar>& x_t, const Vector<Scalar>& g_t, Scalar eta,
                                 double inner_tol = 1e-8, int inner_max_iters = 10'000) {
  const Vector<Scalar> theta = prox_gradient(prox, x_t) - eta * g_t;
  const Scalar step(prox.kind == ProxSpec::Kind::EuclideanHalf ? 1.0 : 2.0);
  const double q_dual = dual_exponent(set.norm_exponent());
  const Scalar radius(set.radius);
  auto primal = [&](const Vector<Scalar>& x) { return prox_value(prox, x) - theta.dot(x); };
  auto dual = [&](const Vector<Scalar>& u) {
    return -detail::prox_conjugate(prox, Vector<Scalar>(theta - u)) - radius * lp_norm(u, q_dual);
  };
  auto prox_step = [&](const Vector<Scalar>& v) {
    return Vector<Scalar>(v - step * project(set, Vector<Scalar>(v / step)));
  };
  Vector<Scalar> u = Vector<Scalar>::Zero(theta.size());
  Vector<Scalar> w = u;
  Scalar momentum(1);
  for (int it = 0; it < inner_max_iters; ++it) {
    const Vector<Scalar> x = project(set, detail::prox_conjugate_gradient(prox, Vector<Scalar>(theta - u)));
    if (static_cast<double>(primal(x) - dual(u)) <= inner_tol) return x;
    const Vector<Scalar> next =
        prox_step(Vector<Scalar>(w + step * detail::prox_conjugate_gradient(prox, Vector<Scalar>(theta - w))));
    const Scalar m_next = (Scalar(1) + std::sqrt(Scalar(1) + Scalar(4) * momentum * momentum)) / Scalar(2);
    w = next + ((momentum - Scalar(1)) / m_next) * (next - u);
    u = next;
    momentum = m_next;
  }
  throw Error(ErrorCode::InnerSolveFailed,
              "mirror step did not reach tolerance in " + std::to_string(inner_max_iters) +
                  " iterations");
}

/// x_{t+1} = argmin_{x in S} { eta <x, g_t> + D_Phi(x, x_t) }.
template <typename Scalar>
Vector<Scalar> mirror_step(const ProxSpec& prox, const FeasibleSet& set, const Vector<Scalar>& x_t,
                           const Vector<Scalar>& g_t, Scalar eta, double inner_tol = 1e-8,
                           int inner_max_iters = 10'000) {
  require(eta > Scalar(0), ErrorCode::InvalidArgument, "step size must be positive");
  require(x_t.size() == g_t.size(), ErrorCode::DimensionMismatch, "iterate and gradient lengths differ");
  if (prox.kind == ProxSpec::Kind::EuclideanHalf) return project(set, Vector<Scalar>(x_t - eta * g_t));
  if (prox.a == 2.0) return project(set, Vector<Scalar>(x_t - eta * g_t / Scalar(2)));
  const Vector<Scalar> theta = prox_gradient(prox, x_t) - eta * g_t;
  if (set.shape == FeasibleSet::Shape::Box) return detail::power_box_step(prox.a, set.radius, theta);
  if (set.shape == FeasibleSet::Shape::LqBall && set.q == prox.a)
    return detail::power_ball_step(prox.a, set.radius, theta);
  return mirror_step_inner(prox, set, x_t, g_t, eta, inner_tol, inner_max_iters);
}

// ---------------------------------------------------------------------------

/// T rounds of stochastic mirror descent from x_1 = argmin_S Phi = 0.
/// Round t queries the oracle at x_t and steps with eta_t.
template <typename Scalar>
SolverRun<Scalar> run(OracleStream<Scalar>& oracle, const SolverConfig& config) {
  require(config.horizon >= 1, ErrorCode::InvalidArgument, "horizon must be >= 1");
  require(config.stepsize.scale > 0, ErrorCode::InvalidArgument, "step scale must be positive");
  require(config.inner_tol > 0, ErrorCode::InvalidArgument, "inner tolerance must be positive");
  const auto& inst = oracle.instance();
  require(config.set.radius <= inst.spec().radius * (1 + 1e-12), ErrorCode::OutOfDomain,
          "feasible set leaves the instance domain");
  const int d = inst.dim();
  const bool every = config.checkpoints.empty();
  auto next_checkpoint = config.checkpoints.begin();

  SolverRun<Scalar> out;
  out.averaging = config.averaging;
  Vector<Scalar> x = Vector<Scalar>::Zero(d);
  Vector<Scalar> sum = Vector<Scalar>::Zero(d);
  for (std::uint64_t t = 1; t <= config.horizon; ++t) {
    const auto answer = oracle.query(x);
    sum += x;
    ++out.queries_used;
    while (!every && next_checkpoint != config.checkpoints.end() && *next_checkpoint < t) ++next_checkpoint;
    if (every || (next_checkpoint != config.checkpoints.end() && *next_checkpoint == t)) {
      const Vector<Scalar> avg = sum / Scalar(static_cast<double>(t));
      out.gap_trace.push_back({t, static_cast<double>(inst.gap(avg)), static_cast<double>(inst.gap(x))});
    }
    x = mirror_step(config.prox, config.set, x, answer.gradient_estimate,
                    Scalar(config.stepsize.eta(t)), config.inner_tol, config.inner_max_iters);
  }
  out.final_iterate = x;
  out.averaged_iterate = sum / Scalar(static_cast<double>(config.horizon));
  return out;
}

enum class Geometry { Dual, Box, Sparse };

struct Recommendation {
  ProxSpec prox;
  StepSchedule stepsize;
};

/// 2 ln d / (2 ln d - 1), the exponent that makes 1/(a-1) = O(log d).
double log_dimension_exponent(int dim);

/// Matching-upper-bound configuration: SGD for p <= 2, Phi_q for p > 2
/// (box and dual geometries), Phi_a with a = 2 ln d/(2 ln d - 1) for the
/// sparse geometry and for p = inf. Steps are eta_t = 1/sqrt(t); callers
/// rescale eta_0.
Recommendation recommended_prox(Geometry geometry, int dim, double p_norm);

}  // namespace sco

#endif  // SCO_SOLVERS_HPP_
