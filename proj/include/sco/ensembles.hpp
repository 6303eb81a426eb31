#ifndef SCO_ENSEMBLES_HPP_
#define SCO_ENSEMBLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sco/common.hpp"

namespace sco {

enum class FunctionClass { ConvexLipschitz, StronglyConvex, SparseOpt };
enum class OracleKind { A, B };

const char* to_string(FunctionClass kind) noexcept;
const char* to_string(OracleKind kind) noexcept;
FunctionClass parse_function_class(const std::string& name);
OracleKind parse_oracle_kind(const std::string& name);

/// Parameters of one adversarial function family. `lipschitz` is measured in
/// the l_q norm dual to `p_norm`, the norm in which gradient noise is bounded.
struct ClassSpec {
  FunctionClass kind = FunctionClass::ConvexLipschitz;
  int dim = 1;
  double lipschitz = 1.0;
  double p_norm = 2.0;  // in [1, inf]
  double radius = 0.5;  // B_inf(radius) is the feasible box
  double delta = 0.25;  // in (0, 1/4]
  double theta = 0.0;   // StronglyConvex only, in [0, 1)
  int sparsity = 0;     // SparseOpt only
  OracleKind oracle = OracleKind::A;

  bool operator==(const ClassSpec&) const = default;

  /// Throws on any violated precondition.
  void validate() const;
};

/// Prefactor c that makes the family L-Lipschitz with second moment <= L^2.
double ensemble_prefactor(const ClassSpec& spec);

/// Euclidean strong-convexity parameter kappa^2 = (1-theta) c / (4d).
double strong_convexity_kappa_sq(const ClassSpec& spec);

/// L / kappa^2 >= (r/4) d^(1/p), with 1e-12 relative slack.
bool compat_holds(double lipschitz, double kappa_sq, double radius, int dim, double p_norm);

/// Compatibility of a strongly convex spec with its derived kappa.
bool check_compat(const ClassSpec& spec);

/// True when the strongly convex minimizer is interior: (1-theta)/(1+theta) >= 2 delta,
/// equivalently 1 - theta >= 4 delta / (1 + 2 delta).
inline bool strong_interior_case(double theta, double delta) {
  return (1.0 - theta) >= 2.0 * delta * (1.0 + theta);
}

/// Whether `alpha` is a legal vertex for `spec` (alphabet, length, support).
bool vertex_compatible(const ClassSpec& spec, const Vertex& alpha);

namespace detail {

// One-sided derivatives of a univariate convex piece.
template <typename Scalar>
struct Slopes {
  Scalar left;
  Scalar right;
  Scalar mid() const { return Scalar(0.5) * (left + right); }
};

template <typename Scalar>
Slopes<Scalar> abs_slopes(Scalar u) {
  if (u > Scalar(0)) return {Scalar(1), Scalar(1)};
  if (u < Scalar(0)) return {Scalar(-1), Scalar(-1)};
  return {Scalar(-1), Scalar(1)};
}

// Base functions f^+_i (sign = +1) and f^-_i (sign = -1) as functions of x_i.
template <typename Scalar>
struct BasePiece {
  FunctionClass kind;
  Scalar radius;
  Scalar theta;
  Scalar delta;
  Scalar dim;

  Scalar value(Scalar t, int sign) const {
    const Scalar s(sign);
    switch (kind) {
      case FunctionClass::ConvexLipschitz:
        return std::abs(t + s * radius / Scalar(2));
      case FunctionClass::StronglyConvex: {
        const Scalar u = t + s * radius;
        return radius * theta * std::abs(u) + (Scalar(1) - theta) / Scalar(4) * u * u;
      }
      case FunctionClass::SparseOpt:
        return dim * (std::abs(t + s * radius) + delta * std::abs(t));
    }
    return Scalar(0);
  }

  Slopes<Scalar> slopes(Scalar t, int sign) const {
    const Scalar s(sign);
    switch (kind) {
      case FunctionClass::ConvexLipschitz:
        return abs_slopes(t + s * radius / Scalar(2));
      case FunctionClass::StronglyConvex: {
        const Scalar u = t + s * radius;
        const auto a = abs_slopes(u);
        const Scalar smooth = (Scalar(1) - theta) / Scalar(2) * u;
        return {radius * theta * a.left + smooth, radius * theta * a.right + smooth};
      }
      case FunctionClass::SparseOpt: {
        const auto a = abs_slopes(t + s * radius);
        const auto b = abs_slopes(t);
        return {dim * (a.left + delta * b.left), dim * (a.right + delta * b.right)};
      }
    }
    return {Scalar(0), Scalar(0)};
  }

  // Term-level derivative with the slope-0 convention at every |.| kink.
  Scalar derivative(Scalar t, int sign) const { return slopes(t, sign).mid(); }
};

}  // namespace detail

/// One member g_alpha of a hard ensemble:
///   g_alpha(x) = (c/d) sum_i { (1/2 + alpha_i delta) f+_i(x) + (1/2 - alpha_i delta) f-_i(x) }.
/// For the sparse family f+-_i(x) = d(|x_i +- r| + delta |x_i|), which reproduces
///   g_alpha(x) = c [ sum_i (1/2 + alpha_i delta)|x_i + r| + (1/2 - alpha_i delta)|x_i - r| + delta sum_i |x_i| ].
template <typename Scalar = double>
class HardInstance {
 public:
  HardInstance(const ClassSpec& spec, const Vertex& alpha) : spec_(spec), alpha_(alpha) {
    spec_.validate();
    require(vertex_compatible(spec_, alpha_), ErrorCode::IncompatibleVertex,
            "vertex does not match the class alphabet, length or support");
    prefactor_ = static_cast<Scalar>(ensemble_prefactor(spec_));
    piece_ = {spec_.kind, Scalar(spec_.radius), Scalar(spec_.theta), Scalar(spec_.delta),
              Scalar(spec_.dim)};
    fill_minimizer();
  }

  const ClassSpec& spec() const { return spec_; }
  const Vertex& alpha() const { return alpha_; }
  Scalar prefactor() const { return prefactor_; }
  const Vector<Scalar>& minimizer() const { return minimizer_; }
  Scalar min_value() const { return min_value_; }
  int dim() const { return spec_.dim; }
  Scalar radius() const { return Scalar(spec_.radius); }
  const detail::BasePiece<Scalar>& piece() const { return piece_; }

  /// Weight of f+_i; f-_i carries 1 - weight.
  Scalar coin_bias(int i) const { return Scalar(0.5) + Scalar(alpha_[i]) * Scalar(spec_.delta); }

  void check_domain(const Vector<Scalar>& x) const {
    require(x.size() == spec_.dim, ErrorCode::DimensionMismatch, "point has wrong length");
    const Scalar bound = radius() * Scalar(1 + 1e-9);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      require(std::abs(x[i]) <= bound, ErrorCode::OutOfDomain,
              "coordinate " + std::to_string(i) + " outside B_inf(r)");
  }

  /// Contribution of coordinate i, without the c/d prefactor.
  Scalar coordinate_value(int i, Scalar t) const {
    const Scalar w = coin_bias(i);
    return w * piece_.value(t, +1) + (Scalar(1) - w) * piece_.value(t, -1);
  }

  Scalar eval(const Vector<Scalar>& x) const {
    check_domain(x);
    Scalar total(0);
    for (int i = 0; i < spec_.dim; ++i) total += coordinate_value(i, x[i]);
    return prefactor_ / Scalar(spec_.dim) * total;
  }

  /// Minimum-norm element of the subdifferential (coordinatewise, since g is
  /// separable). Equals the gradient where g is differentiable and is exactly
  /// zero at an interior minimizer.
  Vector<Scalar> subgradient(const Vector<Scalar>& x) const {
    check_domain(x);
    const Scalar scale = prefactor_ / Scalar(spec_.dim);
    Vector<Scalar> g(spec_.dim);
    for (int i = 0; i < spec_.dim; ++i) {
      const Scalar w = coin_bias(i);
      const auto sp = piece_.slopes(x[i], +1);
      const auto sm = piece_.slopes(x[i], -1);
      const Scalar left = w * sp.left + (Scalar(1) - w) * sm.left;
      const Scalar right = w * sp.right + (Scalar(1) - w) * sm.right;
      g[i] = scale * std::clamp(Scalar(0), left, right);
    }
    return g;
  }

  /// Optimality gap g(x) - min g.
  Scalar gap(const Vector<Scalar>& x) const { return eval(x) - min_value_; }

 private:
  void fill_minimizer() {
    const int d = spec_.dim;
    const Scalar r = radius();
    const Scalar c = prefactor_;
    const Scalar delta(spec_.delta);
    minimizer_.resize(d);
    switch (spec_.kind) {
      case FunctionClass::ConvexLipschitz:
        for (int i = 0; i < d; ++i) minimizer_[i] = -r * Scalar(alpha_[i]) / Scalar(2);
        min_value_ = c * r / Scalar(2) - c * r * delta;
        break;
      case FunctionClass::StronglyConvex: {
        const Scalar theta(spec_.theta);
        if (strong_interior_case(spec_.theta, spec_.delta)) {
          for (int i = 0; i < d; ++i)
            minimizer_[i] = -Scalar(2) * Scalar(alpha_[i]) * delta * r * (Scalar(1) + theta) /
                            (Scalar(1) - theta);
          min_value_ = c * r * r * (Scalar(1) + Scalar(3) * theta) / Scalar(4) -
                       delta * delta * r * r * c * (Scalar(1) + theta) * (Scalar(1) + theta) /
                           (Scalar(1) - theta);
        } else {
          for (int i = 0; i < d; ++i) minimizer_[i] = -Scalar(alpha_[i]) * r;
          min_value_ = (Scalar(1) + theta) / Scalar(2) * c * r * r -
                       (Scalar(1) + theta) * c * delta * r * r;
        }
        break;
      }
      case FunctionClass::SparseOpt:
        // alpha_i = 0 coordinates sit at 0, the unique minimizer of their term.
        for (int i = 0; i < d; ++i) minimizer_[i] = -r * Scalar(alpha_[i]);
        min_value_ = c * r * (Scalar(d) - Scalar(spec_.sparsity) * delta);
        break;
    }
  }

  ClassSpec spec_;
  Vertex alpha_;
  Scalar prefactor_{};
  detail::BasePiece<Scalar> piece_{};
  Vector<Scalar> minimizer_;
  Scalar min_value_{};
};

template <typename Scalar = double>
HardInstance<Scalar> make_instance(const ClassSpec& spec, const Vertex& alpha) {
  return HardInstance<Scalar>(spec, alpha);
}

/// Lipschitz constant of g_alpha w.r.t. l_inf (a bound on ||grad||_1 over the box).
template <typename Scalar>
Scalar lipschitz_linf(const HardInstance<Scalar>& inst) {
  const ClassSpec& s = inst.spec();
  switch (s.kind) {
    case FunctionClass::ConvexLipschitz: return inst.prefactor();
    case FunctionClass::StronglyConvex: return inst.prefactor() * Scalar(s.radius);
    case FunctionClass::SparseOpt: return inst.prefactor() * Scalar(s.dim) * Scalar(1 + s.delta);
  }
  return Scalar(0);
}

struct DiscrepancyReport {
  double analytic = 0.0;
  std::optional<double> bruteforce;
  std::optional<double> grid_step;
};

/// Closed-form rho(g_a, g_b) = inf_S [g_a + g_b] - min g_a - min g_b.
template <typename Scalar>
Scalar discrepancy_analytic(const HardInstance<Scalar>& a, const HardInstance<Scalar>& b) {
  require(a.spec() == b.spec(), ErrorCode::SpecMismatch, "instances come from different specs");
  const ClassSpec& s = a.spec();
  const Scalar c = a.prefactor();
  const Scalar r(s.radius);
  const Scalar delta(s.delta);
  const Scalar d(s.dim);
  const Vertex& x = a.alpha();
  const Vertex& y = b.alpha();
  switch (s.kind) {
    case FunctionClass::ConvexLipschitz: {
      const Scalar hamming = static_cast<Scalar>((x.array() != y.array()).count());
      return Scalar(2) * c * r * delta / d * hamming;
    }
    case FunctionClass::StronglyConvex: {
      const Scalar hamming = static_cast<Scalar>((x.array() != y.array()).count());
      const Scalar theta(s.theta);
      if (strong_interior_case(s.theta, s.delta))
        return Scalar(2) * c * delta * delta * r * r * (Scalar(1) + theta) * (Scalar(1) + theta) /
               (d * (Scalar(1) - theta)) * hamming;
      return c / d *
             (Scalar(2) * (Scalar(1) + theta) * r * r * delta -
              (Scalar(1) - theta) / Scalar(2) * r * r) *
             hamming;
    }
    case FunctionClass::SparseOpt: {
      // Every coordinate in either support contributes unless the two vertices
      // agree on it; opposite signs cost as much as disjoint supports.
      const auto shared = static_cast<Scalar>(((x.array() == y.array()) && (x.array() != 0)).count());
      return Scalar(2) * c * r * delta * (Scalar(s.sparsity) - shared);
    }
  }
  return Scalar(0);
}

/// Tensor grid {-r + 2r j / n : j = 0..n}, n = ceil(2r / step); includes +-r.
std::vector<double> box_grid(double radius, double step);

/// Minimum over the tensor grid of a separable function F(x) = sum_i h_i(x_i),
/// queried only through point evaluations. Uses the full tensor product when it
/// has at most `full_grid_budget` points, otherwise exploits separability:
/// min F = F(0) + sum_i min_t [F(t e_i) - F(0)] on the same grid.
template <typename Scalar, typename F>
Scalar separable_grid_minimum(F&& eval, int dim, double radius, double step,
                              std::size_t full_grid_budget = 4'000'000) {
  const std::vector<double> grid = box_grid(radius, step);
  const std::size_t n = grid.size();
  double points = 1.0;
  for (int i = 0; i < dim; ++i) points *= static_cast<double>(n);
  Vector<Scalar> x = Vector<Scalar>::Zero(dim);
  if (points <= static_cast<double>(full_grid_budget)) {
    std::vector<std::size_t> idx(dim, 0);
    for (int i = 0; i < dim; ++i) x[i] = Scalar(grid[0]);
    Scalar best = eval(x);
    for (;;) {
      int i = 0;
      while (i < dim && ++idx[i] == n) {
        idx[i] = 0;
        x[i] = Scalar(grid[0]);
        ++i;
      }
      if (i == dim) break;
      x[i] = Scalar(grid[idx[i]]);
      best = std::min(best, eval(x));
    }
    return best;
  }
  const Scalar base = eval(x);
  Scalar total = base;
  for (int i = 0; i < dim; ++i) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (double t : grid) {
      x[i] = Scalar(t);
      best = std::min(best, eval(x) - base);
    }
    x[i] = Scalar(0);
    total += best;
  }
  return total;
}

/// Grid oracle for rho. Requires dim <= 4 and 0 < grid_step <= r.
template <typename Scalar>
Scalar discrepancy_bruteforce(const HardInstance<Scalar>& a, const HardInstance<Scalar>& b,
                              double grid_step) {
  require(a.spec() == b.spec(), ErrorCode::SpecMismatch, "instances come from different specs");
  require(a.dim() <= 4, ErrorCode::DimensionTooLarge, "brute-force discrepancy needs d <= 4");
  require(grid_step > 0 && grid_step <= a.spec().radius, ErrorCode::InvalidArgument,
          "grid step must lie in (0, r]");
  const Scalar joint = separable_grid_minimum<Scalar>(
      [&](const Vector<Scalar>& x) { return a.eval(x) + b.eval(x); }, a.dim(), a.spec().radius,
      grid_step);
  return joint - a.min_value() - b.min_value();
}

/// Grid minimum of a single instance (same grid as discrepancy_bruteforce).
template <typename Scalar>
Scalar grid_minimum(const HardInstance<Scalar>& inst, double grid_step) {
  require(inst.dim() <= 4, ErrorCode::DimensionTooLarge, "grid minimization needs d <= 4");
  require(grid_step > 0 && grid_step <= inst.spec().radius, ErrorCode::InvalidArgument,
          "grid step must lie in (0, r]");
  return separable_grid_minimum<Scalar>([&](const Vector<Scalar>& x) { return inst.eval(x); },
                                        inst.dim(), inst.spec().radius, grid_step);
}

template <typename Scalar>
DiscrepancyReport discrepancy(const HardInstance<Scalar>& a, const HardInstance<Scalar>& b,
                              std::optional<double> grid_step = std::nullopt) {
  DiscrepancyReport report;
  report.analytic = static_cast<double>(discrepancy_analytic(a, b));
  if (grid_step) {
    report.bruteforce = static_cast<double>(discrepancy_bruteforce(a, b, *grid_step));
    report.grid_step = grid_step;
  }
  return report;
}

/// psi = min over distinct pairs of the analytic discrepancy.
template <typename Scalar>
Scalar separation_psi(std::span<const HardInstance<Scalar>> ensemble) {
  require(ensemble.size() >= 2, ErrorCode::TooFewInstances, "need at least two instances");
  for (const auto& inst : ensemble)
    require(inst.spec() == ensemble.front().spec(), ErrorCode::SpecMismatch,
            "ensemble mixes specs");
  Scalar best = discrepancy_analytic(ensemble[0], ensemble[1]);
  for (std::size_t a = 0; a < ensemble.size(); ++a)
    for (std::size_t b = a + 1; b < ensemble.size(); ++b)
      best = std::min(best, discrepancy_analytic(ensemble[a], ensemble[b]));
  return best;
}

template <typename Scalar>
Scalar separation_psi(const std::vector<HardInstance<Scalar>>& ensemble) {
  return separation_psi(std::span<const HardInstance<Scalar>>(ensemble));
}

template <typename Scalar = double>
std::vector<HardInstance<Scalar>> make_ensemble(const ClassSpec& spec,
                                                std::span<const Vertex> vertices) {
  std::vector<HardInstance<Scalar>> out;
  out.reserve(vertices.size());
  for (const Vertex& v : vertices) out.emplace_back(spec, v);
  return out;
}

}  // namespace sco

#endif  // SCO_ENSEMBLES_HPP_
