#include "sco/ensembles.hpp"

#include <cmath>

namespace sco {

const char* to_string(FunctionClass kind) noexcept {
  switch (kind) {
    case FunctionClass::ConvexLipschitz: return "convex";
    case FunctionClass::StronglyConvex: return "strong";
    case FunctionClass::SparseOpt: return "sparse";
  }
  return "unknown";
}

const char* to_string(OracleKind kind) noexcept { return kind == OracleKind::A ? "A" : "B"; }

FunctionClass parse_function_class(const std::string& name) {
  if (name == "convex") return FunctionClass::ConvexLipschitz;
  if (name == "strong") return FunctionClass::StronglyConvex;
  if (name == "sparse") return FunctionClass::SparseOpt;
  throw Error(ErrorCode::InvalidArgument, "unknown class '" + name + "'");
}

OracleKind parse_oracle_kind(const std::string& name) {
  if (name == "A" || name == "a") return OracleKind::A;
  if (name == "B" || name == "b") return OracleKind::B;
  throw Error(ErrorCode::InvalidArgument, "unknown oracle '" + name + "'");
}

void ClassSpec::validate() const {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  require(lipschitz > 0 && std::isfinite(lipschitz), ErrorCode::InvalidArgument,
          "Lipschitz constant must be positive");
  require(p_norm >= 1.0, ErrorCode::InvalidArgument, "p must lie in [1, inf]");
  require(radius > 0 && std::isfinite(radius), ErrorCode::InvalidArgument,
          "radius must be positive");
  require(delta > 0 && delta <= 0.25, ErrorCode::InvalidArgument, "delta must lie in (0, 1/4]");
  switch (kind) {
    case FunctionClass::ConvexLipschitz:
      break;
    case FunctionClass::StronglyConvex:
      require(theta >= 0 && theta < 1, ErrorCode::InvalidArgument, "theta must lie in [0, 1)");
      require((oracle == OracleKind::A && p_norm == 1.0) || (oracle == OracleKind::B && p_norm > 2.0),
              ErrorCode::UnsupportedCombination,
              "strongly convex family is defined for (oracle A, p = 1) and (oracle B, p > 2)");
      break;
    case FunctionClass::SparseOpt:
      require(sparsity >= 1 && sparsity <= dim / 2, ErrorCode::InvalidSparsity,
              "need 1 <= k <= floor(d/2)");
      require(std::isinf(p_norm), ErrorCode::UnsupportedCombination, "sparse family needs p = inf");
      require(oracle == OracleKind::B, ErrorCode::UnsupportedCombination,
              "sparse family is served by oracle B");
      break;
  }
}

double ensemble_prefactor(const ClassSpec& spec) {
  spec.validate();
  const double L = spec.lipschitz;
  const double d_pow = std::pow(static_cast<double>(spec.dim), 1.0 - inverse_exponent(spec.p_norm));
  switch (spec.kind) {
    case FunctionClass::ConvexLipschitz:
      return spec.oracle == OracleKind::A ? L / 2.0 : L * d_pow;
    case FunctionClass::StronglyConvex:
      return spec.oracle == OracleKind::A ? L / spec.radius : L * d_pow / spec.radius;
    case FunctionClass::SparseOpt:
      return L / 3.0;
  }
  return 0.0;
}

double strong_convexity_kappa_sq(const ClassSpec& spec) {
  require(spec.kind == FunctionClass::StronglyConvex, ErrorCode::WrongKind,
          "kappa is defined for the strongly convex family only");
  return (1.0 - spec.theta) * ensemble_prefactor(spec) / (4.0 * spec.dim);
}

bool compat_holds(double lipschitz, double kappa_sq, double radius, int dim, double p_norm) {
  const double rhs = radius / 4.0 * std::pow(static_cast<double>(dim), inverse_exponent(p_norm));
  if (kappa_sq <= 0) return true;
  return lipschitz / kappa_sq >= rhs * (1.0 - 1e-12);
}

bool check_compat(const ClassSpec& spec) {
  require(spec.kind == FunctionClass::StronglyConvex, ErrorCode::WrongKind,
          "compatibility applies to the strongly convex family");
  return compat_holds(spec.lipschitz, strong_convexity_kappa_sq(spec), spec.radius, spec.dim,
                      spec.p_norm);
}

bool vertex_compatible(const ClassSpec& spec, const Vertex& alpha) {
  if (alpha.size() != spec.dim) return false;
  if (spec.kind == FunctionClass::SparseOpt)
    return (alpha.array().abs() <= 1).all() && (alpha.array() != 0).count() == spec.sparsity;
  return (alpha.array().abs() == 1).all();
}

std::vector<double> box_grid(double radius, double step) {
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * radius / step - 1e-12));
  std::vector<double> grid(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    grid[j] = -radius + 2.0 * radius * static_cast<double>(j) / static_cast<double>(n);
  grid.back() = radius;
  return grid;
}

}  // namespace sco
