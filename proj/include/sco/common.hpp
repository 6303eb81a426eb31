#ifndef SCO_COMMON_HPP_
#define SCO_COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sco {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;

// Hypercube / ternary vertex with entries in {-1, 0, +1}.
using Vertex = Eigen::VectorXi;

enum class ErrorCode {
  ConstructionFailed,
  InvalidSparsity,
  DimensionMismatch,
  UnsupportedCombination,
  IncompatibleVertex,
  OutOfDomain,
  SpecMismatch,
  DimensionTooLarge,
  InvalidArgument,
  TooFewInstances,
  WrongKind,
  InnerSolveFailed,
  OutOfRange,
  InsufficientPoints,
  NonPositiveGap,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Hoelder conjugate q = p/(p-1), with 1 <-> inf.
inline double dual_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

/// 1/p with 1/inf = 0.
inline double inverse_exponent(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

/// l_p norm for p in [1, inf].
template <typename Derived>
typename Derived::Scalar lp_norm(const Eigen::MatrixBase<Derived>& x, double p) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return Scalar(0);
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  // Scale by the max entry so large exponents neither overflow nor underflow.
  const Scalar m = x.cwiseAbs().maxCoeff();
  if (m == Scalar(0)) return Scalar(0);
  Scalar s(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, Scalar(p));
  return m * std::pow(s, Scalar(1.0 / p));
}

template <typename Scalar>
inline Scalar sign_or_zero(Scalar v) {
  return (v > Scalar(0)) - (v < Scalar(0));
}

}  // namespace sco

#endif  // SCO_COMMON_HPP_
