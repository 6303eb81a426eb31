#include "sco/solvers.hpp"

#include <cmath>

namespace sco {

double log_dimension_exponent(int dim) {
  require(dim >= 3, ErrorCode::UnsupportedCombination, "log-dimension prox needs d >= 3");
  const double l = 2.0 * std::log(static_cast<double>(dim));
  return l / (l - 1.0);
}

Recommendation recommended_prox(Geometry geometry, int dim, double p_norm) {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  require(p_norm >= 1.0, ErrorCode::InvalidArgument, "p must lie in [1, inf]");
  const auto steps = StepSchedule::inverse_sqrt(1.0);
  switch (geometry) {
    case Geometry::Sparse:
      return {ProxSpec::power(log_dimension_exponent(dim)), steps};
    case Geometry::Dual:
    case Geometry::Box:
      if (p_norm <= 2.0) return {ProxSpec::euclidean_half(), steps};
      if (std::isinf(p_norm)) return {ProxSpec::power(log_dimension_exponent(dim)), steps};
      return {ProxSpec::power(dual_exponent(p_norm)), steps};
  }
  throw Error(ErrorCode::UnsupportedCombination, "unknown geometry");
}

}  // namespace sco
