#ifndef SCO_PACKING_HPP_
#define SCO_PACKING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sco/common.hpp"

namespace sco {

enum class PackingKind { Dense, Sparse };

/// Hamming packing of {-1,+1}^d (dense) or of k-sparse vectors in {-1,0,+1}^d.
/// Immutable once built.
struct PackingSet {
  int dim = 0;
  PackingKind kind = PackingKind::Dense;
  int sparsity = 0;  // k; only meaningful for Sparse
  std::vector<Vertex> vertices;
  int min_separation = 0;  // required pairwise Hamming distance
  std::uint64_t seed = 0;

  std::size_t size() const { return vertices.size(); }
};

struct PackingOptions {
  std::size_t max_size = 4096;
  std::size_t retry_factor = 200;  // draws allowed per target vertex
};

/// ceil((2/sqrt(e))^(d/2)), saturating at max_size.
std::size_t dense_packing_target(int dim, std::size_t max_size = 4096);

/// ceil(exp((k/2) ln((d-k)/(k/2)))), saturating at max_size.
std::size_t sparse_packing_target(int dim, int k, std::size_t max_size = 4096);

/// Required pairwise separation: ceil(d/4) dense, ceil(k/2) sparse.
int dense_separation(int dim);
int sparse_separation(int k);

PackingSet build_dense_packing(int dim, std::uint64_t seed, const PackingOptions& opts = {});

PackingSet build_sparse_packing(int dim, int k, std::uint64_t seed,
                                const PackingOptions& opts = {});

int hamming_distance(const Vertex& a, const Vertex& b);

struct PackingViolation {
  enum class Type { OutOfAlphabet, WrongSupport, TooClose, Duplicate, WrongDimension, TooSmall };
  Type type;
  std::size_t first = 0;
  std::optional<std::size_t> second;
  int value = 0;
  std::string describe() const;
};

struct PackingReport {
  bool ok = true;
  int min_pairwise = 0;  // -1 when fewer than two vertices
  std::vector<PackingViolation> violations;
};

/// Exhaustive check of every invariant of `set`. The cardinality check is
/// skipped when `check_cardinality` is false (e.g. for hand-built sets).
PackingReport verify_packing(const PackingSet& set, bool check_cardinality = false,
                             std::size_t max_size = 4096);

}  // namespace sco

#endif  // SCO_PACKING_HPP_
