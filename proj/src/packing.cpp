#include "sco/packing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sco/rng.hpp"

namespace sco {

namespace {

// Bit-packed ternary vertex: bit i of `pos` / `neg` set iff entry i is +1 / -1.
// Two entries differ iff they differ in either mask.
struct PackedVertex {
  std::vector<std::uint64_t> pos;
  std::vector<std::uint64_t> neg;
};

PackedVertex pack(const Vertex& v) {
  const std::size_t words = (static_cast<std::size_t>(v.size()) + 63) / 64;
  PackedVertex out{std::vector<std::uint64_t>(words, 0), std::vector<std::uint64_t>(words, 0)};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (v[i] > 0) out.pos[i / 64] |= bit;
    if (v[i] < 0) out.neg[i / 64] |= bit;
  }
  return out;
}

int packed_distance(const PackedVertex& a, const PackedVertex& b) {
  int dist = 0;
  for (std::size_t w = 0; w < a.pos.size(); ++w)
    dist += std::popcount((a.pos[w] ^ b.pos[w]) | (a.neg[w] ^ b.neg[w]));
  return dist;
}

std::size_t saturating_ceil_exp(double log_value, std::size_t max_size) {
  if (log_value >= std::log(static_cast<double>(max_size))) return max_size;
  // Guard against exp() landing a hair above an integer.
  const double v = std::exp(log_value);
  const double r = std::round(v);
  const double c = std::abs(v - r) < 1e-9 * std::max(1.0, r) ? r : std::ceil(v);
  return std::max<std::size_t>(1, std::min(max_size, static_cast<std::size_t>(c)));
}

template <typename Draw>
PackingSet greedy_packing(PackingSet set, std::size_t target, int separation,
                          const PackingOptions& opts, Draw&& draw) {
  std::vector<PackedVertex> packed;
  packed.reserve(target);
  const std::size_t budget = opts.retry_factor * target;
  for (std::size_t attempt = 0; attempt < budget && set.vertices.size() < target; ++attempt) {
    Vertex candidate = draw();
    PackedVertex pc = pack(candidate);
    const bool keep = std::all_of(packed.begin(), packed.end(), [&](const PackedVertex& kept) {
      return packed_distance(kept, pc) >= separation;
    });
    if (keep) {
      set.vertices.push_back(std::move(candidate));
      packed.push_back(std::move(pc));
    }
  }
  if (set.vertices.size() < target) {
    std::ostringstream msg;
    msg << "reached " << set.vertices.size() << " of " << target << " vertices after " << budget
        << " draws (dim " << set.dim << ", seed " << set.seed << ")";
    throw Error(ErrorCode::ConstructionFailed, msg.str());
  }
  return set;
}

}  // namespace

int dense_separation(int dim) { return (dim + 3) / 4; }
int sparse_separation(int k) { return (k + 1) / 2; }

std::size_t dense_packing_target(int dim, std::size_t max_size) {
  // ln((2/sqrt(e))^(d/2)) = (d/2)(ln 2 - 1/2)
  return saturating_ceil_exp(0.5 * dim * (std::log(2.0) - 0.5), max_size);
}

std::size_t sparse_packing_target(int dim, int k, std::size_t max_size) {
  const double half_k = 0.5 * k;
  return saturating_ceil_exp(half_k * std::log((dim - k) / half_k), max_size);
}

PackingSet build_dense_packing(int dim, std::uint64_t seed, const PackingOptions& opts) {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  PackingSet set;
  set.dim = dim;
  set.kind = PackingKind::Dense;
  set.min_separation = dense_separation(dim);
  set.seed = seed;

  if (dim <= 3) {
    // Separation is 1 here, so every vertex of the cube qualifies.
    const int count = 1 << dim;
    for (int code = 0; code < count; ++code) {
      Vertex v(dim);
      for (int i = 0; i < dim; ++i) v[i] = (code >> i) & 1 ? -1 : 1;
      set.vertices.push_back(std::move(v));
    }
    return set;
  }

  CounterRng rng(derive_seed(seed, 0xD15E, static_cast<std::uint64_t>(dim)));
  const std::size_t target = dense_packing_target(dim, opts.max_size);
  const int separation = set.min_separation;
  return greedy_packing(std::move(set), target, separation, opts, [&] {
    Vertex v(dim);
    for (int i = 0; i < dim; i += 64) {
      std::uint64_t bits = rng();
      for (int j = i; j < std::min(dim, i + 64); ++j, bits >>= 1) v[j] = (bits & 1) ? 1 : -1;
    }
    return v;
  });
}

PackingSet build_sparse_packing(int dim, int k, std::uint64_t seed, const PackingOptions& opts) {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  require(k >= 1 && k <= dim / 2, ErrorCode::InvalidSparsity,
          "need 1 <= k <= floor(d/2), got k=" + std::to_string(k) + " d=" + std::to_string(dim));
  PackingSet set;
  set.dim = dim;
  set.kind = PackingKind::Sparse;
  set.sparsity = k;
  set.min_separation = sparse_separation(k);
  set.seed = seed;

  CounterRng rng(derive_seed(seed, 0x5BA2, static_cast<std::uint64_t>(dim) << 20 | k));
  const std::size_t target = sparse_packing_target(dim, k, opts.max_size);
  const int separation = set.min_separation;
  std::vector<int> index(dim);
  return greedy_packing(std::move(set), target, separation, opts, [&] {
    // Partial Fisher-Yates draws the support without replacement.
    std::iota(index.begin(), index.end(), 0);
    Vertex v = Vertex::Zero(dim);
    for (int j = 0; j < k; ++j) {
      const auto pick = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(dim - j)));
      std::swap(index[j], index[pick]);
      v[index[j]] = (rng() >> 63) ? 1 : -1;
    }
    return v;
  });
}

int hamming_distance(const Vertex& a, const Vertex& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch,
          "vertices of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  return static_cast<int>((a.array() != b.array()).count());
}

std::string PackingViolation::describe() const {
  std::ostringstream out;
  switch (type) {
    case Type::OutOfAlphabet: out << "vertex " << first << " has an entry outside the alphabet"; break;
    case Type::WrongSupport: out << "vertex " << first << " has support " << value; break;
    case Type::TooClose:
      out << "vertices " << first << "," << *second << " at Hamming distance " << value;
      break;
    case Type::Duplicate: out << "vertices " << first << "," << *second << " are equal"; break;
    case Type::WrongDimension: out << "vertex " << first << " has length " << value; break;
    case Type::TooSmall: out << "cardinality " << value << " below target"; break;
  }
  return out.str();
}

PackingReport verify_packing(const PackingSet& set, bool check_cardinality, std::size_t max_size) {
  using Type = PackingViolation::Type;
  PackingReport report;
  std::vector<PackedVertex> packed;
  packed.reserve(set.size());
  bool shapes_ok = true;
  for (std::size_t j = 0; j < set.size(); ++j) {
    const Vertex& v = set.vertices[j];
    if (v.size() != set.dim) {
      report.violations.push_back({Type::WrongDimension, j, std::nullopt, static_cast<int>(v.size())});
      shapes_ok = false;
      continue;
    }
    const bool alphabet = set.kind == PackingKind::Dense
                              ? (v.array().abs() == 1).all()
                              : (v.array().abs() <= 1).all();
    if (!alphabet) report.violations.push_back({Type::OutOfAlphabet, j, std::nullopt, 0});
    if (set.kind == PackingKind::Sparse) {
      const int support = static_cast<int>((v.array() != 0).count());
      if (support != set.sparsity) report.violations.push_back({Type::WrongSupport, j, std::nullopt, support});
    }
    packed.push_back(pack(v));
  }

  report.min_pairwise = -1;
  if (shapes_ok) {
    for (std::size_t a = 0; a < packed.size(); ++a) {
      for (std::size_t b = a + 1; b < packed.size(); ++b) {
        const int dist = packed_distance(packed[a], packed[b]);
        report.min_pairwise = report.min_pairwise < 0 ? dist : std::min(report.min_pairwise, dist);
        if (dist == 0) {
          report.violations.push_back({Type::Duplicate, a, b, 0});
        } else if (dist < set.min_separation) {
          report.violations.push_back({Type::TooClose, a, b, dist});
        }
      }
    }
  }

  if (check_cardinality) {
    const std::size_t target = set.kind == PackingKind::Dense
                                   ? (set.dim <= 3 ? std::size_t{1} << set.dim
                                                   : dense_packing_target(set.dim, max_size))
                                   : sparse_packing_target(set.dim, set.sparsity, max_size);
    if (set.size() < target)
      report.violations.push_back({Type::TooSmall, 0, std::nullopt, static_cast<int>(set.size())});
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace sco
