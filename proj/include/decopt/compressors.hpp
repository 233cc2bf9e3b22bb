#ifndef DECOPT_COMPRESSORS_HPP
#define DECOPT_COMPRESSORS_HPP

#include <cstdint>
#include <string>

#include "decopt/errors.hpp"
#include "decopt/linalg.hpp"
#include "decopt/rng.hpp"

namespace decopt {

// Keeps the k largest-magnitude coordinates (ties: lowest index wins),
// zeros the rest. Deterministic; ||Q(z) - z||^2 <= (1 - k/n) ||z||^2.
Vec top_k(const Vec& z, std::size_t k);

// Keeps a uniformly random k-subset. scaled=true multiplies kept
// coordinates by n/k (unbiased, E||Q(z)-z||^2 = (n/k - 1)||z||^2);
// scaled=false leaves them as-is (contractive, (1 - k/n)||z||^2).
Vec rand_k(const Vec& z, std::size_t k, RngStream& rng, bool scaled);

// Draws a simplex vertex e_i with probability p_i. p is renormalized;
// entries below -1e-9 are an error. Returns the one-hot vector; the
// drawn index goes to *index when non-null.
Vec simplex_vertex(const Vec& p, RngStream& rng, std::size_t* index = nullptr);

enum class CompressorKind {
  identity,
  topk,
  randk_scaled,
  randk_plain,
  simplex_vertex,
};

struct Compressor {
  CompressorKind kind = CompressorKind::identity;
  std::size_t k = 0;  // kept-coordinate count for topk/randk

  Vec apply(const Vec& z, RngStream& rng) const;
  bool unbiased() const {
    return kind == CompressorKind::identity ||
           kind == CompressorKind::randk_scaled ||
           kind == CompressorKind::simplex_vertex;
  }
  // Declared contraction parameter q = k/n (identity: 1).
  double q(std::size_t n) const;
  // Transmitted numbers per message of dimension n.
  std::int64_t message_cost(std::size_t n) const;

  std::string name() const;
};

}  // namespace decopt

#endif
