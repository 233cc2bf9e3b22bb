#include "decopt/compressors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace decopt {

Vec top_k(const Vec& z, std::size_t k) {
  const std::size_t n = z.size();
  if (k == 0 || k > n) throw ConfigError("top_k: need 1 <= k <= n");
  if (k == n) return z;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // larger magnitude first; ties resolved toward the lower index
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ma = std::abs(z[a]), mb = std::abs(z[b]);
                      return ma != mb ? ma > mb : a < b;
                    });
  Vec out(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) out[idx[i]] = z[idx[i]];
  return out;
}

Vec rand_k(const Vec& z, std::size_t k, RngStream& rng, bool scaled) {
  const std::size_t n = z.size();
  if (k == 0 || k > n) throw ConfigError("rand_k: need 1 <= k <= n");
  if (k == n) return z;
  // Partial Fisher-Yates: first k entries of a random permutation.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i)
    std::swap(idx[i], idx[i + rng.uniform_int(n - i)]);
  Vec out(n, 0.0);
  const double factor =
      scaled ? static_cast<double>(n) / static_cast<double>(k) : 1.0;
  for (std::size_t i = 0; i < k; ++i) out[idx[i]] = factor * z[idx[i]];
  return out;
}

Vec simplex_vertex(const Vec& p, RngStream& rng, std::size_t* index) {
  double total = 0.0;
  for (double v : p) {
    if (v < -1e-9) throw ConfigError("simplex_vertex: negative probability");
    total += std::max(v, 0.0);
  }
  if (total <= 0.0) throw ConfigError("simplex_vertex: zero mass");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t pick = p.size() - 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += std::max(p[i], 0.0);
    if (u < acc) {
      pick = i;
      break;
    }
  }
  Vec out(p.size(), 0.0);
  out[pick] = 1.0;
  if (index) *index = pick;
  return out;
}

Vec Compressor::apply(const Vec& z, RngStream& rng) const {
  switch (kind) {
    case CompressorKind::identity:
      return z;
    case CompressorKind::topk:
      return top_k(z, k);
    case CompressorKind::randk_scaled:
      return rand_k(z, k, rng, true);
    case CompressorKind::randk_plain:
      return rand_k(z, k, rng, false);
    case CompressorKind::simplex_vertex:
      return simplex_vertex(z, rng);
  }
  throw ConfigError("compressor: unknown kind");
}

double Compressor::q(std::size_t n) const {
  if (kind == CompressorKind::identity) return 1.0;
  if (kind == CompressorKind::simplex_vertex)
    return 1.0 / static_cast<double>(n);
  return static_cast<double>(k) / static_cast<double>(n);
}

std::int64_t Compressor::message_cost(std::size_t n) const {
  switch (kind) {
    case CompressorKind::identity:
      return static_cast<std::int64_t>(n);
    case CompressorKind::topk:
    case CompressorKind::randk_scaled:
    case CompressorKind::randk_plain:
      return 2 * static_cast<std::int64_t>(k);  // values + indices
    case CompressorKind::simplex_vertex:
      return 1;
  }
  throw ConfigError("compressor: unknown kind");
}

std::string Compressor::name() const {
  switch (kind) {
    case CompressorKind::identity: return "identity";
    case CompressorKind::topk: return "topk";
    case CompressorKind::randk_scaled: return "randk_scaled";
    case CompressorKind::randk_plain: return "randk_plain";
    case CompressorKind::simplex_vertex: return "simplex_vertex";
  }
  return "unknown";
}

}  // namespace decopt
