#ifndef DECOPT_TOPOLOGY_HPP
#define DECOPT_TOPOLOGY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "decopt/errors.hpp"
#include "decopt/linalg.hpp"

namespace decopt {

// Undirected connected communication graph. Edges stored once, i < j.
struct Graph {
  std::size_t m = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool connected() const;
  std::size_t diameter() const;
};

enum class GraphKind { path, ring, star, complete, erdos_renyi };

Graph make_graph(GraphKind kind, std::size_t m, double p = 0.5,
                 std::uint64_t seed = 0);

// L = D - A, built in integer arithmetic so L*1 = 0 exactly.
Matrix laplacian(const Graph& g);

// Full symmetric eigensolve; ascending order.
Vec laplacian_spectrum(const Graph& g);

// chi = lambda_max(L) / lambda_min^+(L). Eigenvalues below
// 1e-9 * lambda_max count as zero; a second zero means disconnected.
double chi(const Graph& g);

// W = I - L/lambda_max(L): symmetric, doubly stochastic, eigenvalues in
// [0, 1] with a simple eigenvalue 1 on connected graphs.
struct GossipMatrix {
  Matrix W;
  double lambda_max = 0.0;      // lambda_max(L)
  double lambda_min_pos = 0.0;  // smallest strictly positive Laplacian eig

  double chi() const { return lambda_max / lambda_min_pos; }
  // Largest non-consensus eigenvalue of W; spectral gap is 1/chi.
  double lambda2_w() const { return 1.0 - lambda_min_pos / lambda_max; }
  std::size_t m() const { return W.rows(); }
};

GossipMatrix gossip_matrix(const Graph& g);

// A (possibly time-varying) sequence of connected-graph gossip matrices.
class TopologySchedule {
 public:
  static TopologySchedule fixed(const Graph& g);
  static TopologySchedule periodic(const std::vector<Graph>& graphs);
  // Round t picks deterministically (by hash of (seed, t)) from a seeded
  // pool of connected Erdos-Renyi graphs, so chi is a finite max.
  static TopologySchedule random_pool(std::size_t m, double p,
                                      std::uint64_t seed,
                                      std::size_t pool_size = 8);

  const GossipMatrix& at(std::int64_t round) const;
  bool is_static() const { return mats_.size() == 1; }
  double chi() const { return chi_; }
  std::size_t m() const { return mats_.front().m(); }

 private:
  std::vector<GossipMatrix> mats_;
  bool randomized_ = false;
  std::uint64_t seed_ = 0;
  double chi_ = 1.0;
};

}  // namespace decopt

#endif
