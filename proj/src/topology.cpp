#include "decopt/topology.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <queue>

#include "decopt/rng.hpp"

namespace decopt {

namespace {

// BFS distances from a source; SIZE_MAX marks unreachable.
std::vector<std::size_t> bfs(const Graph& g, std::size_t src) {
  std::vector<std::vector<std::size_t>> adj(g.m);
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::size_t> dist(g.m, static_cast<std::size_t>(-1));
  std::queue<std::size_t> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t w : adj[v])
      if (dist[w] == static_cast<std::size_t>(-1)) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  return dist;
}

}  // namespace

bool Graph::connected() const {
  if (m == 0) return false;
  auto dist = bfs(*this, 0);
  return std::ranges::none_of(
      dist, [](std::size_t d) { return d == static_cast<std::size_t>(-1); });
}

std::size_t Graph::diameter() const {
  std::size_t diam = 0;
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t d : bfs(*this, s)) diam = std::max(diam, d);
  return diam;
}

Graph make_graph(GraphKind kind, std::size_t m, double p, std::uint64_t seed) {
  if (m < 2) throw ConfigError("make_graph: need m >= 2");
  Graph g;
  g.m = m;
  switch (kind) {
    case GraphKind::path:
      for (std::size_t i = 0; i + 1 < m; ++i) g.edges.emplace_back(i, i + 1);
      break;
    case GraphKind::ring:
      for (std::size_t i = 0; i + 1 < m; ++i) g.edges.emplace_back(i, i + 1);
      if (m > 2) g.edges.emplace_back(0, m - 1);
      break;
    case GraphKind::star:
      for (std::size_t i = 1; i < m; ++i) g.edges.emplace_back(0, i);
      break;
    case GraphKind::complete:
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) g.edges.emplace_back(i, j);
      break;
    case GraphKind::erdos_renyi: {
      if (p <= 0.0 || p > 1.0) throw ConfigError("erdos_renyi: p in (0, 1]");
      constexpr int kRetries = 256;
      for (int attempt = 0; attempt < kRetries; ++attempt) {
        g.edges.clear();
        RngStream rng(seed, 0x36d, static_cast<std::uint64_t>(attempt));
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = i + 1; j < m; ++j)
            if (rng.uniform() < p) g.edges.emplace_back(i, j);
        if (g.connected()) return g;
      }
      throw TopologyError("erdos_renyi: no connected graph in retry budget");
    }
  }
  return g;
}

Matrix laplacian(const Graph& g) {
  Matrix l(g.m, g.m);
  for (auto [a, b] : g.edges) {
    l(a, a) += 1.0;
    l(b, b) += 1.0;
    l(a, b) -= 1.0;
    l(b, a) -= 1.0;
  }
  return l;
}

Vec laplacian_spectrum(const Graph& g) {
  const Matrix l = laplacian(g);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      le(l.data(), static_cast<Eigen::Index>(g.m),
         static_cast<Eigen::Index>(g.m));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(le);
  const auto& ev = es.eigenvalues();
  return Vec(ev.data(), ev.data() + ev.size());
}

namespace {

// (lambda_max, lambda_min_pos) with the zero threshold of the module.
std::pair<double, double> extreme_positive(const Graph& g) {
  const Vec spec = laplacian_spectrum(g);
  const double lmax = spec.back();
  const double zero_tol = 1e-9 * lmax;
  double lmin_pos = 0.0;
  int zero_count = 0;
  for (double ev : spec) {
    if (ev <= zero_tol) {
      ++zero_count;
    } else if (lmin_pos == 0.0) {
      lmin_pos = ev;
    }
  }
  if (zero_count != 1 || lmin_pos <= 0.0)
    throw TopologyError("graph is disconnected (multiple zero eigenvalues)");
  return {lmax, lmin_pos};
}

}  // namespace

double chi(const Graph& g) {
  auto [lmax, lmin_pos] = extreme_positive(g);
  return lmax / lmin_pos;
}

GossipMatrix gossip_matrix(const Graph& g) {
  auto [lmax, lmin_pos] = extreme_positive(g);
  // The complete graph's Laplacian spectrum is {0, m, ..., m}; using the
  // analytic value gives exactly uniform averaging weights.
  if (g.edges.size() == g.m * (g.m - 1) / 2) {
    lmax = static_cast<double>(g.m);
    lmin_pos = lmax;
  }
  const Matrix l = laplacian(g);
  GossipMatrix gm;
  gm.lambda_max = lmax;
  gm.lambda_min_pos = lmin_pos;
  gm.W = Matrix(g.m, g.m);
  for (std::size_t i = 0; i < g.m; ++i)
    for (std::size_t j = 0; j < g.m; ++j)
      gm.W(i, j) = (i == j ? 1.0 : 0.0) - l(i, j) / lmax;
  return gm;
}

TopologySchedule TopologySchedule::fixed(const Graph& g) {
  TopologySchedule s;
  s.mats_.push_back(gossip_matrix(g));
  s.chi_ = s.mats_.front().chi();
  return s;
}

TopologySchedule TopologySchedule::periodic(const std::vector<Graph>& graphs) {
  if (graphs.empty()) throw ConfigError("periodic schedule: empty graph list");
  TopologySchedule s;
  for (const auto& g : graphs) {
    s.mats_.push_back(gossip_matrix(g));
    s.chi_ = std::max(s.chi_, s.mats_.back().chi());
  }
  return s;
}

TopologySchedule TopologySchedule::random_pool(std::size_t m, double p,
                                               std::uint64_t seed,
                                               std::size_t pool_size) {
  if (pool_size == 0) throw ConfigError("random schedule: empty pool");
  TopologySchedule s;
  s.randomized_ = true;
  s.seed_ = seed;
  for (std::size_t i = 0; i < pool_size; ++i) {
    Graph g = make_graph(GraphKind::erdos_renyi, m, p,
                         RngStream::derive_key(seed, 0xe5, i));
    s.mats_.push_back(gossip_matrix(g));
    s.chi_ = std::max(s.chi_, s.mats_.back().chi());
  }
  return s;
}

const GossipMatrix& TopologySchedule::at(std::int64_t round) const {
  if (mats_.size() == 1) return mats_.front();
  if (randomized_) {
    const std::uint64_t h =
        RngStream::derive_key(seed_, 0x7713, static_cast<std::uint64_t>(round));
    return mats_[h % mats_.size()];
  }
  return mats_[static_cast<std::size_t>(round) % mats_.size()];
}

}  // namespace decopt
