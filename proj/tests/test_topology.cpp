#include <cmath>

#include "doctest.h"

#include "decopt/topology.hpp"

using namespace decopt;

TEST_CASE("standard families have the expected edge counts") {
  CHECK(make_graph(GraphKind::complete, 3).edges.size() == 3);
  const Graph p4 = make_graph(GraphKind::path, 4);
  CHECK(p4.edges.size() == 3);
  CHECK(p4.diameter() == 3);
  CHECK(make_graph(GraphKind::ring, 5).edges.size() == 5);
  CHECK(make_graph(GraphKind::star, 6).edges.size() == 5);
  CHECK_THROWS_AS(make_graph(GraphKind::ring, 1), ConfigError);
}

TEST_CASE("erdos-renyi graphs are connected and reproducible per seed") {
  const Graph a = make_graph(GraphKind::erdos_renyi, 10, 0.5, 7);
  const Graph b = make_graph(GraphKind::erdos_renyi, 10, 0.5, 7);
  const Graph c = make_graph(GraphKind::erdos_renyi, 10, 0.5, 8);
  CHECK(a.connected());
  CHECK(a.edges == b.edges);
  CHECK(a.edges != c.edges);
  CHECK_THROWS_AS(make_graph(GraphKind::erdos_renyi, 10, 0.0, 1),
                  ConfigError);
}

TEST_CASE("laplacian of path(2) is [[1,-1],[-1,1]]") {
  const Matrix L = laplacian(make_graph(GraphKind::path, 2));
  CHECK(L(0, 0) == 1.0);
  CHECK(L(0, 1) == -1.0);
  CHECK(L(1, 0) == -1.0);
  CHECK(L(1, 1) == 1.0);
}

TEST_CASE("laplacian of complete(3) has 2 on the diagonal, -1 off it") {
  const Matrix L = laplacian(make_graph(GraphKind::complete, 3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(L(i, j) == (i == j ? 2.0 : -1.0));
}

TEST_CASE("laplacian row sums vanish exactly on random graphs") {
  const Graph g = make_graph(GraphKind::erdos_renyi, 24, 0.3, 5);
  const Matrix L = laplacian(g);
  for (std::size_t i = 0; i < 24; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 24; ++j) s += L(i, j);
    CHECK(s == 0.0);
  }
}

TEST_CASE("chi matches hand eigendecompositions") {
  CHECK(chi(make_graph(GraphKind::complete, 5)) == doctest::Approx(1.0));
  // star(4): spectrum {0,1,1,4}
  CHECK(chi(make_graph(GraphKind::star, 4)) == doctest::Approx(4.0));
  // ring(4): spectrum {0,2,2,4}
  CHECK(chi(make_graph(GraphKind::ring, 4)) == doctest::Approx(2.0));
  // ring eigenvalues are 2(1 - cos(2 pi k / m))
  const double chi8 = chi(make_graph(GraphKind::ring, 8));
  const double expected =
      (2.0 - 2.0 * std::cos(2.0 * M_PI * 4.0 / 8.0)) /
      (2.0 - 2.0 * std::cos(2.0 * M_PI / 8.0));
  CHECK(chi8 == doctest::Approx(expected));
}

TEST_CASE("chi(star(m)) = m and chi(ring(m)) grows with m") {
  for (std::size_t m : {4u, 8u, 16u})
    CHECK(chi(make_graph(GraphKind::star, m)) == doctest::Approx(double(m)));
  double prev = 0.0;
  for (std::size_t m : {8u, 16u, 32u, 64u}) {
    const double c = chi(make_graph(GraphKind::ring, m));
    CHECK(c > prev);
    prev = c;
  }
}

TEST_CASE("disconnected graphs are rejected by chi") {
  Graph g;
  g.m = 4;
  g.edges = {{0, 1}, {2, 3}};
  CHECK_THROWS_AS(chi(g), TopologyError);
}

TEST_CASE("gossip matrix of path(2) is the half-half averaging matrix") {
  const GossipMatrix w = gossip_matrix(make_graph(GraphKind::path, 2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(w.W(i, j) == doctest::Approx(0.5));
}

TEST_CASE("gossip matrix of complete(3) is the uniform averaging matrix") {
  const GossipMatrix w = gossip_matrix(make_graph(GraphKind::complete, 3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(w.W(i, j) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("gossip matrices are symmetric doubly stochastic with gap 1/chi") {
  const Graph g = make_graph(GraphKind::erdos_renyi, 20, 0.4, 3);
  const GossipMatrix w = gossip_matrix(g);
  for (std::size_t i = 0; i < 20; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < 20; ++j) {
      row += w.W(i, j);
      col += w.W(j, i);
      CHECK(w.W(i, j) == doctest::Approx(w.W(j, i)).epsilon(1e-12));
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(col == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(1.0 - w.lambda2_w() == doctest::Approx(1.0 / chi(g)).epsilon(1e-9));
}

TEST_CASE("gossip matrix fixes constant vectors") {
  const GossipMatrix w = gossip_matrix(make_graph(GraphKind::ring, 7));
  Matrix X(7, 1, 3.25);
  Matrix Y(7, 1);
  kernels::mat_mat(w.W, X, Y);
  for (std::size_t i = 0; i < 7; ++i)
    CHECK(Y(i, 0) == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("static schedules return the same matrix at every round") {
  const TopologySchedule s =
      TopologySchedule::fixed(make_graph(GraphKind::ring, 6));
  CHECK(s.is_static());
  CHECK(&s.at(0) == &s.at(1000));
  CHECK(s.chi() == doctest::Approx(chi(make_graph(GraphKind::ring, 6))));
}

TEST_CASE("periodic schedules cycle through their list") {
  const Graph ring = make_graph(GraphKind::ring, 5);
  const Graph star = make_graph(GraphKind::star, 5);
  const TopologySchedule s = TopologySchedule::periodic({ring, star});
  CHECK_FALSE(s.is_static());
  // period 2: t = 3 is the star
  CHECK(s.at(3).W == gossip_matrix(star).W);
  CHECK(s.at(2).W == gossip_matrix(ring).W);
}

TEST_CASE("random-pool schedules are reproducible and connected") {
  const TopologySchedule a = TopologySchedule::random_pool(8, 0.5, 42);
  const TopologySchedule b = TopologySchedule::random_pool(8, 0.5, 42);
  for (std::int64_t t = 0; t < 20; ++t) CHECK(a.at(t).W == b.at(t).W);
  CHECK(a.chi() >= 1.0);
}
