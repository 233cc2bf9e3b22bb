#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "decopt/compressors.hpp"

using namespace decopt;

namespace {

double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Exact E||Q(z)-z||^2 for rand_k by enumerating all k-subsets of {0..n-1}.
double randk_enumerated_variance(const Vec& z, std::size_t k, bool scaled) {
  const std::size_t n = z.size();
  std::vector<bool> mask(n, false);
  std::fill(mask.end() - std::ptrdiff_t(k), mask.end(), true);
  double total = 0.0;
  std::size_t count = 0;
  do {
    Vec q(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) q[i] = scaled ? z[i] * double(n) / double(k) : z[i];
    total += sq_dist(q, z);
    ++count;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return total / double(count);
}

}  // namespace

TEST_CASE("top_k keeps the largest magnitudes: (3,-1,2), k=2 -> (3,0,2)") {
  const Vec q = top_k({3.0, -1.0, 2.0}, 2);
  CHECK(q == Vec{3.0, 0.0, 2.0});
  const Vec z{3.0, -1.0, 2.0};
  CHECK(sq_dist(q, z) == doctest::Approx(1.0));
  CHECK(sq_dist(q, z) <= (1.0 - 2.0 / 3.0) * dot(z, z));
}

TEST_CASE("top_k with k = n is the identity; k > n is an error") {
  const Vec z{1.0, -2.0, 0.5};
  CHECK(top_k(z, 3) == z);
  CHECK_THROWS_AS(top_k(z, 4), ConfigError);
}

TEST_CASE("top_k ties break toward the lowest index") {
  CHECK(top_k({1.0, -1.0, 0.0}, 1) == Vec{1.0, 0.0, 0.0});
}

TEST_CASE("top_k contraction holds for 10^4 random vectors") {
  RngStream rng(13);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t n = 2 + rng.uniform_int(255);
    const std::size_t k = 1 + rng.uniform_int(n);
    Vec z(n);
    for (double& v : z) v = rng.normal();
    const Vec q = top_k(z, k);
    const double zz = dot(z, z);
    CHECK(sq_dist(q, z) <= (1.0 - double(k) / double(n)) * zz + 1e-12 * zz);
    CHECK(dot(q, q) <= zz * (1.0 + 1e-12));  // norm never grows
  }
}

TEST_CASE("rand_k scaled on (1,1), k=1 gives (2,0) or (0,2) equally") {
  RngStream rng(3);
  const Vec z{1.0, 1.0};
  int first = 0;
  const int draws = 100000;
  Vec mean(2, 0.0);
  double var = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Vec q = rand_k(z, 1, rng, true);
    const bool a = q == Vec{2.0, 0.0};
    const bool b = q == Vec{0.0, 2.0};
    REQUIRE((a || b));
    first += a ? 1 : 0;
    axpy(1.0 / draws, q, mean);
    var += sq_dist(q, z) / draws;
  }
  CHECK(std::abs(first - draws / 2) < 1000);
  CHECK(mean[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(mean[1] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(var == doctest::Approx(2.0).epsilon(0.02));  // (n/k - 1) ||z||^2
}

TEST_CASE("rand_k unscaled on (1,1), k=1 has variance (1 - k/n)||z||^2") {
  RngStream rng(4);
  const Vec z{1.0, 1.0};
  double var = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    var += sq_dist(rand_k(z, 1, rng, false), z) / draws;
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rand_k with k = n is exact in either mode") {
  RngStream rng(5);
  const Vec z{0.5, -1.5, 2.5};
  CHECK(rand_k(z, 3, rng, true) == z);
  CHECK(rand_k(z, 3, rng, false) == z);
  CHECK_THROWS_AS(rand_k(z, 4, rng, true), ConfigError);
}

TEST_CASE("rand_k variance identities hold exactly by enumeration, n <= 6") {
  RngStream rng(6);
  for (std::size_t n = 2; n <= 6; ++n) {
    Vec z(n);
    for (double& v : z) v = rng.normal();
    const double zz = dot(z, z);
    for (std::size_t k = 1; k <= n; ++k) {
      CHECK(randk_enumerated_variance(z, k, true) ==
            doctest::Approx((double(n) / double(k) - 1.0) * zz)
                .epsilon(1e-12));
      CHECK(randk_enumerated_variance(z, k, false) ==
            doctest::Approx((1.0 - double(k) / double(n)) * zz)
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("rand_k scaled variance matches within 2% by MC at n = 64") {
  RngStream rng(7);
  Vec z(64);
  for (double& v : z) v = rng.normal();
  const double zz = dot(z, z);
  const std::size_t k = 16;
  double var = 0.0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i)
    var += sq_dist(rand_k(z, k, rng, true), z) / draws;
  CHECK(var == doctest::Approx((64.0 / 16.0 - 1.0) * zz).epsilon(0.02));
}

TEST_CASE("rand_k scaled output norm can exceed the input norm") {
  // regression guard: the unbiased operator is NOT contractive
  RngStream rng(8);
  const Vec z{1.0, 1.0, 1.0, 1.0};
  bool exceeded = false;
  for (int i = 0; i < 100; ++i) {
    const Vec q = rand_k(z, 1, rng, true);
    exceeded = exceeded || dot(q, q) > dot(z, z);
  }
  CHECK(exceeded);
}

TEST_CASE("simplex vertex: a point mass is returned verbatim") {
  RngStream rng(9);
  const Vec p{0.0, 1.0, 0.0};
  for (int i = 0; i < 10; ++i) CHECK(simplex_vertex(p, rng) == p);
}

TEST_CASE("simplex vertex frequencies match the probabilities") {
  RngStream rng(10);
  const Vec p{0.3, 0.7};
  int first = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    std::size_t idx = 0;
    simplex_vertex(p, rng, &idx);
    first += idx == 0 ? 1 : 0;
  }
  CHECK(double(first) / draws == doctest::Approx(0.3).epsilon(0.017));
}

TEST_CASE("simplex vertex variance is 1 - ||p||^2") {
  RngStream rng(11);
  const Vec p{0.2, 0.3, 0.5};
  double var = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    var += sq_dist(simplex_vertex(p, rng), p) / draws;
  CHECK(var == doctest::Approx(1.0 - dot(p, p)).epsilon(0.02));
  CHECK_THROWS_AS(simplex_vertex({0.5, -0.5, 1.0}, rng), ConfigError);
}

TEST_CASE("message costs: identity n, topk/randk 2k, simplex 1") {
  Compressor id{CompressorKind::identity, 0};
  Compressor tk{CompressorKind::topk, 3};
  Compressor rk{CompressorKind::randk_scaled, 4};
  Compressor sx{CompressorKind::simplex_vertex, 0};
  CHECK(id.message_cost(10) == 10);
  CHECK(tk.message_cost(10) == 6);
  CHECK(rk.message_cost(10) == 8);
  CHECK(sx.message_cost(10) == 1);
  CHECK(id.q(10) == doctest::Approx(1.0));
  CHECK(tk.q(10) == doctest::Approx(0.3));
  CHECK(id.unbiased());
  CHECK_FALSE(tk.unbiased());
  CHECK(rk.unbiased());
}
