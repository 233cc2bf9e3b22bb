#include <cmath>
#include <memory>

#include "doctest.h"

#include "decopt/objectives.hpp"
#include "decopt/problems.hpp"

using namespace decopt;

namespace {

ComponentPtr quad(const Matrix& A, const Vec& b, double c = 0.0) {
  return std::make_shared<QuadraticComponent>(A, b, c);
}

Matrix scalar_matrix(double a) {
  Matrix m(1, 1);
  m(0, 0) = a;
  return m;
}

Problem two_node_problem() {
  // f1(x) = x^2/2, f2(x) = x^2 (A = 2).
  std::vector<ComponentPtr> comps{quad(scalar_matrix(1.0), {0.0}),
                                  quad(scalar_matrix(2.0), {0.0})};
  return Problem(2, 1, 1, comps);
}

}  // namespace

TEST_CASE("full gradient of half squared norm is the identity map") {
  std::vector<ComponentPtr> comps{quad(Matrix::identity(2), {0.0, 0.0})};
  Problem prob(1, 1, 2, comps);
  const Vec g = prob.full_gradient(0, {1.0, 2.0});
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 2.0);
}

TEST_CASE("global gradient averages node gradients: (1+2)/2") {
  Problem prob = two_node_problem();
  const Vec g = prob.full_gradient({1.0});
  CHECK(g[0] == doctest::Approx(1.5).epsilon(1e-15));
  // one full call per node
  CHECK(prob.counters(0).full == 1);
  CHECK(prob.counters(1).full == 1);
}

TEST_CASE("central finite differences match gradients on random quadratics") {
  Problem prob = make_random_quadratic(3, 2, 8, 5.0, 0.5, 11);
  RngStream rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    Vec x(8), e(8, 0.0);
    for (double& v : x) v = rng.normal();
    const std::size_t i = rng.uniform_int(8);
    e[i] = 1.0;
    const double h = 1e-5;
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd =
        (prob.exact_value(xp) - prob.exact_value(xm)) / (2.0 * h);
    const Vec g = prob.full_gradient(x);
    CHECK(std::abs(fd - g[i]) <=
          1e-6 * std::max(1.0, std::abs(g[i])));
  }
}

TEST_CASE("finite differences match the logistic gradient within rel 1e-6") {
  Problem prob = make_logistic(2, 2, 5, 16, 21);
  RngStream rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    Vec x(5);
    for (double& v : x) v = 0.5 * rng.normal();
    const std::size_t i = rng.uniform_int(5);
    const double h = 1e-5;
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd =
        (prob.exact_value(xp) - prob.exact_value(xm)) / (2.0 * h);
    const Vec g = prob.full_gradient(x);
    CHECK(std::abs(fd - g[i]) <= 1e-6 * std::max(1.0, std::abs(g[i])));
  }
}

TEST_CASE("zero-variance stochastic gradient equals the full gradient") {
  NoiseSpec noise;
  noise.model = NoiseModel::gaussian;
  noise.sigma2 = 0.0;
  std::vector<ComponentPtr> comps{quad(Matrix::identity(2), {1.0, -1.0})};
  Problem prob(1, 1, 2, comps, noise);
  RngStream rng(4);
  const Vec gs = prob.stochastic_gradient(0, {0.5, 2.0}, rng);
  const Vec gf = prob.full_gradient(0, {0.5, 2.0});
  CHECK(gs[0] == gf[0]);
  CHECK(gs[1] == gf[1]);
}

TEST_CASE("subsampling picks each component with probability 1/r") {
  NoiseSpec noise;
  noise.model = NoiseModel::subsample;
  std::vector<ComponentPtr> comps{quad(scalar_matrix(1.0), {0.0}),
                                  quad(scalar_matrix(2.0), {0.0})};
  Problem prob(1, 2, 1, comps, noise);
  RngStream rng(17);
  const Vec x{1.0};
  int first = 0;
  const int draws = 100000;
  double mean = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Vec g = prob.stochastic_gradient(0, x, rng);
    const bool is_first = g[0] == 1.0;
    const bool is_second = g[0] == 2.0;
    REQUIRE((is_first || is_second));
    first += is_first ? 1 : 0;
    mean += g[0];
  }
  mean /= draws;
  // node gradient is 1.5; se of the mean is 0.5/sqrt(draws)
  CHECK(std::abs(mean - 1.5) < 3.0 * 0.5 / std::sqrt(double(draws)));
  CHECK(std::abs(first - draws / 2) < 1000);
}

TEST_CASE("gaussian model hits the declared variance within 2%") {
  NoiseSpec noise;
  noise.model = NoiseModel::gaussian;
  noise.sigma2 = 4.0;
  std::vector<ComponentPtr> comps{quad(Matrix::identity(4), Vec(4, 0.0))};
  Problem prob(1, 1, 4, comps, noise);
  RngStream rng(23);
  const Vec x(4, 0.0);
  double sq = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Vec g = prob.stochastic_gradient(0, x, rng);
    sq += dot(g, g);  // true gradient is 0
  }
  sq /= draws;
  CHECK(sq == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("batch gradient reduces variance by the batch size") {
  NoiseSpec noise;
  noise.model = NoiseModel::gaussian;
  noise.sigma2 = 1.0;
  std::vector<ComponentPtr> comps{quad(Matrix::identity(3), Vec(3, 0.0))};
  Problem prob(1, 1, 3, comps, noise);
  RngStream rng(31);
  const Vec x(3, 0.0);
  double sq = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Vec g = prob.batch_gradient(0, x, 100, rng);
    sq += dot(g, g);
  }
  sq /= draws;
  CHECK(sq == doctest::Approx(0.01).epsilon(0.05));
  CHECK(prob.counters(0).stoch == 100 * draws);
}

TEST_CASE("batch of size zero is rejected") {
  std::vector<ComponentPtr> comps{quad(scalar_matrix(1.0), {0.0})};
  Problem prob(1, 1, 1, comps);
  RngStream rng(1);
  CHECK_THROWS_AS(prob.batch_gradient(0, {1.0}, 0, rng), ConfigError);
}

TEST_CASE("component gradients average to the node gradient") {
  Problem prob = make_random_quadratic(2, 4, 6, 3.0, 0.3, 77);
  RngStream rng(5);
  Vec x(6);
  for (double& v : x) v = rng.normal();
  for (std::size_t k = 0; k < 2; ++k) {
    Vec avg(6, 0.0);
    for (std::size_t j = 0; j < 4; ++j)
      axpy(0.25, prob.component_gradient(k, j, x), avg);
    const Vec g = prob.full_gradient(k, x);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(std::abs(avg[i] - g[i]) < 1e-12);
  }
}

TEST_CASE("component gradient with A = jI at x = (1,0) returns (j,0)") {
  std::vector<ComponentPtr> comps;
  for (double j = 1; j <= 3; ++j) {
    Matrix A = Matrix::identity(2);
    A(0, 0) = j;
    A(1, 1) = j;
    comps.push_back(quad(A, {0.0, 0.0}));
  }
  Problem prob(1, 3, 2, comps);
  for (std::size_t j = 0; j < 3; ++j) {
    const Vec g = prob.component_gradient(0, j, {1.0, 0.0});
    CHECK(g[0] == double(j + 1));
    CHECK(g[1] == 0.0);
  }
  CHECK_THROWS_AS(prob.component_gradient(0, 3, {1.0, 0.0}), ConfigError);
}

TEST_CASE("function value of half squared norm at (3,4) is 12.5") {
  std::vector<ComponentPtr> comps{quad(Matrix::identity(2), {0.0, 0.0})};
  Problem prob(1, 1, 2, comps);
  CHECK(prob.function_value(0, {3.0, 4.0}) == 12.5);
  CHECK(prob.counters(0).value == 1);
}

TEST_CASE("global value is the mean of node values") {
  Problem prob = make_random_quadratic(3, 2, 4, 2.0, 0.2, 9);
  const Vec x{0.1, -0.2, 0.3, 0.4};
  double mean = 0.0;
  for (std::size_t k = 0; k < 3; ++k) mean += prob.exact_node_value(k, x) / 3.0;
  CHECK(std::abs(prob.exact_value(x) - mean) < 1e-12);
}

TEST_CASE("noisy values are deterministic when the noise scale is zero") {
  NoiseSpec noise;
  noise.model = NoiseModel::gaussian;
  noise.sigma2 = 1.0;
  noise.value_sigma = 0.0;
  std::vector<ComponentPtr> comps{quad(Matrix::identity(1), {0.0})};
  Problem prob(1, 1, 1, comps, noise);
  RngStream rng(2);
  CHECK(prob.function_value(0, {2.0}, &rng) == 2.0);
}

TEST_CASE("regularizing the zero objective gives the squared norm") {
  Matrix zero(1, 1);
  std::vector<ComponentPtr> comps{quad(zero, {0.0})};
  Problem prob(1, 1, 1, comps);
  // eps = 2, R = 1: adds (2/2)||x||^2 = x^2, mu becomes 2/1 = 2.
  Problem reg = prob.regularized({0.0}, 2.0, 1.0);
  CHECK(reg.exact_value({3.0}) == doctest::Approx(9.0));
  CHECK(reg.profile().mu == doctest::Approx(2.0));
}

TEST_CASE("regularization shifts (L, mu) by eps/R^2") {
  Problem prob = make_random_quadratic(2, 2, 5, 10.0, 0.0, 13);
  Problem reg = prob.regularized(Vec(5, 0.0), 1.0, 1.0);
  CHECK(reg.profile().L == doctest::Approx(11.0).epsilon(1e-9));
  CHECK(reg.profile().mu == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(prob.regularized(Vec(5, 0.0), -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(prob.regularized(Vec(5, 0.0), 1.0, 0.0), ConfigError);
}

TEST_CASE("eps/2-solutions of the regularized problem are eps-solutions") {
  // 1-D convex quadratic with mu = 0 beyond a flat direction is served by
  // f(x) = (x-3)^2/2 (mu > 0 case also covered by the closed forms).
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    Matrix A = scalar_matrix(1.0);
    std::vector<ComponentPtr> comps{quad(A, {3.0})};
    Problem prob(1, 1, 1, comps);
    prob.set_start({0.0});
    const double R = prob.profile().R;
    Problem reg = prob.regularized({0.0}, eps, R);
    REQUIRE(reg.has_optimum());
    // the exact minimizer of the regularized problem is an eps/2-solution
    // of the regularized problem; check it is an eps-solution of the
    // original
    const Vec xr = reg.x_star();
    CHECK(prob.exact_value(xr) - prob.f_star() <= eps);
  }
}

TEST_CASE("quadratic closed forms match the normal equations") {
  Problem prob = make_random_quadratic(4, 3, 7, 8.0, 0.4, 99);
  REQUIRE(prob.has_optimum());
  const Vec g = prob.full_gradient(prob.x_star());
  CHECK(norm2(g) < 1e-8);
  CHECK(prob.suboptimality(prob.x_star()) < 1e-10);
  const Vec zero(7, 0.0);
  CHECK(prob.suboptimality(zero) >= 0.0);
}

TEST_CASE("profile invariants hold for generated problems") {
  Problem prob = make_random_quadratic(3, 2, 6, 4.0, 0.25, 55);
  const SmoothnessProfile& p = prob.profile();
  CHECK(p.L >= p.mu);
  CHECK(p.mu >= 0.0);
  CHECK(p.R > 0.0);
  CHECK(p.delta_f >= 0.0);
  CHECK(p.delta_f <= p.L * p.R * p.R / 2.0 + 1e-9);
  CHECK(p.mu == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("asymmetric or indefinite quadratics are rejected") {
  Matrix A(2, 2);
  A(0, 0) = 1.0;
  A(0, 1) = 0.5;
  A(1, 0) = -0.5;
  A(1, 1) = 1.0;
  CHECK_THROWS_AS(QuadraticComponent(A, {0.0, 0.0}), ConfigError);
  Matrix N = Matrix::identity(2);
  N(1, 1) = -1.0;
  CHECK_THROWS_AS(QuadraticComponent(N, {0.0, 0.0}), ConfigError);
}

TEST_CASE("dimension mismatches raise configuration errors") {
  std::vector<ComponentPtr> comps{quad(Matrix::identity(2), {0.0, 0.0})};
  Problem prob(1, 1, 2, comps);
  CHECK_THROWS_AS(prob.full_gradient(0, {1.0}), ConfigError);
}

TEST_CASE("counters reconcile: every oracle path is audited") {
  NoiseSpec noise;
  noise.model = NoiseModel::gaussian;
  noise.sigma2 = 1.0;
  Problem prob = make_random_quadratic(2, 3, 4, 2.0, 0.5, 3, noise);
  RngStream rng(6);
  const Vec x(4, 0.1);
  prob.full_gradient(0, x);
  prob.full_gradient(x);  // one per node
  prob.stochastic_gradient(1, x, rng);
  prob.batch_gradient(0, x, 5, rng);
  prob.component_gradient(1, 2, x);
  prob.function_value(0, x);
  prob.suboptimality(x);  // instrumentation: not counted
  const OracleCounters t = prob.totals();
  CHECK(t.full == 3);
  CHECK(t.stoch == 6);
  CHECK(t.comp == 1);
  CHECK(t.value == 1);
  prob.reset_counters();
  CHECK(prob.totals().full == 0);
}

TEST_CASE("required sample size evaluates the two-term minimum") {
  SmoothnessProfile p;
  p.M = 1.0;
  p.R = 1.0;
  p.mu = 0.0;
  CHECK(required_sample_size(p, 0.01) == 10000);
  p.mu = 1.0;
  CHECK(required_sample_size(p, 0.01) == 100);
  CHECK(required_sample_size(p, 10.0) == 1);  // clamp to >= 1
  CHECK_THROWS_AS(required_sample_size(p, 0.0), ConfigError);
}

TEST_CASE("inner accuracy follows max(mu, eps/R^2) eps^2/M^2") {
  SmoothnessProfile p;
  p.M = 1.0;
  p.R = 1.0;
  p.mu = 0.0;
  CHECK(inner_accuracy(p, 0.1) == doctest::Approx(1e-3));
  p.mu = 1.0;
  CHECK(inner_accuracy(p, 0.1) == doctest::Approx(1e-2));
  p.M = 100.0;
  CHECK(inner_accuracy(p, 0.1) < 1e-2);  // monotone decrease in M
}

TEST_CASE("batch parallel width matches hand evaluation") {
  SmoothnessProfile p;
  p.sigma2 = 1.0;
  p.R = 1.0;
  p.L = 1.0;
  p.mu = 0.0;
  CHECK(batch_parallel_width(p, 0.01, ConvexityRegime::convex) == 1000);
  p.sigma2 = 0.0;
  CHECK(batch_parallel_width(p, 0.01, ConvexityRegime::convex) == 1);
  p.sigma2 = 1.0;
  p.mu = 1.0;
  // degenerate log is clamped to 1: width = (1/(mu eps)) / sqrt(L/mu)
  const double eps = std::exp(-1.0);
  CHECK(batch_parallel_width(p, eps, ConvexityRegime::strongly_convex) >= 1);
}
