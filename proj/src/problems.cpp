#include "decopt/problems.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace decopt {

Matrix random_spd(std::size_t dim, double L, double mu, RngStream& rng) {
  if (L <= 0.0 || mu < 0.0 || mu > L) throw ConfigError("random_spd: need 0 <= mu <= L");
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd lam(n);
  if (dim == 1) {
    lam(0) = L;
  } else if (mu > 0.0) {
    // log-spaced in [mu, L]
    const double lo = std::log(mu), hi = std::log(L);
    for (Eigen::Index i = 0; i < n; ++i)
      lam(i) = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
  } else {
    lam(0) = 0.0;
    for (Eigen::Index i = 1; i < n; ++i)
      lam(i) = L * std::pow(100.0, static_cast<double>(i - (n - 1)) /
                                       std::max<double>(1.0, n - 2));
    lam(n - 1) = L;
  }
  Eigen::MatrixXd h = q * lam.asDiagonal() * q.transpose();
  h = 0.5 * (h + h.transpose());  // restore exact symmetry
  Matrix out(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out(i, j) = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

namespace {

Vec random_unit(std::size_t dim, RngStream& rng) {
  Vec v(dim);
  for (double& x : v) x = rng.normal();
  const double nrm = norm2(v);
  for (double& x : v) x /= nrm;
  return v;
}

Vec matvec(const Matrix& a, const Vec& x) {
  Vec y;
  kernels::mat_vec_serial(a, x, y);
  return y;
}

}  // namespace

Problem make_random_quadratic(std::size_t nodes, std::size_t comps_per_node,
                              std::size_t dim, double L, double mu,
                              std::uint64_t seed, NoiseSpec noise) {
  RngStream rng(seed, 0, 0x71ad);
  const Matrix h = random_spd(dim, L, mu, rng);
  const Vec x_true = random_unit(dim, rng);
  const Vec hx = matvec(h, x_true);

  // Components come in +/- pairs so that Hessians and linear terms
  // average exactly to (h, h x_true); an odd trailing component is the
  // unperturbed quadratic.
  const std::size_t count = nodes * comps_per_node;
  const double gamma = count > 1 ? 0.3 : 0.0;
  std::vector<ComponentPtr> comps(count);
  for (std::size_t i = 0; i + 1 < count; i += 2) {
    Vec d = random_unit(dim, rng);
    scale(0.5 * L, d);
    for (int sign : {+1, -1}) {
      const double f = 1.0 + sign * gamma;
      Matrix a(dim, dim);
      for (std::size_t p = 0; p < dim * dim; ++p)
        a.data()[p] = f * h.data()[p];
      Vec b = matvec(a, x_true);
      axpy(static_cast<double>(sign), d, b);
      comps[i + (sign > 0 ? 0 : 1)] =
          std::make_shared<QuadraticComponent>(std::move(a), std::move(b));
    }
  }
  if (count % 2 == 1)
    comps[count - 1] = std::make_shared<QuadraticComponent>(h, hx);
  Problem p(nodes, comps_per_node, dim, std::move(comps), noise);
  p.set_start(Vec(dim, 0.0));
  return p;
}

Problem make_identical_quadratic(std::size_t nodes, std::size_t dim, double L,
                                 double mu, std::uint64_t seed,
                                 NoiseSpec noise) {
  RngStream rng(seed, 0, 0x5ca1e);
  const Matrix h = random_spd(dim, L, mu, rng);
  const Vec x_true = random_unit(dim, rng);
  auto comp = std::make_shared<QuadraticComponent>(h, matvec(h, x_true));
  std::vector<ComponentPtr> comps(nodes, comp);
  Problem p(nodes, 1, dim, std::move(comps), noise);
  p.set_start(Vec(dim, 0.0));
  return p;
}

Problem make_diagonal_quadratic(const Vec& diag, const Vec& b,
                                NoiseSpec noise) {
  const std::size_t n = diag.size();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = diag[i];
  std::vector<ComponentPtr> comps{
      std::make_shared<QuadraticComponent>(std::move(a), b)};
  Problem p(1, 1, n, std::move(comps), noise);
  p.set_start(Vec(n, 0.0));
  return p;
}

Problem make_logistic(std::size_t nodes, std::size_t comps_per_node,
                      std::size_t dim, std::size_t samples_per_component,
                      std::uint64_t seed, NoiseSpec noise) {
  RngStream wrng(seed, 0, 0x109);
  const Vec w_star = random_unit(dim, wrng);
  std::vector<ComponentPtr> comps;
  comps.reserve(nodes * comps_per_node);
  for (std::size_t k = 0; k < nodes; ++k)
    for (std::size_t j = 0; j < comps_per_node; ++j) {
      RngStream rng(seed, k, j);
      Matrix x(samples_per_component, dim);
      std::vector<int> y(samples_per_component);
      for (std::size_t s = 0; s < samples_per_component; ++s) {
        double z = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
          x(s, c) = rng.normal();
          z += x(s, c) * w_star[c];
        }
        y[s] = (z + 0.1 * rng.normal()) >= 0.0 ? 1 : -1;
      }
      comps.push_back(
          std::make_shared<LogisticComponent>(std::move(x), std::move(y)));
    }
  return Problem(nodes, comps_per_node, dim, std::move(comps), noise);
}

}  // namespace decopt
