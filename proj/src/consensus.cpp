#include "decopt/consensus.hpp"

#include <cmath>

namespace decopt {

double consensus_error(const Matrix& X) {
  const Vec mean = column_means(X);
  double worst = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double s = 0.0;
    const double* xi = X.row(i);
    for (std::size_t j = 0; j < X.cols(); ++j) {
      const double d = xi[j] - mean[j];
      s += d * d;
    }
    worst = std::max(worst, s);
  }
  return std::sqrt(worst);
}

Matrix gossip_round(const GossipMatrix& w, const Matrix& X) {
  if (w.W.cols() != X.rows())
    throw ConfigError("gossip_round: row count does not match topology");
  Matrix out;
  kernels::mat_mat(w.W, X, out);
  return out;
}

ConsensusResult plain_consensus(const TopologySchedule& schedule, Matrix X,
                                double tol, std::int64_t max_rounds) {
  if (!(tol > 0.0 && tol < 1.0))
    throw ConfigError("plain_consensus: tol must lie in (0, 1)");
  const double err0 = consensus_error(X);
  ConsensusResult res{std::move(X), 0, true};
  if (err0 == 0.0) return res;
  while (consensus_error(res.X) > tol * err0) {
    if (res.rounds >= max_rounds) {
      res.converged = false;
      return res;
    }
    res.X = gossip_round(schedule.at(res.rounds), res.X);
    ++res.rounds;
  }
  return res;
}

Matrix chebyshev_consensus(const GossipMatrix& w, const Matrix& X,
                           std::int64_t rounds) {
  if (w.W.cols() != X.rows())
    throw ConfigError("chebyshev_consensus: row count mismatch");
  if (rounds <= 0) return X;

  const double b = w.lambda2_w();  // non-consensus spectrum is [0, b]
  if (b <= 1e-12) {
    // One multiplication already averages exactly (complete graph).
    Matrix out = X;
    for (std::int64_t t = 0; t < rounds; ++t) out = gossip_round(w, out);
    return out;
  }

  // Affine map s(x) = (2x - b)/b sends [0, b] to [-1, 1]; s(1) > 1.
  const double s1 = (2.0 - b) / b;
  auto apply_s = [&](const Matrix& Y) {
    Matrix wy = gossip_round(w, Y);
    for (std::size_t i = 0; i < wy.rows() * wy.cols(); ++i)
      wy.data()[i] = (2.0 * wy.data()[i] - Y.data()[i] * b) / b;
    return wy;
  };

  // Three-term recurrence for C_t(s(W)) X alongside the scalars C_t(s(1)).
  Matrix y_prev = X;
  Matrix y_cur = apply_s(X);
  double c_prev = 1.0, c_cur = s1;
  for (std::int64_t t = 1; t < rounds; ++t) {
    Matrix y_next = apply_s(y_cur);
    for (std::size_t i = 0; i < y_next.rows() * y_next.cols(); ++i)
      y_next.data()[i] = 2.0 * y_next.data()[i] - y_prev.data()[i];
    y_prev = std::move(y_cur);
    y_cur = std::move(y_next);
    const double c_next = 2.0 * s1 * c_cur - c_prev;
    c_prev = c_cur;
    c_cur = c_next;
  }
  for (std::size_t i = 0; i < y_cur.rows() * y_cur.cols(); ++i)
    y_cur.data()[i] /= c_cur;
  return y_cur;
}

std::int64_t consensus_depth(double chi, double delta) {
  if (chi < 1.0 || delta <= 0.0)
    throw ConfigError("consensus_depth: need chi >= 1, delta > 0");
  const double t = std::sqrt(chi) * std::log(std::max(chi, 10.0) / delta);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t)));
}

}  // namespace decopt
