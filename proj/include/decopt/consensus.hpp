#ifndef DECOPT_CONSENSUS_HPP
#define DECOPT_CONSENSUS_HPP

#include <cstdint>

#include "decopt/topology.hpp"

namespace decopt {

// max_k ||x_k - mean row||_2 over the rows of X.
double consensus_error(const Matrix& X);

// One communication round: X' = W X.
Matrix gossip_round(const GossipMatrix& w, const Matrix& X);

struct ConsensusResult {
  Matrix X;
  std::int64_t rounds = 0;
  bool converged = true;  // false: round budget exhausted, X is partial state
};

// Repeats gossip rounds until consensus_error drops below
// tol * consensus_error(X0). tol in (0, 1).
ConsensusResult plain_consensus(const TopologySchedule& schedule, Matrix X,
                                double tol,
                                std::int64_t max_rounds = 1'000'000);

// Chebyshev-filtered consensus: X' = p_T(W) X with p_T the degree-T
// Chebyshev polynomial rescaled to the non-consensus spectrum
// [0, lambda2(W)] and normalized so p_T(1) = 1. Costs exactly T
// communication rounds; requires a static topology.
Matrix chebyshev_consensus(const GossipMatrix& w, const Matrix& X,
                           std::int64_t rounds);

// Consensus depth used inside optimizers: ceil(sqrt(chi) *
// ln(max(chi, 10)/delta)), delta = inner tolerance.
std::int64_t consensus_depth(double chi, double delta);

}  // namespace decopt

#endif
