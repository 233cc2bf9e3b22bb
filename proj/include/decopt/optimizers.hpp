#ifndef DECOPT_OPTIMIZERS_HPP
#define DECOPT_OPTIMIZERS_HPP

#include <cstdint>
#include <functional>
#include <limits>

#include "decopt/compressors.hpp"
#include "decopt/consensus.hpp"
#include "decopt/objectives.hpp"
#include "decopt/trace.hpp"

namespace decopt {

struct StepSchedule {
  enum class Kind { constant, inverse_mu, fixed_horizon };
  Kind kind = Kind::constant;
  double h = 0.0;   // constant step
  double mu = 0.0;  // inverse_mu: h_k = 1/(mu (k+1))

  static StepSchedule constant(double h);
  static StepSchedule inverse_mu(double mu);
  // h = min{1/L, R/(M sqrt(N))} with N the granted iteration budget.
  static StepSchedule fixed_horizon();

  double step(std::int64_t k, const SmoothnessProfile& p,
              std::int64_t horizon) const;
};

struct RunBudget {
  std::int64_t max_rounds = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_oracle_calls = std::numeric_limits<std::int64_t>::max();
  double target_eps = 0.0;  // 0: no target

  void validate() const;  // at least one bound must be finite
};

// --- centralized methods ---

// x^{k+1} = x^k - h_k grad f(x^k, xi^k); one stochastic call per node per
// iteration, node results averaged. Reports the suffix-averaged iterate
// in the convex regime and the last iterate under strong convexity.
RunTrace sgd(const Problem& prob, const Vec& x0, const StepSchedule& sched,
             const RunBudget& budget, std::uint64_t seed);

// Nesterov-type method of similar triangles with the standard
// mu-coupling; deterministic certificate f(x_N) - f* <= 4 L R^2/(N+1)^2.
// batch = 0 runs on exact gradients; batch >= 1 averages that many
// stochastic gradients per node per iteration.
RunTrace accelerated_gradient(const Problem& prob, const Vec& x0,
                              const RunBudget& budget, std::uint64_t seed = 0,
                              std::int64_t batch = 0);

// Accelerated loopless variance reduction over the m*r components
// (anchor refresh probability 1/#components). Requires mu > 0.
RunTrace variance_reduced(const Problem& prob, const Vec& x0,
                          const RunBudget& budget, std::uint64_t seed);

// --- gradient sliding (composite min f + g) ---

struct SmoothPart {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  double L = 0.0;
};

struct NonsmoothPart {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> subgrad;  // unused by the gradient-free path
  double M = 0.0;
};

// Lan's gradient sliding: outer accelerated loop on f, inner subgradient
// loop on g. Trace columns: calls_full = grad f, calls_stoch = subgrad g.
// f_star is the known optimum of f+g used for the suboptimality ledger.
RunTrace gradient_sliding(const SmoothPart& f, const NonsmoothPart& g,
                          const Vec& x0, double eps, double R, double f_star);

// --- decentralized methods ---

struct DecentralizedSgdOptions {
  std::int64_t local_steps = 1;  // tau
  Compressor compressor{CompressorKind::identity, 0};
};

// tau local stochastic steps per node, then one gossip round (optionally
// on compressor-transformed model deltas; unbiased compressors only).
RunTrace decentralized_sgd(const Problem& prob, const TopologySchedule& topo,
                           const Vec& x0, const StepSchedule& sched,
                           const RunBudget& budget, std::uint64_t seed,
                           const DecentralizedSgdOptions& opts = {});

// Accelerated gradient in the averaged space; every outer iteration is
// followed by Chebyshev consensus of depth consensus_depth(chi, delta)
// on static graphs (plain gossip with a chi factor on time-varying
// schedules). Requires mu > 0.
RunTrace decentralized_accelerated(const Problem& prob,
                                   const TopologySchedule& topo, const Vec& x0,
                                   double eps, const RunBudget& budget,
                                   std::uint64_t seed = 0);

// K exact-averaging rounds with T local stochastic steps in between;
// all nodes hold the same objective. Returns the Polyak-averaged iterate
// trajectory in the trace.
RunTrace local_sgd(const Problem& prob, const Vec& x0, std::int64_t comm_rounds,
                   std::int64_t local_steps, const StepSchedule& sched,
                   std::uint64_t seed);

// Workers send compressed stochastic gradients to a server that
// averages; steps are shrunk by the compressor's variance-inflation
// factor 1/q. Unbiased compressors only.
RunTrace compressed_distributed_sgd(const Problem& prob,
                                    const Compressor& compressor,
                                    const Vec& x0, const StepSchedule& sched,
                                    const RunBudget& budget,
                                    std::uint64_t seed);

}  // namespace decopt

#endif
