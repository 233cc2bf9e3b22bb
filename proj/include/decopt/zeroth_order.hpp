#ifndef DECOPT_ZEROTH_ORDER_HPP
#define DECOPT_ZEROTH_ORDER_HPP

#include <cstdint>
#include <functional>

#include "decopt/optimizers.hpp"

namespace decopt {

// Two-point gradient estimate (n/(2 tau)) (F(x + tau e) - F(x - tau e)) e
// with e uniform on the unit sphere. Both evaluations see the same
// realization of any value noise the caller bakes into `value`.
Vec two_point_estimate(const std::function<double(const Vec&)>& value,
                       const Vec& x, double tau, RngStream& rng);

// SGD driven by two-point estimates of the (possibly noisy) node values.
// Two value-oracle calls per node per iteration.
RunTrace zo_sgd(const Problem& prob, const Vec& x0, double tau,
                const StepSchedule& sched, const RunBudget& budget,
                std::uint64_t seed);

// Gradient sliding where the nonsmooth part exposes only values: inner
// subgradients are replaced by two-point estimates and the inner budget
// grows by the dimension factor. calls_full = grad f, calls_stoch =
// estimates, calls_value = value-oracle calls on g.
RunTrace gradient_free_sliding(const SmoothPart& f, const NonsmoothPart& g,
                               const Vec& x0, double eps, double R,
                               double f_star, double tau, std::uint64_t seed);

}  // namespace decopt

#endif
