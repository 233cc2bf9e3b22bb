#ifndef DECOPT_PROBLEMS_HPP
#define DECOPT_PROBLEMS_HPP

#include <cstdint>

#include "decopt/objectives.hpp"

namespace decopt {

// Random quadratic finite sum with exactly controlled global spectrum:
// the average Hessian has eigenvalues log-spaced in [mu, L] and the
// closed-form optimum sits at a seeded random point at distance ~1 from
// the origin. Components are heterogeneous but average exactly to the
// target, so x* and f* are exact.
Problem make_random_quadratic(std::size_t nodes, std::size_t comps_per_node,
                              std::size_t dim, double L, double mu,
                              std::uint64_t seed, NoiseSpec noise = {});

// Every node holds the same quadratic.
Problem make_identical_quadratic(std::size_t nodes, std::size_t dim, double L,
                                 double mu, std::uint64_t seed,
                                 NoiseSpec noise = {});

// Single scalar/diagonal quadratic f(x) = 1/2 x'diag(a)x - b'x, for tests.
Problem make_diagonal_quadratic(const Vec& diag, const Vec& b,
                                NoiseSpec noise = {});

// Logistic regression on a seeded synthetic dataset with a planted model.
Problem make_logistic(std::size_t nodes, std::size_t comps_per_node,
                      std::size_t dim, std::size_t samples_per_component,
                      std::uint64_t seed, NoiseSpec noise = {});

// Seeded random symmetric PSD matrix with eigenvalues log-spaced in
// [mu, L] (exposed for tests).
Matrix random_spd(std::size_t dim, double L, double mu, RngStream& rng);

}  // namespace decopt

#endif
