#include "decopt/zeroth_order.hpp"

#include <algorithm>
#include <cmath>

namespace decopt {

namespace {

Vec sphere_direction(std::size_t n, RngStream& rng) {
  Vec e(n);
  double nrm = 0.0;
  do {
    for (std::size_t i = 0; i < n; ++i) e[i] = rng.normal();
    nrm = norm2(e);
  } while (nrm < 1e-300);
  scale(1.0 / nrm, e);
  return e;
}

}  // namespace

Vec two_point_estimate(const std::function<double(const Vec&)>& value,
                       const Vec& x, double tau, RngStream& rng) {
  if (tau <= 0.0) throw ConfigError("two_point_estimate: tau must be positive");
  const std::size_t n = x.size();
  const Vec e = sphere_direction(n, rng);
  Vec plus = x, minus = x;
  axpy(tau, e, plus);
  axpy(-tau, e, minus);
  const double coef =
      static_cast<double>(n) / (2.0 * tau) * (value(plus) - value(minus));
  Vec g = e;
  scale(coef, g);
  return g;
}

RunTrace zo_sgd(const Problem& prob, const Vec& x0, double tau,
                const StepSchedule& sched, const RunBudget& budget,
                std::uint64_t seed) {
  budget.validate();
  if (tau <= 0.0) throw ConfigError("zo_sgd: tau must be positive");
  prob.reset_counters();
  const std::size_t m = prob.nodes(), n = prob.dim();
  const std::int64_t horizon =
      std::min(budget.max_rounds, budget.max_oracle_calls);
  const double value_sigma = prob.noise().value_sigma;

  Vec x = x0;
  Vec suffix_sum(n, 0.0);
  std::int64_t suffix_count = 0, suffix_restart = 1;
  const bool strongly_convex = prob.profile().mu > 0.0;

  RunTrace trace;
  RecordCadence cadence;
  const double subopt0 = prob.suboptimality(x0);
  trace.add({0, 0, 0, 0, 0, 0, 0, subopt0, 0.0, 0.0});
  for (std::int64_t k = 0;; ++k) {
    std::int64_t calls = 0;
    for (std::size_t node = 0; node < m; ++node)
      calls = std::max(calls, prob.counters(node).value);
    if (k >= budget.max_rounds || calls >= budget.max_oracle_calls) {
      trace.status = budget.target_eps > 0.0 ? RunStatus::budget_exhausted
                                             : RunStatus::ok;
      return trace;
    }
    Vec g(n, 0.0);
    for (std::size_t node = 0; node < m; ++node) {
      RngStream rng(seed, node, static_cast<std::uint64_t>(k));
      // One noise realization per estimate, shared by both evaluations.
      const double xi = value_sigma > 0.0 ? value_sigma * rng.normal() : 0.0;
      auto value = [&](const Vec& v) {
        return prob.function_value(node, v, nullptr) + xi;
      };
      Vec gk = two_point_estimate(value, x, tau, rng);
      axpy(1.0 / static_cast<double>(m), gk, g);
    }
    const double h = sched.step(k, prob.profile(), horizon);
    axpy(-h, g, x);
    if (k + 1 == suffix_restart * 2) {
      suffix_restart *= 2;
      suffix_sum.assign(n, 0.0);
      suffix_count = 0;
    }
    axpy(1.0, x, suffix_sum);
    ++suffix_count;
    if (cadence.due(k + 1)) {
      Vec report = x;
      if (!strongly_convex) {
        report = suffix_sum;
        scale(1.0 / static_cast<double>(suffix_count), report);
      }
      const double subopt = prob.suboptimality(report);
      if (!std::isfinite(subopt) || subopt > 1e3 * subopt0 + 1e3) {
        trace.status = RunStatus::diverged;
        return trace;
      }
      TraceRecord rec;
      rec.round = k + 1;
      rec.comm_rounds = m > 1 ? k + 1 : 0;
      rec.sent_numbers = m > 1 ? (k + 1) * static_cast<std::int64_t>(m * n) : 0;
      for (std::size_t node = 0; node < m; ++node) {
        const OracleCounters& c = prob.counters(node);
        rec.calls_value = std::max(rec.calls_value, c.value);
      }
      rec.subopt = subopt;
      trace.add(rec);
      if (budget.target_eps > 0.0 && subopt <= budget.target_eps) {
        trace.status = RunStatus::target_reached;
        return trace;
      }
    }
  }
}

RunTrace gradient_free_sliding(const SmoothPart& f, const NonsmoothPart& g,
                               const Vec& x0, double eps, double R,
                               double f_star, double tau, std::uint64_t seed) {
  if (eps <= 0.0 || R <= 0.0)
    throw ConfigError("gradient_free_sliding: eps and R must be positive");
  if (f.L <= 0.0 || g.M < 0.0)
    throw ConfigError("gradient_free_sliding: need L > 0 and M >= 0");
  if (tau <= 0.0)
    throw ConfigError("gradient_free_sliding: tau must be positive");
  const std::size_t n = x0.size();
  const double L = f.L, M = g.M;
  const double dim = static_cast<double>(n);

  const auto outer_total = static_cast<std::int64_t>(
      std::ceil(1.5 * std::sqrt(L * R * R / eps)));
  std::int64_t grad_calls = 0, estimate_calls = 0, value_calls = 0;
  RngStream rng(seed, 0, 0x5f);

  auto composite = [&](const Vec& v) { return f.value(v) + g.value(v); };

  Vec x = x0, xbar = x0;
  RunTrace trace;
  trace.add({0, 0, 0, 0, 0, 0, 0, composite(x0) - f_star, 0.0, 0.0});
  for (std::int64_t k = 1; k <= outer_total; ++k) {
    const double gamma = 2.0 / static_cast<double>(k + 1);
    const double beta = 2.0 * L / static_cast<double>(k);
    Vec x_md(n);
    for (std::size_t i = 0; i < n; ++i)
      x_md[i] = (1.0 - gamma) * xbar[i] + gamma * x[i];
    Vec gf = f.grad(x_md);
    ++grad_calls;

    // Inner budget carries the extra dimension factor paid for replacing
    // subgradients with two-point estimates.
    const std::int64_t inner =
        std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::ceil(
                   dim * M * M * static_cast<double>(outer_total) *
                   static_cast<double>(k) * static_cast<double>(k) /
                   (L * L * R * R))));
    Vec u = x, u_ag = x;
    for (std::int64_t t = 1; t <= inner; ++t) {
      const double p_t = static_cast<double>(t) / 2.0;
      const double theta_t =
          2.0 * static_cast<double>(t + 1) /
          (static_cast<double>(t) * static_cast<double>(t + 3));
      Vec h = two_point_estimate(g.value, u, tau, rng);
      ++estimate_calls;
      value_calls += 2;
      for (std::size_t i = 0; i < n; ++i)
        u[i] = (beta * x[i] + beta * p_t * u[i] - gf[i] - h[i]) /
               (beta * (1.0 + p_t));
      for (std::size_t i = 0; i < n; ++i)
        u_ag[i] = (1.0 - theta_t) * u_ag[i] + theta_t * u[i];
    }
    x = u;
    for (std::size_t i = 0; i < n; ++i)
      xbar[i] = (1.0 - gamma) * xbar[i] + gamma * u_ag[i];

    TraceRecord rec;
    rec.round = k;
    rec.calls_full = grad_calls;
    rec.calls_stoch = estimate_calls;
    rec.calls_value = value_calls;
    rec.subopt = composite(xbar) - f_star;
    trace.add(rec);
  }
  trace.status = RunStatus::ok;
  return trace;
}

}  // namespace decopt
