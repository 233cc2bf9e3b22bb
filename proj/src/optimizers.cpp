#include "decopt/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace decopt {

namespace {

constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();

void fill_calls(const Problem& prob, TraceRecord& rec) {
  for (std::size_t k = 0; k < prob.nodes(); ++k) {
    const OracleCounters& c = prob.counters(k);
    rec.calls_full = std::max(rec.calls_full, c.full);
    rec.calls_stoch = std::max(rec.calls_stoch, c.stoch);
    rec.calls_comp = std::max(rec.calls_comp, c.comp);
    rec.calls_value = std::max(rec.calls_value, c.value);
  }
}

std::int64_t max_node_calls(const Problem& prob) {
  std::int64_t worst = 0;
  for (std::size_t k = 0; k < prob.nodes(); ++k) {
    const OracleCounters& c = prob.counters(k);
    worst = std::max(worst, c.full + c.stoch + c.comp + c.value);
  }
  return worst;
}

bool diverged(double subopt, double subopt0) {
  return !std::isfinite(subopt) || subopt > 1e3 * subopt0 + 1e3;
}

// Method-of-similar-triangles coefficients: L a^2 = (A + a)(1 + mu A).
double stm_next_a(double L, double mu, double A) {
  const double s = 1.0 + mu * A;
  return (s + std::sqrt(s * s + 4.0 * L * A * s)) / (2.0 * L);
}

// Shared STM loop; `grad` evaluates the (possibly stochastic) gradient
// at the extrapolation point for the given iteration.
RunTrace stm_run(const Problem& prob, const Vec& x0, const RunBudget& budget,
                 double L, double mu,
                 const std::function<Vec(const Vec&, std::int64_t)>& grad,
                 std::int64_t comm_per_iter, std::int64_t sent_per_iter) {
  budget.validate();
  const std::size_t n = prob.dim();
  Vec x = x0, z = x0;
  double A = 0.0;
  RunTrace trace;
  const double subopt0 = prob.suboptimality(x);
  trace.add({0, 0, 0, 0, 0, 0, 0, subopt0, 0.0, 0.0});
  if (budget.target_eps > 0.0 && subopt0 <= budget.target_eps) {
    trace.status = RunStatus::target_reached;
    return trace;
  }
  for (std::int64_t iter = 0;; ++iter) {
    if (iter + 1 > budget.max_rounds ||
        max_node_calls(prob) >= budget.max_oracle_calls) {
      trace.status = budget.target_eps > 0.0 ? RunStatus::budget_exhausted
                                             : RunStatus::ok;
      return trace;
    }
    const double a = stm_next_a(L, mu, A);
    const double a1 = A + a;
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (A * x[i] + a * z[i]) / a1;
    const Vec g = grad(y, iter);
    const double zden = 1.0 + mu * a1;
    for (std::size_t i = 0; i < n; ++i)
      z[i] = ((1.0 + mu * A) * z[i] + mu * a * y[i] - a * g[i]) / zden;
    for (std::size_t i = 0; i < n; ++i) x[i] = (A * x[i] + a * z[i]) / a1;
    A = a1;
    TraceRecord rec;
    rec.round = iter + 1;
    rec.comm_rounds = (iter + 1) * comm_per_iter;
    rec.sent_numbers = (iter + 1) * sent_per_iter;
    fill_calls(prob, rec);
    const double subopt = prob.suboptimality(x);
    if (diverged(subopt, subopt0)) {
      trace.status = RunStatus::diverged;
      return trace;
    }
    rec.subopt = subopt;
    trace.add(rec);
    if (budget.target_eps > 0.0 && subopt <= budget.target_eps) {
      trace.status = RunStatus::target_reached;
      return trace;
    }
  }
}

}  // namespace

StepSchedule StepSchedule::constant(double h) {
  if (h <= 0.0) throw ConfigError("step schedule: h must be positive");
  StepSchedule s;
  s.kind = Kind::constant;
  s.h = h;
  return s;
}

StepSchedule StepSchedule::inverse_mu(double mu) {
  if (mu <= 0.0) throw ConfigError("inverse_mu schedule needs mu > 0");
  StepSchedule s;
  s.kind = Kind::inverse_mu;
  s.mu = mu;
  return s;
}

StepSchedule StepSchedule::fixed_horizon() {
  StepSchedule s;
  s.kind = Kind::fixed_horizon;
  return s;
}

double StepSchedule::step(std::int64_t k, const SmoothnessProfile& p,
                          std::int64_t horizon) const {
  switch (kind) {
    case Kind::constant:
      return h;
    case Kind::inverse_mu: {
      const double hk = 1.0 / (mu * static_cast<double>(k + 1));
      return p.L > 0.0 ? std::min(hk, 1.0 / (2.0 * p.L)) : hk;
    }
    case Kind::fixed_horizon: {
      if (horizon <= 0 || horizon == kInfinite)
        throw ConfigError("fixed_horizon schedule needs a finite budget");
      double step = p.L > 0.0 ? 1.0 / p.L
                              : std::numeric_limits<double>::infinity();
      if (p.M > 0.0 && p.R > 0.0)
        step = std::min(step,
                        p.R / (p.M * std::sqrt(static_cast<double>(horizon))));
      if (!std::isfinite(step))
        throw ConfigError("fixed_horizon schedule: L or (M, R) must be set");
      return step;
    }
  }
  throw ConfigError("step schedule: unknown kind");
}

void RunBudget::validate() const {
  if (max_rounds == kInfinite && max_oracle_calls == kInfinite &&
      target_eps <= 0.0)
    throw ConfigError("budget: at least one bound must be finite");
  if (max_rounds < 0 || max_oracle_calls < 0 || target_eps < 0.0)
    throw ConfigError("budget: bounds must be non-negative");
}

RunTrace sgd(const Problem& prob, const Vec& x0, const StepSchedule& sched,
             const RunBudget& budget, std::uint64_t seed) {
  budget.validate();
  if (sched.kind == StepSchedule::Kind::inverse_mu &&
      prob.profile().mu <= 0.0)
    throw ConfigError("sgd: inverse_mu schedule requires mu > 0");
  prob.reset_counters();
  const std::size_t m = prob.nodes(), n = prob.dim();
  const std::int64_t horizon =
      std::min(budget.max_rounds, budget.max_oracle_calls);
  const bool strongly_convex = prob.profile().mu > 0.0;
  const std::int64_t comm_per_iter = m > 1 ? 1 : 0;
  const std::int64_t sent_per_iter =
      m > 1 ? static_cast<std::int64_t>(m * n) : 0;

  Vec x = x0;
  // Suffix average restarted at powers of two covers at least the last
  // half of the trajectory.
  Vec suffix_sum(n, 0.0);
  std::int64_t suffix_count = 0, suffix_restart = 1;

  RunTrace trace;
  RecordCadence cadence;
  const double subopt0 = prob.suboptimality(x0);
  trace.add({0, 0, 0, 0, 0, 0, 0, subopt0, 0.0, 0.0});

  auto report_iterate = [&](const Vec& last) {
    Vec report = last;
    if (!strongly_convex && suffix_count > 0) {
      report = suffix_sum;
      scale(1.0 / static_cast<double>(suffix_count), report);
    }
    return report;
  };

  for (std::int64_t k = 0;; ++k) {
    if (k >= budget.max_rounds || k >= budget.max_oracle_calls) {
      // The cadence may have skipped the last rounds; close the ledger so
      // the trace covers all oracle work actually performed.
      if (trace.final().round < k) {
        TraceRecord rec;
        rec.round = k;
        rec.comm_rounds = k * comm_per_iter;
        rec.sent_numbers = k * sent_per_iter;
        fill_calls(prob, rec);
        rec.subopt = prob.suboptimality(report_iterate(x));
        trace.add(rec);
      }
      trace.status = budget.target_eps > 0.0 ? RunStatus::budget_exhausted
                                             : RunStatus::ok;
      return trace;
    }
    Vec g(n, 0.0);
    for (std::size_t node = 0; node < m; ++node) {
      RngStream rng(seed, node, static_cast<std::uint64_t>(k));
      Vec gk = prob.stochastic_gradient(node, x, rng);
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
      if (diverged(subopt, subopt0)) {
        trace.status = RunStatus::diverged;
        return trace;
      }
      TraceRecord rec;
      rec.round = k + 1;
      rec.comm_rounds = (k + 1) * comm_per_iter;
      rec.sent_numbers = (k + 1) * sent_per_iter;
      fill_calls(prob, rec);
      rec.subopt = subopt;
      trace.add(rec);
      if (budget.target_eps > 0.0 && subopt <= budget.target_eps) {
        trace.status = RunStatus::target_reached;
        return trace;
      }
    }
  }
}

RunTrace accelerated_gradient(const Problem& prob, const Vec& x0,
                              const RunBudget& budget, std::uint64_t seed,
                              std::int64_t batch) {
  prob.reset_counters();
  const double L = prob.profile().L, mu = prob.profile().mu;
  if (L <= 0.0) throw ConfigError("accelerated_gradient: L must be positive");
  const std::size_t m = prob.nodes(), n = prob.dim();
  const std::int64_t comm = m > 1 ? 1 : 0;
  const std::int64_t sent = m > 1 ? static_cast<std::int64_t>(m * n) : 0;
  auto grad = [&](const Vec& y, std::int64_t iter) {
    if (batch <= 0) return prob.full_gradient(y);
    Vec g(n, 0.0);
    for (std::size_t node = 0; node < m; ++node) {
      RngStream rng(seed, node, static_cast<std::uint64_t>(iter));
      Vec gk = prob.batch_gradient(node, y, static_cast<std::size_t>(batch),
                                   rng);
      axpy(1.0 / static_cast<double>(m), gk, g);
    }
    return g;
  };
  return stm_run(prob, x0, budget, L, mu, grad, comm, sent);
}

RunTrace variance_reduced(const Problem& prob, const Vec& x0,
                          const RunBudget& budget, std::uint64_t seed) {
  budget.validate();
  prob.reset_counters();
  const double mu = prob.profile().mu;
  if (mu <= 0.0)
    throw ConfigError(
        "variance_reduced: mu must be positive (regularize the problem "
        "first)");
  const std::size_t m = prob.nodes(), r = prob.components_per_node();
  const std::size_t total = m * r;
  const std::size_t n = prob.dim();

  if (total == 1) {
    // Degenerate sum: the anchor is always fresh and the recursion is
    // exactly the accelerated method on the single component.
    auto grad = [&](const Vec& y, std::int64_t) {
      return prob.component_gradient(0, 0, y);
    };
    return stm_run(prob, x0, budget, prob.profile().L, mu, grad, 0, 0);
  }

  const double lc = prob.component_smoothness_max();
  // Loopless accelerated variance reduction (L-Katyusha parameterization).
  const double sigma = mu / lc;
  const double theta2 = 0.5;
  const double theta1 =
      std::min(std::sqrt(2.0 * static_cast<double>(total) * sigma / 3.0), 0.5);
  const double p_refresh = 1.0 / static_cast<double>(total);
  const double eta = theta2 / ((1.0 + theta2) * theta1);

  auto comp_grad = [&](std::size_t i, const Vec& x) {
    return prob.component_gradient(i / r, i % r, x);
  };
  auto anchor_grad = [&](const Vec& w) {
    Vec g(n, 0.0);
    for (std::size_t i = 0; i < total; ++i) {
      Vec gi = comp_grad(i, w);
      axpy(1.0 / static_cast<double>(total), gi, g);
    }
    return g;
  };

  Vec y = x0, z = x0, w = x0;
  Vec gw = anchor_grad(w);
  RngStream rng(seed, 0, 0x7a);

  RunTrace trace;
  RecordCadence cadence;
  const double subopt0 = prob.suboptimality(x0);
  trace.add({0, 0, 0, 0, 0, 0, 0, subopt0, 0.0, 0.0});
  for (std::int64_t iter = 0;; ++iter) {
    if (iter >= budget.max_rounds ||
        max_node_calls(prob) >= budget.max_oracle_calls) {
      if (trace.final().round < iter) {
        TraceRecord rec;
        rec.round = iter;
        fill_calls(prob, rec);
        rec.subopt = prob.suboptimality(y);
        trace.add(rec);
      }
      trace.status = budget.target_eps > 0.0 ? RunStatus::budget_exhausted
                                             : RunStatus::ok;
      return trace;
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = theta1 * z[i] + theta2 * w[i] + (1.0 - theta1 - theta2) * y[i];
    const std::size_t pick = rng.uniform_int(total);
    Vec g = comp_grad(pick, x);
    Vec gp = comp_grad(pick, w);
    for (std::size_t i = 0; i < n; ++i) g[i] += gw[i] - gp[i];
    Vec z_new(n);
    for (std::size_t i = 0; i < n; ++i)
      z_new[i] =
          (eta * sigma * x[i] + z[i] - (eta / lc) * g[i]) / (1.0 + eta * sigma);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = x[i] + theta1 * (z_new[i] - z[i]);
    z = std::move(z_new);
    if (rng.uniform() < p_refresh) {
      w = y;
      gw = anchor_grad(w);
    }
    if (cadence.due(iter + 1)) {
      const double subopt = prob.suboptimality(y);
      if (diverged(subopt, subopt0)) {
        trace.status = RunStatus::diverged;
        return trace;
      }
      TraceRecord rec;
      rec.round = iter + 1;
      fill_calls(prob, rec);
      rec.subopt = subopt;
      trace.add(rec);
      if (budget.target_eps > 0.0 && subopt <= budget.target_eps) {
        trace.status = RunStatus::target_reached;
        return trace;
      }
    }
  }
}

RunTrace gradient_sliding(const SmoothPart& f, const NonsmoothPart& g,
                          const Vec& x0, double eps, double R, double f_star) {
  if (eps <= 0.0 || R <= 0.0)
    throw ConfigError("gradient_sliding: eps and R must be positive");
  if (f.L <= 0.0 || g.M < 0.0)
    throw ConfigError("gradient_sliding: need L > 0 and M >= 0");
  const std::size_t n = x0.size();
  const double L = f.L, M = g.M;

  const auto outer_total = static_cast<std::int64_t>(
      std::ceil(1.5 * std::sqrt(L * R * R / eps)));
  std::int64_t grad_calls = 0, subgrad_calls = 0;

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

    // Inner prox-sliding: subgradient steps on g around the prox center.
    const std::int64_t inner =
        std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::ceil(
                   M * M * static_cast<double>(outer_total) *
                   static_cast<double>(k) * static_cast<double>(k) /
                   (L * L * R * R))));
    Vec u = x, u_ag = x;
    for (std::int64_t t = 1; t <= inner; ++t) {
      const double p_t = static_cast<double>(t) / 2.0;
      const double theta_t =
          2.0 * static_cast<double>(t + 1) /
          (static_cast<double>(t) * static_cast<double>(t + 3));
      Vec h = g.subgrad(u);
      ++subgrad_calls;
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
    rec.calls_stoch = subgrad_calls;
    rec.subopt = composite(xbar) - f_star;
    trace.add(rec);
  }
  trace.status = RunStatus::ok;
  return trace;
}

RunTrace decentralized_sgd(const Problem& prob, const TopologySchedule& topo,
                           const Vec& x0, const StepSchedule& sched,
                           const RunBudget& budget, std::uint64_t seed,
                           const DecentralizedSgdOptions& opts) {
  budget.validate();
  prob.reset_counters();
  const std::size_t m = prob.nodes(), n = prob.dim();
  if (topo.m() != m)
    throw ConfigError("decentralized_sgd: topology size mismatch");
  if (opts.local_steps < 1)
    throw ConfigError("decentralized_sgd: local_steps must be >= 1");
  if (!opts.compressor.unbiased())
    throw UnsupportedError(
        "decentralized_sgd: biased compressors need error feedback, which "
        "is out of scope");
  const bool compressed = opts.compressor.kind != CompressorKind::identity;

  Matrix X(m, n);
  for (std::size_t kk = 0; kk < m; ++kk)
    for (std::size_t i = 0; i < n; ++i) X(kk, i) = x0[i];

  RunTrace trace;
  RecordCadence cadence;
  const double subopt0 = prob.suboptimality(x0);
  trace.add({0, 0, 0, 0, 0, 0, 0, subopt0, 0.0, 0.0});
  std::int64_t sent = 0;
  for (std::int64_t round = 0;; ++round) {
    if (round >= budget.max_rounds ||
        max_node_calls(prob) >= budget.max_oracle_calls) {
      if (trace.final().round < round) {
        TraceRecord rec;
        rec.round = round;
        rec.comm_rounds = round;
        rec.sent_numbers = sent;
        fill_calls(prob, rec);
        rec.subopt = prob.suboptimality(column_means(X));
        rec.consensus_err = consensus_error(X);
        trace.add(rec);
      }
      trace.status = budget.target_eps > 0.0 ? RunStatus::budget_exhausted
                                             : RunStatus::ok;
      return trace;
    }
    // Local steps: nodes only touch their own row and their own stream,
    // so the loop parallelizes with sequential-identical results.
#pragma omp parallel for schedule(static)
    for (long long node = 0; node < static_cast<long long>(m); ++node) {
      RngStream rng(seed, static_cast<std::uint64_t>(node),
                    static_cast<std::uint64_t>(round));
      Vec xk(X.row(node), X.row(node) + n);
      for (std::int64_t t = 0; t < opts.local_steps; ++t) {
        Vec gk = prob.stochastic_gradient(static_cast<std::size_t>(node), xk,
                                          rng);
        const double h = sched.step(round * opts.local_steps + t,
                                    prob.profile(), budget.max_rounds);
        axpy(-h, gk, xk);
      }
      std::copy(xk.begin(), xk.end(), X.row(node));
    }
    const GossipMatrix& w = topo.at(round);
    if (!compressed) {
      X = gossip_round(w, X);
    } else {
      // Nodes exchange compressed models: X <- X + (W - I) Q(X).
      Matrix Q(m, n);
      for (std::size_t node = 0; node < m; ++node) {
        RngStream rng(seed ^ 0xc0457, node, static_cast<std::uint64_t>(round));
        Vec row(X.row(node), X.row(node) + n);
        Vec q = opts.compressor.apply(row, rng);
        std::copy(q.begin(), q.end(), Q.row(node));
      }
      Matrix WQ = gossip_round(w, Q);
      for (std::size_t node = 0; node < m; ++node)
        for (std::size_t i = 0; i < n; ++i)
          X(node, i) += WQ(node, i) - Q(node, i);
    }
    sent += static_cast<std::int64_t>(m) * opts.compressor.message_cost(n);
    if (cadence.due(round + 1)) {
      const Vec mean = column_means(X);
      const double subopt = prob.suboptimality(mean);
      if (diverged(subopt, subopt0)) {
        trace.status = RunStatus::diverged;
        return trace;
      }
      TraceRecord rec;
      rec.round = round + 1;
      rec.comm_rounds = round + 1;
      rec.sent_numbers = sent;
      fill_calls(prob, rec);
      rec.subopt = subopt;
      rec.consensus_err = consensus_error(X);
      trace.add(rec);
      if (budget.target_eps > 0.0 && subopt <= budget.target_eps) {
        trace.status = RunStatus::target_reached;
        return trace;
      }
    }
  }
}

RunTrace decentralized_accelerated(const Problem& prob,
                                   const TopologySchedule& topo, const Vec& x0,
                                   double eps, const RunBudget& budget,
                                   std::uint64_t seed) {
  (void)seed;
  budget.validate();
  if (eps <= 0.0) throw ConfigError("decentralized_accelerated: eps <= 0");
  prob.reset_counters();
  const double L = prob.node_smoothness_max();
  const double mu = prob.profile().mu;
  if (mu <= 0.0)
    throw ConfigError("decentralized_accelerated: mu must be positive");
  const std::size_t m = prob.nodes(), n = prob.dim();
  if (topo.m() != m)
    throw ConfigError("decentralized_accelerated: topology size mismatch");

  const double chi = topo.chi();
  const double delta = eps;
  // Static graphs get Chebyshev-accelerated consensus (sqrt(chi) factor);
  // time-varying schedules fall back to plain gossip with a chi factor.
  const std::int64_t depth =
      topo.is_static()
          ? consensus_depth(chi, delta)
          : std::max<std::int64_t>(
                1, static_cast<std::int64_t>(std::ceil(
                       chi * std::log(std::max(chi, 10.0) / delta))));

  Matrix X(m, n), Z(m, n);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < n; ++i) X(k, i) = Z(k, i) = x0[i];
  double A = 0.0;

  RunTrace trace;
  const double subopt0 = prob.suboptimality(x0);
  trace.add({0, 0, 0, 0, 0, 0, 0, subopt0, 0.0, 0.0});
  std::int64_t comm = 0, sent = 0;
  for (std::int64_t iter = 0;; ++iter) {
    if (comm + depth > budget.max_rounds ||
        max_node_calls(prob) >= budget.max_oracle_calls) {
      trace.status = budget.target_eps > 0.0 || eps > 0.0
                         ? RunStatus::budget_exhausted
                         : RunStatus::ok;
      return trace;
    }
    const double a = stm_next_a(L, mu, A);
    const double a1 = A + a;
    // Per-node STM update on each row using the node's own gradient.
    Matrix Ynodes(m, n);
#pragma omp parallel for schedule(static)
    for (long long node = 0; node < static_cast<long long>(m); ++node) {
      Vec y(n);
      for (std::size_t i = 0; i < n; ++i)
        y[i] = (A * X(node, i) + a * Z(node, i)) / a1;
      const Vec g = prob.full_gradient(static_cast<std::size_t>(node), y);
      const double zden = 1.0 + mu * a1;
      for (std::size_t i = 0; i < n; ++i) {
        const double znew =
            ((1.0 + mu * A) * Z(node, i) + mu * a * y[i] - a * g[i]) / zden;
        Z(node, i) = znew;
        X(node, i) = (A * X(node, i) + a * znew) / a1;
        Ynodes(node, i) = y[i];
      }
    }
    A = a1;
    // Consense X and Z jointly (stacked side by side, one pass).
    Matrix S(m, 2 * n);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        S(k, i) = X(k, i);
        S(k, n + i) = Z(k, i);
      }
    if (topo.is_static()) {
      S = chebyshev_consensus(topo.at(0), S, depth);
    } else {
      for (std::int64_t t = 0; t < depth; ++t)
        S = gossip_round(topo.at(comm + t), S);
    }
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        X(k, i) = S(k, i);
        Z(k, i) = S(k, n + i);
      }
    comm += depth;
    sent += depth * static_cast<std::int64_t>(m) *
            static_cast<std::int64_t>(2 * n);

    const Vec mean = column_means(X);
    const double subopt = prob.suboptimality(mean);
    if (diverged(subopt, subopt0)) {
      trace.status = RunStatus::diverged;
      return trace;
    }
    TraceRecord rec;
    rec.round = iter + 1;
    rec.comm_rounds = comm;
    rec.sent_numbers = sent;
    fill_calls(prob, rec);
    rec.subopt = subopt;
    rec.consensus_err = consensus_error(X);
    trace.add(rec);
    if (subopt <= eps) {
      trace.status = RunStatus::target_reached;
      return trace;
    }
  }
}

RunTrace local_sgd(const Problem& prob, const Vec& x0, std::int64_t comm_rounds,
                   std::int64_t local_steps, const StepSchedule& sched,
                   std::uint64_t seed) {
  if (comm_rounds < 1 || local_steps < 1)
    throw ConfigError("local_sgd: K and T must be >= 1");
  prob.reset_counters();
  const std::size_t m = prob.nodes(), n = prob.dim();

  Matrix X(m, n);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < n; ++i) X(k, i) = x0[i];
  Vec polyak(n, 0.0);
  std::int64_t polyak_count = 0;

  RunTrace trace;
  RecordCadence cadence;
  trace.add({0, 0, 0, 0, 0, 0, 0, prob.suboptimality(x0), 0.0, 0.0});
  const std::int64_t horizon = comm_rounds * local_steps;
  for (std::int64_t k = 0; k < comm_rounds; ++k) {
    std::vector<Vec> node_sums(m, Vec(n, 0.0));
#pragma omp parallel for schedule(static)
    for (long long node = 0; node < static_cast<long long>(m); ++node) {
      RngStream rng(seed, static_cast<std::uint64_t>(node),
                    static_cast<std::uint64_t>(k));
      Vec xk(X.row(node), X.row(node) + n);
      for (std::int64_t t = 0; t < local_steps; ++t) {
        Vec g = prob.stochastic_gradient(static_cast<std::size_t>(node), xk,
                                         rng);
        const double h =
            sched.step(k * local_steps + t, prob.profile(), horizon);
        axpy(-h, g, xk);
        axpy(1.0, xk, node_sums[node]);
      }
      std::copy(xk.begin(), xk.end(), X.row(node));
    }
    // Exact averaging round.
    const Vec mean = column_means(X);
    for (std::size_t node = 0; node < m; ++node)
      std::copy(mean.begin(), mean.end(), X.row(node));
    for (const Vec& s : node_sums) axpy(1.0, s, polyak);
    polyak_count += local_steps * static_cast<std::int64_t>(m);

    if (cadence.due(k + 1) || k + 1 == comm_rounds) {
      Vec avg = polyak;
      scale(1.0 / static_cast<double>(polyak_count), avg);
      TraceRecord rec;
      rec.round = k + 1;
      rec.comm_rounds = k + 1;
      rec.sent_numbers = (k + 1) * static_cast<std::int64_t>(m * n);
      fill_calls(prob, rec);
      rec.subopt = prob.suboptimality(avg);
      rec.consensus_err = 0.0;
      trace.add(rec);
    }
  }
  trace.status = RunStatus::ok;
  return trace;
}

RunTrace compressed_distributed_sgd(const Problem& prob,
                                    const Compressor& compressor,
                                    const Vec& x0, const StepSchedule& sched,
                                    const RunBudget& budget,
                                    std::uint64_t seed) {
  budget.validate();
  if (!compressor.unbiased())
    throw UnsupportedError(
        "compressed_distributed_sgd: biased compressors need error "
        "feedback, which is out of scope");
  prob.reset_counters();
  const std::size_t m = prob.nodes(), n = prob.dim();
  const double q = compressor.q(n);

  Vec x = x0;
  RunTrace trace;
  RecordCadence cadence;
  const double subopt0 = prob.suboptimality(x0);
  trace.add({0, 0, 0, 0, 0, 0, 0, subopt0, 0.0, 0.0});
  for (std::int64_t round = 0;; ++round) {
    if (round >= budget.max_rounds ||
        max_node_calls(prob) >= budget.max_oracle_calls) {
      if (trace.final().round < round) {
        TraceRecord rec;
        rec.round = round;
        rec.comm_rounds = round;
        rec.sent_numbers =
            round * static_cast<std::int64_t>(m) * compressor.message_cost(n);
        fill_calls(prob, rec);
        rec.subopt = prob.suboptimality(x);
        trace.add(rec);
      }
      trace.status = budget.target_eps > 0.0 ? RunStatus::budget_exhausted
                                             : RunStatus::ok;
      return trace;
    }
    Vec g(n, 0.0);
    for (std::size_t node = 0; node < m; ++node) {
      RngStream rng(seed, node, static_cast<std::uint64_t>(round));
      Vec gk = prob.stochastic_gradient(node, x, rng);
      if (compressor.kind != CompressorKind::identity)
        gk = compressor.apply(gk, rng);
      axpy(1.0 / static_cast<double>(m), gk, g);
    }
    const double h =
        sched.step(round, prob.profile(), budget.max_rounds) * q;
    axpy(-h, g, x);
    if (cadence.due(round + 1)) {
      const double subopt = prob.suboptimality(x);
      if (diverged(subopt, subopt0)) {
        trace.status = RunStatus::diverged;
        return trace;
      }
      TraceRecord rec;
      rec.round = round + 1;
      rec.comm_rounds = round + 1;
      rec.sent_numbers =
          (round + 1) * static_cast<std::int64_t>(m) * compressor.message_cost(n);
      fill_calls(prob, rec);
      rec.subopt = subopt;
      trace.add(rec);
      if (budget.target_eps > 0.0 && subopt <= budget.target_eps) {
        trace.status = RunStatus::target_reached;
        return trace;
      }
    }
  }
}

}  // namespace decopt
