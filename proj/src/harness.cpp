#include "decopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace decopt {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("config: unknown key '" + item.key() + "' in " +
                        where);
  }
}

NoiseSpec parse_noise(const json& j) {
  check_keys(j, "problem.noise", {"model", "sigma2", "value_sigma"});
  NoiseSpec spec;
  const std::string model = j.value("model", "none");
  if (model == "none")
    spec.model = NoiseModel::none;
  else if (model == "gaussian")
    spec.model = NoiseModel::gaussian;
  else if (model == "subsample")
    spec.model = NoiseModel::subsample;
  else
    throw ConfigError("config: unknown noise model '" + model + "'");
  spec.sigma2 = j.value("sigma2", 0.0);
  spec.value_sigma = j.value("value_sigma", 0.0);
  return spec;
}

ProblemSpec parse_problem(const json& j) {
  check_keys(j, "problem",
             {"kind", "nodes", "components", "dim", "L", "mu", "samples",
              "noise", "regularize_eps"});
  ProblemSpec spec;
  spec.kind = j.value("kind", spec.kind);
  spec.nodes = j.value("nodes", spec.nodes);
  spec.components = j.value("components", spec.components);
  spec.dim = j.value("dim", spec.dim);
  spec.L = j.value("L", spec.L);
  spec.mu = j.value("mu", spec.mu);
  spec.samples = j.value("samples", spec.samples);
  spec.regularize_eps = j.value("regularize_eps", spec.regularize_eps);
  if (j.contains("noise")) spec.noise = parse_noise(j.at("noise"));
  return spec;
}

TopologySpec parse_topology(const json& j) {
  check_keys(j, "topology", {"kind", "p", "schedule"});
  TopologySpec spec;
  spec.present = true;
  spec.kind = j.value("kind", spec.kind);
  spec.p = j.value("p", spec.p);
  spec.schedule = j.value("schedule", spec.schedule);
  return spec;
}

AlgorithmSpec parse_algorithm(const json& j) {
  check_keys(j, "algorithm",
             {"name", "step", "h", "batch", "local_steps", "comm_rounds",
              "tau", "eps", "g_weight"});
  AlgorithmSpec spec;
  spec.name = j.value("name", spec.name);
  spec.step = j.value("step", spec.step);
  spec.h = j.value("h", spec.h);
  spec.batch = j.value("batch", spec.batch);
  spec.local_steps = j.value("local_steps", spec.local_steps);
  spec.comm_rounds = j.value("comm_rounds", spec.comm_rounds);
  spec.tau = j.value("tau", spec.tau);
  spec.eps = j.value("eps", spec.eps);
  spec.g_weight = j.value("g_weight", spec.g_weight);
  return spec;
}

CompressorSpec parse_compressor(const json& j) {
  check_keys(j, "compressor", {"kind", "k"});
  CompressorSpec spec;
  spec.kind = j.value("kind", spec.kind);
  spec.k = j.value("k", spec.k);
  return spec;
}

RunBudget parse_budget(const json& j) {
  check_keys(j, "budget", {"max_rounds", "max_oracle_calls", "target_eps"});
  RunBudget budget;
  budget.max_rounds = j.value("max_rounds", budget.max_rounds);
  budget.max_oracle_calls = j.value("max_oracle_calls", budget.max_oracle_calls);
  budget.target_eps = j.value("target_eps", budget.target_eps);
  return budget;
}

StepSchedule make_schedule(const AlgorithmSpec& a, const Problem& prob) {
  if (a.step == "constant") return StepSchedule::constant(a.h);
  if (a.step == "inverse_mu")
    return StepSchedule::inverse_mu(prob.profile().mu);
  if (a.step == "fixed_horizon") return StepSchedule::fixed_horizon();
  throw ConfigError("config: unknown step schedule '" + a.step + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::target_reached: return "target_reached";
    case RunStatus::budget_exhausted: return "budget_exhausted";
    case RunStatus::diverged: return "diverged";
  }
  return "unknown";
}

RunStatus status_from_name(const std::string& s) {
  if (s == "ok") return RunStatus::ok;
  if (s == "target_reached") return RunStatus::target_reached;
  if (s == "budget_exhausted") return RunStatus::budget_exhausted;
  if (s == "diverged") return RunStatus::diverged;
  throw ConfigError("trace: unknown status '" + s + "'");
}

RunTrace run_single(const ExperimentConfig& cfg, const Problem& prob,
                    std::uint64_t seed) {
  const AlgorithmSpec& a = cfg.algorithm;
  const Vec x0(prob.dim(), 0.0);
  if (a.name == "sgd")
    return sgd(prob, x0, make_schedule(a, prob), cfg.budget, seed);
  if (a.name == "accelerated_gradient")
    return accelerated_gradient(prob, x0, cfg.budget, seed, a.batch);
  if (a.name == "variance_reduced")
    return variance_reduced(prob, x0, cfg.budget, seed);
  if (a.name == "zo_sgd")
    return zo_sgd(prob, x0, a.tau, make_schedule(a, prob), cfg.budget, seed);
  if (a.name == "local_sgd") {
    if (a.comm_rounds < 1)
      throw ConfigError("config: local_sgd needs algorithm.comm_rounds >= 1");
    return local_sgd(prob, x0, a.comm_rounds, a.local_steps,
                     make_schedule(a, prob), seed);
  }
  if (a.name == "compressed_sgd")
    return compressed_distributed_sgd(prob, build_compressor(cfg.compressor),
                                      x0, make_schedule(a, prob), cfg.budget,
                                      seed);
  if (a.name == "decentralized_sgd") {
    if (!cfg.topology.present)
      throw ConfigError("config: decentralized_sgd needs a topology");
    DecentralizedSgdOptions opts;
    opts.local_steps = a.local_steps;
    opts.compressor = build_compressor(cfg.compressor);
    return decentralized_sgd(prob,
                             build_topology(cfg.topology, prob.nodes(),
                                            cfg.seed),
                             x0, make_schedule(a, prob), cfg.budget, seed,
                             opts);
  }
  if (a.name == "decentralized_accelerated") {
    if (!cfg.topology.present)
      throw ConfigError(
          "config: decentralized_accelerated needs a topology");
    const double eps = a.eps > 0.0 ? a.eps : cfg.budget.target_eps;
    return decentralized_accelerated(
        prob, build_topology(cfg.topology, prob.nodes(), cfg.seed), x0, eps,
        cfg.budget, seed);
  }
  if (a.name == "gradient_sliding") {
    if (a.eps <= 0.0)
      throw ConfigError("config: gradient_sliding needs algorithm.eps > 0");
    SmoothPart f;
    f.L = prob.profile().L;
    f.value = [&prob](const Vec& v) { return prob.exact_value(v); };
    f.grad = [&prob](const Vec& v) { return prob.full_gradient(v); };
    NonsmoothPart g;
    const double w = a.g_weight;
    g.M = w * std::sqrt(static_cast<double>(prob.dim()));
    g.value = [w](const Vec& v) {
      double s = 0.0;
      for (double vi : v) s += std::abs(vi);
      return w * s;
    };
    g.subgrad = [w](const Vec& v) {
      Vec h(v.size());
      for (std::size_t i = 0; i < v.size(); ++i)
        h[i] = v[i] > 0.0 ? w : (v[i] < 0.0 ? -w : 0.0);
      return h;
    };
    const double R = std::max(prob.profile().R, 1.0);
    return gradient_sliding(f, g, Vec(prob.dim(), 0.0), a.eps, R, 0.0);
  }
  throw ConfigError("config: unknown algorithm '" + a.name + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j, "experiment",
             {"seed", "repeats", "problem", "topology", "algorithm",
              "compressor", "budget"});
  if (!j.contains("seed"))
    throw ConfigError("config: 'seed' is mandatory");
  ExperimentConfig cfg;
  cfg.raw = j;
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.repeats = j.value("repeats", std::int64_t{1});
  if (cfg.repeats < 1) throw ConfigError("config: repeats must be >= 1");
  if (j.contains("problem")) cfg.problem = parse_problem(j.at("problem"));
  if (j.contains("topology")) cfg.topology = parse_topology(j.at("topology"));
  if (j.contains("algorithm"))
    cfg.algorithm = parse_algorithm(j.at("algorithm"));
  if (j.contains("compressor"))
    cfg.compressor = parse_compressor(j.at("compressor"));
  if (j.contains("budget")) cfg.budget = parse_budget(j.at("budget"));
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: parse error in '" + path + "': " + e.what());
  }
  return from_json(j);
}

Problem build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  Problem prob = [&]() {
    if (spec.kind == "random_quadratic")
      return make_random_quadratic(spec.nodes, spec.components, spec.dim,
                                   spec.L, spec.mu, seed, spec.noise);
    if (spec.kind == "identical_quadratic")
      return make_identical_quadratic(spec.nodes, spec.dim, spec.L, spec.mu,
                                      seed, spec.noise);
    if (spec.kind == "logistic")
      return make_logistic(spec.nodes, spec.components, spec.dim, spec.samples,
                           seed, spec.noise);
    throw ConfigError("config: unknown problem kind '" + spec.kind + "'");
  }();
  if (spec.regularize_eps > 0.0) {
    const Vec x0(prob.dim(), 0.0);
    const double R = std::max(prob.profile().R, 1e-12);
    prob = prob.regularized(x0, spec.regularize_eps, R);
  }
  return prob;
}

TopologySchedule build_topology(const TopologySpec& spec, std::size_t nodes,
                                std::uint64_t seed) {
  if (spec.schedule == "random_pool") {
    if (spec.kind != "erdos_renyi")
      throw ConfigError("config: random_pool schedule needs erdos_renyi");
    return TopologySchedule::random_pool(nodes, spec.p, seed);
  }
  if (spec.schedule != "fixed")
    throw ConfigError("config: unknown topology schedule '" + spec.schedule +
                      "'");
  GraphKind kind;
  if (spec.kind == "path")
    kind = GraphKind::path;
  else if (spec.kind == "ring")
    kind = GraphKind::ring;
  else if (spec.kind == "star")
    kind = GraphKind::star;
  else if (spec.kind == "complete")
    kind = GraphKind::complete;
  else if (spec.kind == "erdos_renyi")
    kind = GraphKind::erdos_renyi;
  else
    throw ConfigError("config: unknown topology kind '" + spec.kind + "'");
  return TopologySchedule::fixed(make_graph(kind, nodes, spec.p, seed));
}

Compressor build_compressor(const CompressorSpec& spec) {
  Compressor c;
  c.k = spec.k;
  if (spec.kind == "identity")
    c.kind = CompressorKind::identity;
  else if (spec.kind == "topk")
    c.kind = CompressorKind::topk;
  else if (spec.kind == "randk_scaled")
    c.kind = CompressorKind::randk_scaled;
  else if (spec.kind == "randk_plain")
    c.kind = CompressorKind::randk_plain;
  else if (spec.kind == "simplex")
    c.kind = CompressorKind::simplex_vertex;
  else
    throw ConfigError("config: unknown compressor kind '" + spec.kind + "'");
  return c;
}

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult result;
  result.config = config;
  const Problem prob = build_problem(config.problem, config.seed);
  for (std::int64_t rep = 0; rep < config.repeats; ++rep) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(rep);
    result.traces.push_back(run_single(config, prob, seed));
  }
  // Mean-suboptimality aggregate over the common prefix of records; all
  // non-subopt columns are taken from the first trace.
  std::size_t common = result.traces.front().records().size();
  for (const RunTrace& t : result.traces)
    common = std::min(common, t.records().size());
  for (std::size_t i = 0; i < common; ++i) {
    TraceRecord rec = result.traces.front().records()[i];
    double sum = 0.0;
    bool aligned = true;
    for (const RunTrace& t : result.traces) {
      if (t.records()[i].round != rec.round) {
        aligned = false;
        break;
      }
      sum += t.records()[i].subopt;
    }
    if (!aligned) break;
    rec.subopt = sum / static_cast<double>(result.traces.size());
    result.aggregate.add(rec);
  }
  result.aggregate.status = result.traces.front().status;
  return result;
}

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::string& x_name, const std::string& y_name) {
  if (xs.size() != ys.size())
    throw ConfigError("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0 && ys[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 3)
    throw ConfigError("fit_loglog: need at least 3 positive points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw ConfigError("fit_loglog: degenerate x values");
  SlopeFit fit;
  fit.x_name = x_name;
  fit.y_name = y_name;
  fit.slope = sxy / sxx;
  fit.points = n;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - my - fit.slope * (lx[i] - mx);
    sse += r * r;
  }
  fit.stderr_ = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

SweepResult sweep(const json& spec) {
  check_keys(spec, "sweep file", {"base", "sweep"});
  if (!spec.contains("base") || !spec.contains("sweep"))
    throw ConfigError("sweep: needs 'base' and 'sweep' sections");
  const json& sw = spec.at("sweep");
  check_keys(sw, "sweep", {"pointer", "values", "fits"});
  const std::string pointer = sw.at("pointer").get<std::string>();
  const json& values = sw.at("values");
  if (!values.is_array() || values.empty())
    throw ConfigError("sweep: 'values' must be a non-empty array");

  SweepResult result;
  result.spec = spec;
  for (const json& value : values) {
    SweepCell cell;
    cell.value = value;
    try {
      json cfg_json = spec.at("base");
      cfg_json[json::json_pointer(pointer)] = value;
      const ExperimentConfig cfg = ExperimentConfig::from_json(cfg_json);
      const RunResult run = run_experiment(cfg);
      cell.trace = run.aggregate;

      const Problem prob = build_problem(cfg.problem, cfg.seed);
      auto& m = cell.metrics;
      if (value.is_number()) m["param"] = value.get<double>();
      m["nodes"] = static_cast<double>(prob.nodes());
      m["dim"] = static_cast<double>(prob.dim());
      m["L"] = prob.profile().L;
      if (prob.profile().mu > 0.0) {
        m["mu"] = prob.profile().mu;
        m["kappa"] = prob.profile().L / prob.profile().mu;
      }
      if (cfg.topology.present)
        m["chi"] = build_topology(cfg.topology, prob.nodes(), cfg.seed).chi();
      const double target = cfg.budget.target_eps > 0.0 ? cfg.budget.target_eps
                                                        : cfg.algorithm.eps;
      if (target > 0.0) {
        m["inv_eps"] = 1.0 / target;
        const std::int64_t rounds = cell.trace.rounds_to(target);
        if (rounds >= 0) m["rounds_to_target"] = static_cast<double>(rounds);
        for (const TraceRecord& r : cell.trace.records())
          if (r.subopt <= target) {
            m["iters_to_target"] = static_cast<double>(r.round);
            break;
          }
      }
      const TraceRecord& last = cell.trace.final();
      m["final_subopt"] = last.subopt;
      m["calls_full"] = static_cast<double>(last.calls_full);
      m["calls_stoch"] = static_cast<double>(last.calls_stoch);
      m["calls_comp"] = static_cast<double>(last.calls_comp);
      m["calls_value"] = static_cast<double>(last.calls_value);
      m["sent_numbers"] = static_cast<double>(last.sent_numbers);
      m["comm_rounds"] = static_cast<double>(last.comm_rounds);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    result.cells.push_back(std::move(cell));
  }

  if (sw.contains("fits")) {
    for (const json& f : sw.at("fits")) {
      check_keys(f, "sweep.fits entry", {"x", "y"});
      const std::string xn = f.at("x").get<std::string>();
      const std::string yn = f.at("y").get<std::string>();
      std::vector<double> xs, ys;
      for (const SweepCell& cell : result.cells) {
        if (!cell.error.empty()) continue;
        auto xi = cell.metrics.find(xn);
        auto yi = cell.metrics.find(yn);
        if (xi != cell.metrics.end() && yi != cell.metrics.end()) {
          xs.push_back(xi->second);
          ys.push_back(yi->second);
        }
      }
      // Failed or metric-less cells can leave too few points for a
      // meaningful regression; report no fit rather than aborting.
      if (xs.size() >= 3) result.fits.push_back(fit_loglog(xs, ys, xn, yn));
    }
  }
  return result;
}

SweepResult sweep_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("sweep: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("sweep: parse error in '" + path + "': " + e.what());
  }
  return sweep(j);
}

std::string trace_to_csv(const RunTrace& trace) {
  std::string out =
      "round,comm_rounds,sent_numbers,calls_full,calls_stoch,calls_comp,"
      "calls_value,subopt,consensus_err,wall_ms\n";
  for (const TraceRecord& r : trace.records()) {
    out += std::to_string(r.round) + ',' + std::to_string(r.comm_rounds) +
           ',' + std::to_string(r.sent_numbers) + ',' +
           std::to_string(r.calls_full) + ',' + std::to_string(r.calls_stoch) +
           ',' + std::to_string(r.calls_comp) + ',' +
           std::to_string(r.calls_value) + ',' + fmt_double(r.subopt) + ',' +
           fmt_double(r.consensus_err) + ',' + fmt_double(r.wall_ms) + '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("export: cannot open '" + path + "'");
  out << trace_to_csv(trace);
}

json trace_to_json(const RunTrace& trace) {
  json recs = json::array();
  for (const TraceRecord& r : trace.records()) {
    recs.push_back({{"round", r.round},
                    {"comm_rounds", r.comm_rounds},
                    {"sent_numbers", r.sent_numbers},
                    {"calls_full", r.calls_full},
                    {"calls_stoch", r.calls_stoch},
                    {"calls_comp", r.calls_comp},
                    {"calls_value", r.calls_value},
                    {"subopt", r.subopt},
                    {"consensus_err", r.consensus_err},
                    {"wall_ms", r.wall_ms}});
  }
  return {{"status", status_name(trace.status)}, {"records", recs}};
}

RunTrace trace_from_json(const json& j) {
  RunTrace trace;
  trace.status = status_from_name(j.at("status").get<std::string>());
  for (const json& r : j.at("records")) {
    TraceRecord rec;
    rec.round = r.at("round").get<std::int64_t>();
    rec.comm_rounds = r.at("comm_rounds").get<std::int64_t>();
    rec.sent_numbers = r.at("sent_numbers").get<std::int64_t>();
    rec.calls_full = r.at("calls_full").get<std::int64_t>();
    rec.calls_stoch = r.at("calls_stoch").get<std::int64_t>();
    rec.calls_comp = r.at("calls_comp").get<std::int64_t>();
    rec.calls_value = r.at("calls_value").get<std::int64_t>();
    rec.subopt = r.at("subopt").get<double>();
    rec.consensus_err = r.at("consensus_err").get<double>();
    rec.wall_ms = r.at("wall_ms").get<double>();
    trace.add(rec);
  }
  return trace;
}

void export_run(const std::string& out_dir, const RunResult& result) {
  std::filesystem::create_directories(out_dir);
  json traces = json::array();
  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    write_trace_csv(out_dir + "/trace_" + std::to_string(i) + ".csv",
                    result.traces[i]);
    traces.push_back(trace_to_json(result.traces[i]));
  }
  write_trace_csv(out_dir + "/aggregate.csv", result.aggregate);
  const json doc = {{"config", result.config.raw},
                    {"traces", traces},
                    {"aggregate", trace_to_json(result.aggregate)}};
  std::ofstream out(out_dir + "/run.json", std::ios::binary);
  if (!out) throw ConfigError("export: cannot open run.json in " + out_dir);
  out << doc.dump(2) << '\n';
}

void export_sweep(const std::string& out_dir, const SweepResult& result) {
  std::filesystem::create_directories(out_dir);
  json cells = json::array();
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const SweepCell& cell = result.cells[i];
    json c = {{"value", cell.value}, {"metrics", cell.metrics}};
    if (!cell.error.empty()) c["error"] = cell.error;
    cells.push_back(c);
    if (cell.error.empty())
      write_trace_csv(out_dir + "/cell_" + std::to_string(i) + ".csv",
                      cell.trace);
  }
  json fits = json::array();
  for (const SlopeFit& f : result.fits)
    fits.push_back({{"x", f.x_name},
                    {"y", f.y_name},
                    {"slope", f.slope},
                    {"stderr", f.stderr_},
                    {"points", f.points}});
  const json doc = {{"spec", result.spec}, {"cells", cells}, {"fits", fits}};
  std::ofstream out(out_dir + "/sweep.json", std::ios::binary);
  if (!out) throw ConfigError("export: cannot open sweep.json in " + out_dir);
  out << doc.dump(2) << '\n';
}

std::string report(const std::string& in_dir) {
  std::ostringstream out;
  const std::string sweep_path = in_dir + "/sweep.json";
  if (std::filesystem::exists(sweep_path)) {
    std::ifstream in(sweep_path);
    json doc;
    in >> doc;
    out << "sweep: " << doc.at("cells").size() << " cells\n";
    for (const json& cell : doc.at("cells")) {
      out << "  value=" << cell.at("value").dump();
      if (cell.contains("error"))
        out << "  ERROR: " << cell.at("error").get<std::string>();
      else if (cell.at("metrics").contains("final_subopt"))
        out << "  final_subopt="
            << fmt_double(cell.at("metrics").at("final_subopt").get<double>());
      out << '\n';
    }
    out << "slopes:\n";
    for (const json& f : doc.at("fits"))
      out << "  " << f.at("y").get<std::string>() << " vs "
          << f.at("x").get<std::string>() << ": slope "
          << fmt_double(f.at("slope").get<double>()) << " +/- "
          << fmt_double(f.at("stderr").get<double>()) << " ("
          << f.at("points").get<std::size_t>() << " points)\n";
    return out.str();
  }
  const std::string run_path = in_dir + "/run.json";
  if (std::filesystem::exists(run_path)) {
    std::ifstream in(run_path);
    json doc;
    in >> doc;
    const RunTrace agg = trace_from_json(doc.at("aggregate"));
    out << "run: " << doc.at("traces").size() << " trace(s), status "
        << status_name(agg.status) << '\n';
    if (!agg.empty()) {
      const TraceRecord& last = agg.final();
      out << "  final round " << last.round << ", comm_rounds "
          << last.comm_rounds << ", subopt " << fmt_double(last.subopt)
          << '\n';
    }
    return out.str();
  }
  throw ConfigError("report: no sweep.json or run.json in '" + in_dir + "'");
}

}  // namespace decopt
