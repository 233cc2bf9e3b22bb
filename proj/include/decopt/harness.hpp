#ifndef DECOPT_HARNESS_HPP
#define DECOPT_HARNESS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "decopt/optimizers.hpp"
#include "decopt/problems.hpp"
#include "decopt/zeroth_order.hpp"

namespace decopt {

struct ProblemSpec {
  std::string kind = "random_quadratic";  // identical_quadratic | logistic
  std::size_t nodes = 1;
  std::size_t components = 1;
  std::size_t dim = 2;
  double L = 1.0;
  double mu = 0.0;
  std::size_t samples = 32;       // logistic only
  NoiseSpec noise;
  double regularize_eps = 0.0;    // > 0: wrap with the tilt regularizer
};

struct TopologySpec {
  bool present = false;
  std::string kind = "ring";  // path | ring | star | complete | erdos_renyi
  double p = 0.5;             // erdos_renyi edge probability
  std::string schedule = "fixed";  // fixed | random_pool
};

struct AlgorithmSpec {
  std::string name = "sgd";
  // sgd | accelerated_gradient | variance_reduced | gradient_sliding |
  // decentralized_sgd | decentralized_accelerated | local_sgd |
  // compressed_sgd | zo_sgd
  std::string step = "fixed_horizon";  // constant | inverse_mu | fixed_horizon
  double h = 0.0;
  std::int64_t batch = 0;
  std::int64_t local_steps = 1;
  std::int64_t comm_rounds = 0;  // local_sgd outer rounds (K)
  double tau = 1e-6;             // zeroth-order smoothing radius
  double eps = 0.0;              // target for eps-driven methods
  double g_weight = 0.1;         // gradient_sliding: weight of the l1 term
};

struct CompressorSpec {
  std::string kind = "identity";  // topk | randk_scaled | randk_plain | simplex
  std::size_t k = 1;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::int64_t repeats = 1;
  ProblemSpec problem;
  TopologySpec topology;
  AlgorithmSpec algorithm;
  CompressorSpec compressor;
  RunBudget budget;
  nlohmann::json raw;  // config as parsed, embedded in exports

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
};

struct RunResult {
  ExperimentConfig config;
  std::vector<RunTrace> traces;  // one per repeat, derived seeds
  RunTrace aggregate;            // mean suboptimality over repeats
};

struct SlopeFit {
  std::string x_name;
  std::string y_name;
  double slope = 0.0;
  double stderr_ = 0.0;
  std::size_t points = 0;
};

struct SweepCell {
  nlohmann::json value;  // swept parameter value
  std::map<std::string, double> metrics;
  RunTrace trace;  // aggregate trace of the cell
  std::string error;  // non-empty when the run failed
};

struct SweepResult {
  nlohmann::json spec;
  std::vector<SweepCell> cells;
  std::vector<SlopeFit> fits;
};

Problem build_problem(const ProblemSpec& spec, std::uint64_t seed);
TopologySchedule build_topology(const TopologySpec& spec, std::size_t nodes,
                                std::uint64_t seed);
Compressor build_compressor(const CompressorSpec& spec);

RunResult run_experiment(const ExperimentConfig& config);

// Sweep spec JSON: {"base": <experiment config>, "sweep": {"pointer":
// "/topology/nodes", "values": [...], "fits": [{"x": "chi", "y":
// "rounds_to_target"}]}}. Cell failures are recorded and the sweep
// continues; fits skip failed cells.
SweepResult sweep(const nlohmann::json& spec);
SweepResult sweep_from_file(const std::string& path);

// Least squares on (log x, log y). Requires >= 3 positive points.
SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::string& x_name, const std::string& y_name);

// CSV columns, exactly: round, comm_rounds, sent_numbers, calls_full,
// calls_stoch, calls_comp, calls_value, subopt, consensus_err, wall_ms.
std::string trace_to_csv(const RunTrace& trace);
void write_trace_csv(const std::string& path, const RunTrace& trace);

nlohmann::json trace_to_json(const RunTrace& trace);
RunTrace trace_from_json(const nlohmann::json& j);

// Writes trace_<i>.csv, aggregate.csv and run.json under out_dir.
void export_run(const std::string& out_dir, const RunResult& result);
// Writes cell_<i>.csv per cell plus sweep.json (metrics + fits).
void export_sweep(const std::string& out_dir, const SweepResult& result);
// Reads sweep.json from a directory and renders the slope table.
std::string report(const std::string& in_dir);

}  // namespace decopt

#endif
