#ifndef DECOPT_TRACE_HPP
#define DECOPT_TRACE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "decopt/errors.hpp"

namespace decopt {

enum class RunStatus {
  ok,                // ran to the round/call budget without a target
  target_reached,    // suboptimality dropped below target_eps
  budget_exhausted,  // explicit budget hit before the target
  diverged,          // divergence detector tripped; trace is partial
};

// One audited row of a run ledger. Oracle-call columns are per-node
// counts (max over nodes; Table-style "per node k" axis).
struct TraceRecord {
  std::int64_t round = 0;         // iteration index of the method
  std::int64_t comm_rounds = 0;   // cumulative communication rounds
  std::int64_t sent_numbers = 0;  // cumulative transmitted numbers
  std::int64_t calls_full = 0;
  std::int64_t calls_stoch = 0;
  std::int64_t calls_comp = 0;
  std::int64_t calls_value = 0;
  double subopt = 0.0;
  double consensus_err = 0.0;
  double wall_ms = 0.0;
};

class RunTrace {
 public:
  void add(const TraceRecord& rec) {
    if (!records_.empty()) {
      const TraceRecord& last = records_.back();
      if (rec.round <= last.round)
        throw ConfigError("trace: round index must strictly increase");
      if (rec.comm_rounds < last.comm_rounds || rec.sent_numbers < last.sent_numbers ||
          rec.calls_full < last.calls_full || rec.calls_stoch < last.calls_stoch ||
          rec.calls_comp < last.calls_comp || rec.calls_value < last.calls_value)
        throw ConfigError("trace: counters must be non-decreasing");
    }
    if (!std::isfinite(rec.subopt))
      throw ConfigError("trace: suboptimality must be finite");
    records_.push_back(rec);
  }

  const std::vector<TraceRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  const TraceRecord& final() const { return records_.back(); }

  double best_subopt() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : records_) best = std::min(best, r.subopt);
    return best;
  }

  // Communication rounds at the first record with subopt <= eps, or -1.
  std::int64_t rounds_to(double eps) const {
    for (const auto& r : records_)
      if (r.subopt <= eps) return r.comm_rounds;
    return -1;
  }

  RunStatus status = RunStatus::ok;

 private:
  std::vector<TraceRecord> records_;
};

// Geometric recording cadence: every round up to `dense`, then spaced by
// `factor`. Keeps long traces compact without hiding the early rounds.
class RecordCadence {
 public:
  explicit RecordCadence(std::int64_t dense = 16, double factor = 1.05)
      : dense_(dense), factor_(factor) {}

  bool due(std::int64_t round) {
    if (round <= dense_) return true;
    if (round >= next_) {
      next_ = std::max<std::int64_t>(
          round + 1, static_cast<std::int64_t>(std::ceil(round * factor_)));
      return true;
    }
    return false;
  }

 private:
  std::int64_t dense_;
  double factor_;
  std::int64_t next_ = 0;
};

}  // namespace decopt

#endif
