#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcc/graph.hpp"
#include "rcc/node.hpp"

namespace rcc {

enum class EventKind { Verify, Optimize, Transmit, Halt, Freeze };

struct TraceEvent {
  std::int64_t t = 0;
  int node = -1;
  EventKind kind = EventKind::Verify;
  double cost = 0.0;
  int basis_size = 0;
  std::int64_t k = 0;
  std::vector<double> point;
};

enum class HaltMode { TwoNL1, TwoD1 };
enum class PhaseMode { Combined, Staggered };

struct SimConfig {
  std::uint64_t master_seed = 1;
  std::int64_t max_rounds = 1000;
  HaltMode halt_mode = HaltMode::TwoNL1;
  ScenarioMode scenario = ScenarioMode::Off;
  int max_certificates = 1;
  PhaseMode phases = PhaseMode::Combined;
  bool parallel_nodes = false;
  bool shuffled_order = false;      // stress mode; traces must not change
  bool count_idle_rounds = true;    // advance unchanged-counters every round
  bool force_without_ujsc = false;  // skip the connectivity precondition

  void validate() const;
};

struct NodeRunStats {
  int node = -1;
  std::int64_t transmissions = 0;
  std::int64_t verifications = 0;  // k at the end of the run
  std::int64_t halt_round = -1;
  std::int64_t freeze_round = -1;
  std::int64_t basis_size_violations = 0;
};

struct SimOutcome {
  bool all_halted = false;
  std::int64_t rounds = 0;
  std::vector<TraceEvent> trace;
  std::vector<Point> solutions;  // per node: x_sol if halted, else last candidate
  std::vector<NodeRunStats> node_stats;
  double consensus_cost = 0.0;
  bool consensus = false;  // all solutions agree (integer-exact, 1e-7 continuous)
};

/// Computes the halt threshold for a schedule: 2nL+1, or 2D+1 for static
/// graphs when requested.
int halt_threshold(const EdgeSchedule& schedule, HaltMode mode);

/// Round-based simulation of the consensus loop over the schedule.
///
/// Each round: realize the live edge set, deliver every sender's latest
/// published basis along live edges (deliveries are fixed before any node
/// executes), then run verification and optimization per node. Nodes may be
/// processed in ascending id order, shuffled order, or concurrently; all
/// three produce identical traces for the same master seed.
SimOutcome run_simulation(std::vector<ConsensusNode>& nodes, const EdgeSchedule& schedule,
                          const SimConfig& config);

/// Stable CSV schema: t,node,event,cost,basis_size,k
std::string trace_to_csv(const std::vector<TraceEvent>& trace);

std::string event_kind_name(EventKind kind);

}  // namespace rcc
