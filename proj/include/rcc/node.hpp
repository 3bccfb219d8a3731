#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcc/bounds.hpp"
#include "rcc/geometry.hpp"
#include "rcc/solver.hpp"
#include "rcc/uncertainty.hpp"

namespace rcc {

enum class ScenarioMode { Off, Piggyback, Oracle };

struct NodeConfig {
  SolverConfig solver;
  double epsilon = 0.1;          // per-node accuracy level
  double delta = 1e-9;           // per-node confidence level
  int max_certificates = 1;      // violated samples kept per verification
  ScenarioMode scenario = ScenarioMode::Off;
  int halt_threshold = 1;        // 2nL+1 (or 2D+1), supplied by the simulator
  double unchanged_tol = 1e-7;   // continuous-coordinate comparison
  double feas_tol = kFeasTol;
  bool parallel_scan = false;
};

/// Basis broadcast to out-neighbors, with scenario flags piggybacked.
struct NodeMessage {
  int sender = -1;
  std::vector<LinearConstraint> basis_rows;
  bool frozen = false;
  bool all_frozen_seen = false;
};

/// One agent of the randomized constraints consensus loop. Owns its
/// candidate point, basis, verification stream and scenario-freeze state.
/// Exclusively owned by one execution context; interaction happens through
/// immutable NodeMessage values.
class ConsensusNode {
 public:
  /// Initialization: solves the nominal realization of the local set
  /// (center point / zero deviation) and adopts its point and basis.
  ConsensusNode(int id, UncertainConstraintSet set, MixedIntegerSpace space,
                std::vector<double> objective, NodeConfig config, std::uint64_t master_seed);

  /// Scenario bookkeeping, run once per round before verification:
  /// freezes the sample schedule once the next multisample would reach the
  /// scenario bound, and tracks the all-frozen observation streak.
  void update_freeze(std::span<const NodeMessage> incoming,
                     std::optional<bool> oracle_all_frozen);

  /// Verification step. Skips sampling when the candidate is unchanged;
  /// scans the cached multisample when frozen; otherwise draws a fresh
  /// multisample and advances the verification counter.
  const std::vector<ViolationCertificate>& run_verification();

  /// Optimization step: solves over certificate rows + own basis + incoming
  /// bases, updates the candidate/basis/unchanged counter, and returns a
  /// message exactly when the basis changed since the last transmission.
  /// With count_unchanged_round=false an unchanged candidate leaves the
  /// unchanged-counter where it is (idle-round policy; a change still
  /// resets it).
  std::optional<NodeMessage> run_optimization(std::span<const NodeMessage> incoming,
                                              bool count_unchanged_round = true);

  /// True iff the candidate has been unchanged for halt_threshold rounds.
  bool check_halt() const { return unchanged_rounds_ >= config_.halt_threshold; }
  void halt();

  /// Message content a neighbor reading this node's latest state would see.
  NodeMessage current_message() const;

  /// Realized rows of the cached frozen multisample (deterministic replay).
  std::vector<LinearConstraint> frozen_realized_rows() const;

  // Accessors.
  int id() const { return id_; }
  const Point& candidate() const { return candidate_; }
  const Basis& basis() const { return basis_; }
  double basis_cost() const { return basis_.cost; }
  std::int64_t verification_counter() const { return schedule_.k; }
  int unchanged_rounds() const { return unchanged_rounds_; }
  bool halted() const { return halted_; }
  bool frozen() const { return frozen_; }
  bool all_frozen_seen() const { return all_frozen_seen_; }
  std::int64_t transmissions() const { return transmissions_; }
  std::int64_t basis_size_violations() const { return basis_size_violations_; }
  const std::optional<Point>& solution() const { return solution_; }
  const UncertainConstraintSet& uncertain_set() const { return set_; }
  const std::vector<double>& objective() const { return objective_; }
  const MixedIntegerSpace& space() const { return space_; }
  std::int64_t helly() const { return helly_; }
  const NodeConfig& config() const { return config_; }

 private:
  void freeze_if_due();

  int id_;
  UncertainConstraintSet set_;
  MixedIntegerSpace space_;
  std::vector<double> objective_;
  NodeConfig config_;

  Rng verify_rng_;
  SampleSchedule schedule_;
  std::int64_t sample_counter_ = 0;  // global per-node draw id
  std::int64_t helly_ = 0;

  Point candidate_;
  std::optional<Point> previous_candidate_;
  Basis basis_;
  std::vector<ViolationCertificate> certificates_;
  bool verification_pending_ = false;  // verification ran, optimization didn't yet

  int unchanged_rounds_ = 0;
  bool halted_ = false;
  std::optional<Point> solution_;

  std::uint64_t last_sent_fingerprint_ = 0;
  std::uint64_t last_solve_fingerprint_ = 0;
  std::int64_t transmissions_ = 0;
  std::int64_t basis_size_violations_ = 0;

  // Scenario freeze state.
  bool frozen_ = false;
  bool all_frozen_seen_ = false;
  int all_frozen_streak_ = 0;
  std::int64_t scenario_bound_m_ = 0;
  struct FrozenCache {
    std::uint64_t base_state = 0;
    std::int64_t count = 0;
    std::int64_t sample_id_base = 0;
  };
  std::optional<FrozenCache> frozen_cache_;
};

}  // namespace rcc
