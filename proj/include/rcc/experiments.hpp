#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcc/sim.hpp"
#include "rcc/solver.hpp"
#include "rcc/uncertainty.hpp"

namespace rcc {

/// Random uncertain MILP family: per node, rows (A^0 + A^q) x <= b with
/// standard Gaussian A^0, b scaled by gamma times the row norm (so the
/// origin is strictly feasible), entrywise interval uncertainty, and one
/// shared Gaussian objective. Communication is a random k-nearest-neighbor
/// digraph with an exact target diameter.
struct MilpInstanceSpec {
  int n = 10;
  int rows_per_node = 100;
  int d_int = 2;
  int d_cont = 3;
  double radius = 0.2;        // interval half-width on the A entries
  double gamma = 20.0;        // feasibility inflation, > 1
  double epsilon_total = 0.1;
  double delta_total = 1e-9;
  int degree = 3;
  int target_diameter = 4;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Sensor-network localization family: known sensors estimate the position
/// of one unknown sensor inside a square. Laser-equipped in-range sensors
/// contribute an angular cone (two sides plus a range cut); the rest
/// contribute the communication disk, linearized as a circumscribing
/// regular polygon. Sensor positions carry ball uncertainty.
struct LocalizationSpec {
  double area_side = 10.0;
  int n = 10;
  double range = 7.0;              // communication and sensing range
  double accuracy_deg = 20.0;      // full opening angle of the laser cone
  double laser_fraction = 0.5;
  double position_radius = 0.1;    // uncertainty ball on sensor positions
  int polygon_sides = 16;
  int face = 0;  // 0: min x, 1: min y, 2: max x, 3: max y
  double epsilon_total = 0.1;
  double delta_total = 1e-9;
  std::uint64_t seed = 1;

  void validate() const;
};

/// A runnable problem: per-node uncertain sets, shared objective, schedule.
struct Instance {
  std::string kind;  // "milp" or "localization"
  MixedIntegerSpace space;
  std::vector<double> objective;
  std::vector<UncertainConstraintSet> sets;  // one per node
  std::vector<double> epsilon;               // per node
  std::vector<double> delta;                 // per node
  EdgeSchedule schedule;
  std::uint64_t seed = 1;
  // Localization metadata.
  std::optional<std::vector<double>> true_position;
  int face = -1;

  int n() const { return static_cast<int>(sets.size()); }
};

Instance generate_random_milp(const MilpInstanceSpec& spec, Rng& rng);
Instance generate_localization(const LocalizationSpec& spec, Rng& rng);

/// Fraction of N joint realizations (one draw per node) for which x violates
/// some node's realized rows. Per-draw substreams make the parallel kernel
/// agree with the serial reference exactly.
double posterior_violation(const Point& x, const std::vector<UncertainConstraintSet>& sets,
                           std::int64_t samples, std::uint64_t seed, bool parallel = false,
                           double tol = kFeasTol);
double posterior_violation_serial(const Point& x,
                                  const std::vector<UncertainConstraintSet>& sets,
                                  std::int64_t samples, std::uint64_t seed,
                                  double tol = kFeasTol);

/// Single solve over the union of realized constraints; ground truth for
/// deterministic-mode equivalence.
SolveResult centralized_oracle(const std::vector<LinearConstraint>& constraints,
                               const std::vector<double>& objective,
                               const MixedIntegerSpace& space, const SolverConfig& config = {});

/// Builds the per-node consensus agents for an instance.
std::vector<ConsensusNode> make_nodes(const Instance& instance, const SimConfig& config);

/// One full consensus run (simulation plus optional a-posteriori analysis).
struct RunRecord {
  std::uint64_t seed = 0;
  bool halted = false;
  bool consensus = false;
  std::int64_t rounds = 0;
  double consensus_cost = 0.0;
  double transmissions_avg = 0.0;
  double verifications_avg = 0.0;
  double empirical_violation = -1.0;  // -1 when not measured
  std::vector<double> solution;
};

struct RunOutput {
  SimOutcome outcome;
  RunRecord record;
};

RunOutput run_instance(const Instance& instance, const SimConfig& config,
                       std::int64_t posterior_samples = 0);

/// Averages over a batch of runs (column layout mirrors the run records).
struct RunReport {
  std::vector<RunRecord> runs;
  double transmissions_avg = 0.0;
  double verifications_avg = 0.0;
  double empirical_violation_avg = 0.0;
  double rounds_avg = 0.0;
  double cost_avg = 0.0;
  int halted_runs = 0;
};

RunReport make_report(std::vector<RunRecord> runs);
std::string report_to_csv(const RunReport& report);

/// Per-round distance-to-final series rendered as SVG polylines (one line
/// per node): |J(B^i(t)) - J_final| and ||x^i(t) - x_sol||_2.
std::string convergence_svg_cost(const std::vector<TraceEvent>& trace, double final_cost);
std::string convergence_svg_solution(const std::vector<TraceEvent>& trace,
                                     const std::vector<double>& solution);

}  // namespace rcc
