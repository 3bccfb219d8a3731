#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcc/geometry.hpp"

namespace rcc {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NodeLimit };

enum class BranchRule { MostFractional };
enum class TieBreakRule { Lexicographic };

struct SolverConfig {
  double feas_tol = 1e-9;
  double int_tol = 1e-6;
  std::int64_t max_bb_nodes = 200000;
  /// Every problem is intersected with |x_j| <= box_halfwidth so that a
  /// system holding a single half-space still has a bounded optimum.
  /// Zero disables the box.
  double box_halfwidth = 1e6;
  /// Systems with more rows than this are solved by deterministic lazy row
  /// activation (solve a working subset, add violated rows, repeat).
  int lazy_threshold = 256;
  BranchRule branch_rule = BranchRule::MostFractional;
  TieBreakRule tie_break = TieBreakRule::Lexicographic;

  void validate() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Point> point;  // present iff Optimal
  double cost = 0.0;
  Basis basis;                 // filled by solve_mip when Optimal
  std::int64_t bb_nodes = 0;   // branch-and-bound nodes explored
  bool box_active = false;     // bounding box tight at the optimum
};

/// Solves min c.x over the constraint system with x in Z^{d_int} x R^{d_cont}.
///
/// The minimizer is made unique by sequential lexicographic refinement:
/// minimize cost, then x_0 subject to optimal cost, then x_1, and so on.
/// Returns the point, its cost, and the basis found by compute_basis.
SolveResult solve_mip(const ConstraintSystem& system, const SolverConfig& config = {});

/// Continuous relaxation of the system under the same tie-break. Statuses
/// are exact for the box-augmented problem (disable the box for exact
/// unboundedness detection).
SolveResult solve_lp_relaxation(const ConstraintSystem& system, const SolverConfig& config = {});

/// Basis extraction by dropping one constraint at a time: a row belongs to
/// the basis iff its removal strictly decreases the optimal cost. The
/// reduced problems are decision solves with an objective cutoff. Asserts
/// the re-solve identity J(basis) = J(system) (repairing by re-adding
/// violated rows first, which only triggers on degenerate inputs).
Basis compute_basis(const ConstraintSystem& system, const SolveResult& result,
                    const SolverConfig& config = {});

/// Among minimum-cost candidates (cost ties within 1e-9), returns the
/// lexicographically smallest coordinate vector.
Point lex_tie_break(const std::vector<Point>& candidates, const std::vector<double>& costs);

}  // namespace rcc
