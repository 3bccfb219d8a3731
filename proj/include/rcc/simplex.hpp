#pragma once

#include <vector>

namespace rcc {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // minimizer over free variables (Optimal only)
  double cost = 0.0;
  int iterations = 0;
};

/// Minimizes c.x subject to rows[i].x <= rhs[i] with x free, via a dense
/// two-phase tableau simplex (x split into positive parts, slack per row,
/// artificials only where the right-hand side is negative).
///
/// Pivoting is Dantzig with lowest-index tie-breaks; after a fixed fraction
/// of the iteration budget it falls back to Bland's rule. Exceeding the
/// budget entirely raises std::runtime_error (numerical failure).
LpResult solve_lp(const std::vector<double>& c,
                  const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& rhs);

}  // namespace rcc
