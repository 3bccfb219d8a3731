#include "rcc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace rcc {

namespace {

constexpr double kPivotTol = 1e-9;   // reduced-cost / ratio-test threshold
constexpr double kPhase1Tol = 1e-7;  // residual infeasibility accepted after phase 1

// Full dense tableau. Layout: m constraint rows, then the objective row.
// Columns: n structural columns, then the RHS column.
struct Tableau {
  int m = 0;
  int n = 0;
  std::vector<double> t;          // (m+1) x (n+1), row-major
  std::vector<int> basis;         // basic column per row
  std::vector<bool> can_enter;    // column eligibility (artificials get locked)

  double* row(int i) { return t.data() + static_cast<std::size_t>(i) * (n + 1); }
  double& at(int i, int j) { return t[static_cast<std::size_t>(i) * (n + 1) + j]; }

  void pivot(int pr, int pc) {
    double* prow = row(pr);
    const double inv = 1.0 / prow[pc];
    for (int j = 0; j <= n; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (int i = 0; i <= m; ++i) {
      if (i == pr) continue;
      double* r = row(i);
      const double f = r[pc];
      if (f == 0.0) continue;
      for (int j = 0; j <= n; ++j) r[j] -= f * prow[j];
      r[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  // One simplex phase on the current objective row. Returns false when the
  // phase detected unboundedness.
  bool run(int max_iter, int& used_iter) {
    const int bland_after = max_iter / 2;
    for (;;) {
      if (used_iter > max_iter) throw std::runtime_error("simplex: iteration budget exceeded");
      const bool bland = used_iter > bland_after;
      const double* obj = row(m);
      int pc = -1;
      if (bland) {
        for (int j = 0; j < n; ++j)
          if (can_enter[j] && obj[j] < -kPivotTol) {
            pc = j;
            break;
          }
      } else {
        double best = -kPivotTol;
        for (int j = 0; j < n; ++j)
          if (can_enter[j] && obj[j] < best) {
            best = obj[j];
            pc = j;
          }
      }
      if (pc < 0) return true;  // optimal for this phase

      int pr = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double col = at(i, pc);
        if (col > kPivotTol) {
          const double ratio = at(i, n) / col;
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol && (pr < 0 || basis[i] < basis[pr]))) {
            best_ratio = ratio;
            pr = i;
          }
        }
      }
      if (pr < 0) return false;  // unbounded direction
      pivot(pr, pc);
      ++used_iter;
    }
  }
};

}  // namespace

LpResult solve_lp(const std::vector<double>& c,
                  const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& rhs) {
  const int d = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());
  if (rhs.size() != rows.size()) throw std::invalid_argument("solve_lp: rows/rhs mismatch");

  // Free variables are split x = u - v. Column order: u(d), v(d), slack(m),
  // artificials (one per negative-RHS row).
  int n_art = 0;
  for (double b : rhs)
    if (b < 0.0) ++n_art;
  const int n = 2 * d + m + n_art;

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.t.assign(static_cast<std::size_t>(m + 1) * (n + 1), 0.0);
  tab.basis.assign(m, -1);
  tab.can_enter.assign(n, true);

  int art = 2 * d + m;
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != d)
      throw std::invalid_argument("solve_lp: row dimension mismatch");
    const double sign = rhs[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < d; ++j) {
      tab.at(i, j) = sign * rows[i][j];
      tab.at(i, d + j) = -sign * rows[i][j];
    }
    tab.at(i, 2 * d + i) = sign;  // slack (negated with the row)
    tab.at(i, n) = sign * rhs[i];
    if (rhs[i] < 0.0) {
      tab.at(i, art) = 1.0;
      tab.basis[i] = art;
      ++art;
    } else {
      tab.basis[i] = 2 * d + i;
    }
  }

  const int max_iter = 400 + 60 * (m + n);
  int used_iter = 0;

  if (n_art > 0) {
    // Phase 1: minimize the sum of artificials. Objective row = -sum of rows
    // whose basic variable is artificial (reduced costs w.r.t. the basis).
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] >= 2 * d + m) {
        double* obj = tab.row(m);
        const double* r = tab.row(i);
        for (int j = 0; j <= n; ++j) obj[j] -= r[j];
      }
    }
    if (!tab.run(max_iter, used_iter))
      throw std::runtime_error("simplex: phase 1 unbounded");  // cannot happen
    if (tab.at(m, n) < -kPhase1Tol) {
      LpResult res;
      res.status = LpStatus::Infeasible;
      res.iterations = used_iter;
      return res;
    }
    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] >= 2 * d + m) {
        int pc = -1;
        for (int j = 0; j < 2 * d + m; ++j)
          if (std::abs(tab.at(i, j)) > kPivotTol) {
            pc = j;
            break;
          }
        if (pc >= 0) tab.pivot(i, pc);
        // else: redundant row; the artificial stays basic at zero.
      }
    }
    for (int j = 2 * d + m; j < n; ++j) tab.can_enter[j] = false;
    // Reset the objective row for phase 2.
    double* obj = tab.row(m);
    for (int j = 0; j <= n; ++j) obj[j] = 0.0;
  }

  // Phase 2 objective: reduced costs of min c.(u - v) w.r.t. current basis.
  {
    double* obj = tab.row(m);
    for (int j = 0; j < d; ++j) {
      obj[j] += c[j];
      obj[d + j] -= c[j];
    }
    for (int i = 0; i < m; ++i) {
      const int bj = tab.basis[i];
      double coef = 0.0;
      if (bj < d)
        coef = c[bj];
      else if (bj < 2 * d)
        coef = -c[bj - d];
      if (coef != 0.0) {
        const double* r = tab.row(i);
        for (int j = 0; j <= n; ++j) obj[j] -= coef * r[j];
      }
    }
  }

  LpResult res;
  if (!tab.run(max_iter, used_iter)) {
    res.status = LpStatus::Unbounded;
    res.iterations = used_iter;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.x.assign(d, 0.0);
  for (int i = 0; i < m; ++i) {
    const int bj = tab.basis[i];
    const double v = tab.at(i, n);
    if (bj < d)
      res.x[bj] += v;
    else if (bj < 2 * d)
      res.x[bj - d] -= v;
  }
  double z = 0.0;
  for (int j = 0; j < d; ++j) z += c[j] * res.x[j];
  res.cost = z;
  res.iterations = used_iter;
  return res;
}

}  // namespace rcc
