#include "rcc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rcc/simplex.hpp"

namespace rcc {

namespace {

constexpr double kPruneTol = 1e-9;     // bound-vs-incumbent pruning margin
constexpr double kBasisMargin = 1e-9;  // "strictly decreases" margin for drop-one
constexpr double kResolveTol = 1e-7;   // basis re-solve identity tolerance
constexpr double kRhsTarget = 100.0;   // rows are scaled so |rhs| stays moderate

// Row matrix in solver scale. Explicit system rows first, then box rows,
// then scratch rows (branch bounds, cost cuts, coordinate fixes).
struct Workspace {
  MixedIntegerSpace space;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  void push_row(const std::vector<double>& a, double b) {
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    scale = std::max(scale, std::abs(b) / kRhsTarget);
    std::vector<double> r(a);
    for (double& v : r) v /= scale;
    rows.push_back(std::move(r));
    rhs.push_back(b / scale);
  }

  void push_unit_row(int j, double sign, double bound) {
    std::vector<double> r(space.dim(), 0.0);
    r[j] = sign;
    push_row(r, bound);
  }

  void pop_row() {
    rows.pop_back();
    rhs.pop_back();
  }
};

Workspace make_workspace(const ConstraintSystem& system, const SolverConfig& config,
                         bool relax_integrality) {
  Workspace ws;
  ws.space = relax_integrality ? MixedIntegerSpace(0, system.dim()) : system.space;
  for (const auto& c : system.constraints) ws.push_row(c.a, c.b);
  if (config.box_halfwidth > 0.0) {
    for (int j = 0; j < system.dim(); ++j) {
      ws.push_unit_row(j, 1.0, config.box_halfwidth);
      ws.push_unit_row(j, -1.0, config.box_halfwidth);
    }
  }
  return ws;
}

struct BnbResult {
  SolveStatus status = SolveStatus::Infeasible;
  double cost = 0.0;
  std::vector<double> x;
  std::int64_t nodes = 0;
};

// Depth-first branch and bound over the workspace rows. Branches on the
// most fractional integer coordinate (ties to the lowest index), floor
// branch first. In decision mode the search stops at the first integral
// point with cost strictly below the cutoff.
class Bnb {
 public:
  Bnb(Workspace& ws, const std::vector<double>& objective, const SolverConfig& config,
      std::optional<double> cutoff, bool decision)
      : ws_(ws), c_(objective), cfg_(config), cutoff_(cutoff), decision_(decision) {}

  BnbResult run() {
    dfs();
    BnbResult r;
    r.nodes = nodes_;
    if (limit_hit_) {
      r.status = SolveStatus::NodeLimit;
    } else if (unbounded_) {
      r.status = SolveStatus::Unbounded;
    } else if (!has_inc_) {
      r.status = SolveStatus::Infeasible;
    } else {
      r.status = SolveStatus::Optimal;
      r.cost = inc_cost_;
      r.x = inc_x_;
    }
    return r;
  }

 private:
  bool stopping() const {
    return limit_hit_ || unbounded_ || (decision_ && has_inc_);
  }

  void dfs() {
    if (stopping()) return;
    if (++nodes_ > cfg_.max_bb_nodes) {
      limit_hit_ = true;
      return;
    }
    LpResult lp = solve_lp(c_, ws_.rows, ws_.rhs);
    if (lp.status == LpStatus::Infeasible) return;
    if (lp.status == LpStatus::Unbounded) {
      unbounded_ = true;
      return;
    }
    if (has_inc_ && lp.cost >= inc_cost_ - kPruneTol) return;
    if (cutoff_ && lp.cost >= *cutoff_) return;

    // Most fractional integer coordinate; below int_tol counts as integral.
    int bj = -1;
    double bj_dist = cfg_.int_tol;
    for (int j = 0; j < ws_.space.d_int; ++j) {
      const double frac = lp.x[j] - std::floor(lp.x[j]);
      const double dist = std::min(frac, 1.0 - frac);
      if (dist > bj_dist) {
        bj_dist = dist;
        bj = j;
      }
    }

    if (bj < 0) {
      std::vector<double> x = lp.x;
      for (int j = 0; j < ws_.space.d_int; ++j) x[j] = std::round(x[j]);
      double cost_x = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) cost_x += c_[j] * x[j];
      if (!has_inc_ || cost_x < inc_cost_) {
        if (!decision_ || !cutoff_ || cost_x < *cutoff_) {
          has_inc_ = true;
          inc_cost_ = cost_x;
          inc_x_ = std::move(x);
        }
      }
      return;
    }

    const double f = std::floor(lp.x[bj]);
    ws_.push_unit_row(bj, 1.0, f);  // floor branch first
    dfs();
    ws_.pop_row();
    if (stopping()) return;
    ws_.push_unit_row(bj, -1.0, -(f + 1.0));
    dfs();
    ws_.pop_row();
  }

  Workspace& ws_;
  const std::vector<double>& c_;
  const SolverConfig& cfg_;
  std::optional<double> cutoff_;
  bool decision_ = false;

  std::int64_t nodes_ = 0;
  bool limit_hit_ = false;
  bool unbounded_ = false;
  bool has_inc_ = false;
  double inc_cost_ = std::numeric_limits<double>::infinity();
  std::vector<double> inc_x_;
};

// True iff the system (plus box) admits a point with cost < cutoff.
bool exists_point_below(const ConstraintSystem& system, double cutoff,
                        const SolverConfig& config, std::int64_t& nodes_acc) {
  Workspace ws = make_workspace(system, config, false);
  Bnb search(ws, system.objective, config, cutoff, true);
  BnbResult r = search.run();
  nodes_acc += r.nodes;
  if (r.status == SolveStatus::NodeLimit)
    throw std::runtime_error("solver: node limit exceeded in basis extraction");
  if (r.status == SolveStatus::Unbounded) return true;
  return r.status == SolveStatus::Optimal;
}

SolveResult solve_impl(const ConstraintSystem& system, const SolverConfig& config,
                       bool relax_integrality, bool want_basis, bool allow_lazy);

// Deterministic lazy row activation for many-row systems: solve a working
// subset, add the most violated rows at its optimum, repeat. Exact because
// the final point is feasible for every row and subset optima only grow.
SolveResult solve_lazy(const ConstraintSystem& system, const SolverConfig& config,
                       bool relax_integrality, bool want_basis) {
  constexpr int kAddPerIter = 16;
  std::vector<bool> active(system.size(), false);
  ConstraintSystem sub(system.space, system.objective);
  SolveResult res;
  for (;;) {
    sub.constraints.clear();
    for (std::size_t i = 0; i < system.size(); ++i)
      if (active[i]) sub.constraints.push_back(system.constraints[i]);
    const std::int64_t nodes_before = res.bb_nodes;
    SolveResult r = solve_impl(sub, config, relax_integrality, false, false);
    r.bb_nodes += nodes_before;
    res = std::move(r);
    if (res.status == SolveStatus::Unbounded && sub.size() < system.size()) {
      // Subset unbounded while rows remain: activate more rows and retry.
      int added = 0;
      for (std::size_t i = 0; i < system.size() && added < kAddPerIter; ++i)
        if (!active[i]) {
          active[i] = true;
          ++added;
        }
      continue;
    }
    if (res.status != SolveStatus::Optimal) return res;

    // Gather the most violated inactive rows at the subset optimum.
    std::vector<std::pair<double, std::size_t>> viol;
    for (std::size_t i = 0; i < system.size(); ++i) {
      if (active[i]) continue;
      const double v = residual(system.constraints[i], *res.point);
      if (v > config.feas_tol) viol.emplace_back(-v, i);  // negated: sort ascending
    }
    if (viol.empty()) break;
    std::sort(viol.begin(), viol.end());
    const int take = std::min<std::size_t>(kAddPerIter, viol.size());
    for (int t = 0; t < take; ++t) active[viol[t].second] = true;
  }
  if (want_basis) res.basis = compute_basis(sub, res, config);
  return res;
}

SolveResult solve_impl(const ConstraintSystem& system, const SolverConfig& config,
                       bool relax_integrality, bool want_basis, bool allow_lazy) {
  config.validate();
  const int d = system.dim();
  if (static_cast<int>(system.objective.size()) != d)
    throw std::invalid_argument("solve: objective dimension mismatch");
  for (const auto& c : system.constraints)
    if (c.dim() != d) throw std::invalid_argument("solve: constraint dimension mismatch");

  if (allow_lazy && static_cast<int>(system.size()) > config.lazy_threshold)
    return solve_lazy(system, config, relax_integrality, want_basis);

  Workspace ws = make_workspace(system, config, relax_integrality);
  SolveResult res;

  Bnb root(ws, system.objective, config, std::nullopt, false);
  BnbResult b0 = root.run();
  res.bb_nodes = b0.nodes;
  if (b0.status != SolveStatus::Optimal) {
    res.status = b0.status;
    return res;
  }
  const double cost_opt = b0.cost;

  // Lexicographic refinement: pin the optimal cost, then minimize each
  // coordinate in turn subject to the previously fixed ones.
  const double cost_slack = 1e-9 * std::max(1.0, std::abs(cost_opt));
  ws.push_row(system.objective, cost_opt + cost_slack);
  std::vector<double> x = b0.x;
  std::vector<double> unit(d, 0.0);
  for (int j = 0; j < d; ++j) {
    unit[j] = 1.0;
    Bnb refine(ws, unit, config, std::nullopt, false);
    BnbResult rj = refine.run();
    unit[j] = 0.0;
    res.bb_nodes += rj.nodes;
    if (rj.status == SolveStatus::NodeLimit) {
      res.status = SolveStatus::NodeLimit;
      return res;
    }
    if (rj.status != SolveStatus::Optimal)
      throw std::runtime_error("solver: lexicographic refinement lost feasibility");
    x = rj.x;
    double v = x[j];
    if (ws.space.is_integer_coord(j)) v = std::round(v);
    if (j + 1 < d) {
      const double w = ws.space.is_integer_coord(j) ? 0.25 : 1e-9 * std::max(1.0, std::abs(v));
      ws.push_unit_row(j, 1.0, v + w);
      ws.push_unit_row(j, -1.0, -(v - w));
    }
  }
  for (int j = 0; j < ws.space.d_int; ++j) x[j] = std::round(x[j]);

  Point pt(ws.space, x);
  for (const auto& c : system.constraints) {
    if (residual(c, pt) > config.feas_tol)
      throw std::runtime_error("solver: returned point violates an input row (residual " +
                               std::to_string(residual(c, pt)) + ")");
  }

  res.status = SolveStatus::Optimal;
  res.cost = cost(system.objective, pt);
  res.point = std::move(pt);
  if (config.box_halfwidth > 0.0) {
    for (int j = 0; j < d; ++j)
      if (std::abs(x[j]) >= config.box_halfwidth * (1.0 - 1e-9)) res.box_active = true;
  }
  if (want_basis) res.basis = compute_basis(system, res, config);
  return res;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(feas_tol > 0.0) || !(int_tol > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  if (max_bb_nodes < 1) throw std::invalid_argument("SolverConfig: max_bb_nodes >= 1");
  if (box_halfwidth < 0.0) throw std::invalid_argument("SolverConfig: box_halfwidth >= 0");
}

SolveResult solve_mip(const ConstraintSystem& system, const SolverConfig& config) {
  return solve_impl(system, config, false, true, true);
}

SolveResult solve_lp_relaxation(const ConstraintSystem& system, const SolverConfig& config) {
  return solve_impl(system, config, true, true, true);
}

Basis compute_basis(const ConstraintSystem& system, const SolveResult& result,
                    const SolverConfig& config) {
  if (result.status != SolveStatus::Optimal || !result.point)
    throw std::invalid_argument("compute_basis: result must be Optimal");
  const double j_full = result.cost;
  const std::size_t m = system.size();
  std::int64_t nodes = 0;

  std::vector<bool> in_basis(m, false);
  ConstraintSystem reduced(system.space, system.objective);
  for (std::size_t drop = 0; drop < m; ++drop) {
    reduced.constraints.clear();
    for (std::size_t i = 0; i < m; ++i)
      if (i != drop) reduced.constraints.push_back(system.constraints[i]);
    in_basis[drop] = exists_point_below(reduced, j_full - kBasisMargin, config, nodes);
  }

  Basis basis;
  basis.cost = j_full;
  for (std::size_t i = 0; i < m; ++i)
    if (in_basis[i]) basis.constraints.push_back(system.constraints[i]);

  if (basis.size() == m) return basis;  // identity holds trivially

  // Re-solve identity J(basis) = J(system). Under degeneracy the drop-one
  // set can undershoot; repair by re-adding the most violated row.
  ConstraintSystem check(system.space, system.objective);
  for (std::size_t rep = 0; rep <= m; ++rep) {
    check.constraints = basis.constraints;
    SolveResult rc = solve_impl(check, config, false, false, false);
    if (rc.status != SolveStatus::Optimal)
      throw std::runtime_error("compute_basis: basis re-solve not optimal");
    if (rc.cost >= j_full - kResolveTol) return basis;
    double worst = config.feas_tol;
    std::size_t worst_i = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (in_basis[i]) continue;
      const double v = residual(system.constraints[i], *rc.point);
      if (v > worst) {
        worst = v;
        worst_i = i;
      }
    }
    if (worst_i == m) break;
    in_basis[worst_i] = true;
    basis.constraints.clear();
    for (std::size_t i = 0; i < m; ++i)
      if (in_basis[i]) basis.constraints.push_back(system.constraints[i]);
  }
  throw std::runtime_error("compute_basis: re-solve identity unreachable");
}

Point lex_tie_break(const std::vector<Point>& candidates, const std::vector<double>& costs) {
  if (candidates.empty()) throw std::invalid_argument("lex_tie_break: empty candidate list");
  if (candidates.size() != costs.size())
    throw std::invalid_argument("lex_tie_break: size mismatch");
  auto lex_less = [](const Point& a, const Point& b) {
    for (int j = 0; j < a.dim(); ++j) {
      if (a[j] < b[j] - 1e-9) return true;
      if (a[j] > b[j] + 1e-9) return false;
    }
    return false;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (costs[i] < costs[best] - 1e-9) {
      best = i;
    } else if (costs[i] <= costs[best] + 1e-9 && lex_less(candidates[i], candidates[best])) {
      best = i;
    }
  }
  return candidates[best];
}

}  // namespace rcc
