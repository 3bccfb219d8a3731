#include "rcc/node.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace rcc {

namespace {

std::uint64_t row_content_hash(const LinearConstraint& c) {
  std::vector<LinearConstraint> one{c};
  return fingerprint(one);
}

}  // namespace

ConsensusNode::ConsensusNode(int id, UncertainConstraintSet set, MixedIntegerSpace space,
                             std::vector<double> objective, NodeConfig config,
                             std::uint64_t master_seed)
    : id_(id),
      set_(std::move(set)),
      space_(space),
      objective_(std::move(objective)),
      config_(std::move(config)),
      verify_rng_(derive_stream(master_seed, "node-verify", static_cast<std::uint64_t>(id))),
      schedule_(config_.epsilon, config_.delta, 1),
      helly_(helly_number(space)) {
  set_.validate();
  if (!set_.empty() && set_.dim() != space_.dim())
    throw std::invalid_argument("ConsensusNode: set/space dimension mismatch");
  if (config_.halt_threshold < 1)
    throw std::invalid_argument("ConsensusNode: halt_threshold >= 1");

  if (config_.scenario != ScenarioMode::Off) {
    scenario_bound_m_ = scenario_bound(config_.epsilon, config_.delta, helly_);
    // Nothing to sample: the schedule is trivially frozen.
    if (set_.empty()) frozen_ = true;
  }

  // Nominal realization q_0: zero deviation / center point.
  ConstraintSystem initial(space_, objective_);
  initial.constraints = set_.nominal;
  SolveResult res = solve_mip(initial, config_.solver);
  if (res.status != SolveStatus::Optimal)
    throw std::runtime_error("ConsensusNode: initial solve not optimal");
  candidate_ = *res.point;
  basis_ = res.basis;
  if (static_cast<std::int64_t>(basis_.size()) > combinatorial_dimension(space_))
    ++basis_size_violations_;
  last_sent_fingerprint_ = fingerprint(basis_.constraints);
  last_solve_fingerprint_ = fingerprint(initial.constraints);
  transmissions_ = 1;  // the initial basis is published
}

void ConsensusNode::freeze_if_due() {
  if (frozen_ || set_.empty()) return;
  if (sample_size(schedule_) >= scenario_bound_m_) frozen_ = true;
}

void ConsensusNode::update_freeze(std::span<const NodeMessage> incoming,
                                  std::optional<bool> oracle_all_frozen) {
  if (config_.scenario == ScenarioMode::Off || halted_) return;
  freeze_if_due();
  if (config_.scenario == ScenarioMode::Oracle) {
    if (oracle_all_frozen.value_or(false)) all_frozen_seen_ = true;
    return;
  }
  // Piggyback: all neighbors and self must report frozen for a full
  // halt-threshold streak before the observation is trusted.
  bool all_now = frozen_;
  for (const auto& msg : incoming) all_now = all_now && msg.frozen;
  all_frozen_streak_ = all_now ? all_frozen_streak_ + 1 : 0;
  if (all_frozen_streak_ >= config_.halt_threshold) all_frozen_seen_ = true;
}

const std::vector<ViolationCertificate>& ConsensusNode::run_verification() {
  certificates_.clear();
  if (halted_) return certificates_;
  verification_pending_ = true;

  // Unchanged candidate already passed a verification; no sampling.
  if (previous_candidate_ &&
      candidate_.approx_equal(*previous_candidate_, space_.d_int, config_.unchanged_tol))
    return certificates_;

  if (set_.empty()) return certificates_;

  if (config_.scenario != ScenarioMode::Off) freeze_if_due();

  if (frozen_) {
    if (!frozen_cache_) {
      // First frozen verification draws the multisample that stays cached.
      FrozenCache cache;
      cache.count = sample_size(schedule_);
      cache.base_state = verify_rng_.next_u64();
      cache.sample_id_base = sample_counter_;
      sample_counter_ += cache.count;
      frozen_cache_ = cache;
    }
    certificates_ = scan_multisample(set_, frozen_cache_->base_state, frozen_cache_->count,
                                     frozen_cache_->sample_id_base, candidate_,
                                     config_.max_certificates, config_.feas_tol,
                                     config_.parallel_scan);
    return certificates_;
  }

  certificates_ = verify(candidate_, set_, schedule_, config_.max_certificates, verify_rng_,
                         sample_counter_, config_.feas_tol, config_.parallel_scan);
  return certificates_;
}

std::optional<NodeMessage> ConsensusNode::run_optimization(
    std::span<const NodeMessage> incoming, bool count_unchanged_round) {
  if (halted_) return std::nullopt;
  if (!verification_pending_)
    throw std::logic_error("ConsensusNode: optimization without preceding verification");
  verification_pending_ = false;

  // Local problem: certificate rows, own basis, incoming bases (deduped by
  // content so converged bases do not pile up duplicate rows).
  ConstraintSystem system(space_, objective_);
  std::unordered_set<std::uint64_t> seen;
  auto add_row = [&](const LinearConstraint& row) {
    if (seen.insert(row_content_hash(row)).second) system.constraints.push_back(row);
  };
  for (const auto& cert : certificates_)
    for (const auto& row : cert.violated) add_row(row);
  for (const auto& row : basis_.constraints) add_row(row);
  for (const auto& msg : incoming)
    for (const auto& row : msg.basis_rows) add_row(row);

  Point new_candidate = candidate_;
  Basis new_basis = basis_;
  const std::uint64_t key = fingerprint(system.constraints);
  if (key != last_solve_fingerprint_) {
    SolveResult res = solve_mip(system, config_.solver);
    if (res.status != SolveStatus::Optimal)
      throw std::runtime_error("ConsensusNode: local solve failed (status " +
                               std::to_string(static_cast<int>(res.status)) + ")");
    new_candidate = *res.point;
    new_basis = res.basis;
    last_solve_fingerprint_ = key;
    if (static_cast<std::int64_t>(new_basis.size()) > combinatorial_dimension(space_))
      ++basis_size_violations_;
  }

  const bool unchanged =
      new_candidate.approx_equal(candidate_, space_.d_int, config_.unchanged_tol);
  if (unchanged) {
    if (count_unchanged_round) ++unchanged_rounds_;
  } else {
    unchanged_rounds_ = 0;
  }
  previous_candidate_ = candidate_;
  candidate_ = new_candidate;
  basis_ = new_basis;

  const std::uint64_t basis_key = fingerprint(basis_.constraints);
  if (basis_key != last_sent_fingerprint_) {
    last_sent_fingerprint_ = basis_key;
    ++transmissions_;
    return current_message();
  }
  return std::nullopt;
}

void ConsensusNode::halt() {
  halted_ = true;
  solution_ = candidate_;
}

NodeMessage ConsensusNode::current_message() const {
  NodeMessage msg;
  msg.sender = id_;
  msg.basis_rows = basis_.constraints;
  msg.frozen = frozen_;
  msg.all_frozen_seen = all_frozen_seen_;
  return msg;
}

std::vector<LinearConstraint> ConsensusNode::frozen_realized_rows() const {
  if (!frozen_cache_) return {};
  return realize_multisample(set_, frozen_cache_->base_state, frozen_cache_->count,
                             frozen_cache_->sample_id_base);
}

}  // namespace rcc
