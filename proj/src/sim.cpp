#include "rcc/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rcc {

void SimConfig::validate() const {
  if (max_rounds < 1) throw std::invalid_argument("SimConfig: max_rounds >= 1");
  if (max_certificates < 1) throw std::invalid_argument("SimConfig: max_certificates >= 1");
}

int halt_threshold(const EdgeSchedule& schedule, HaltMode mode) {
  if (mode == HaltMode::TwoD1) {
    if (schedule.mode != EdgeSchedule::Mode::Static)
      throw std::invalid_argument("halt_threshold: 2D+1 requires a static schedule");
    return 2 * diameter(schedule.n, schedule.edges) + 1;
  }
  return 2 * schedule.n * schedule.connectivity_window + 1;
}

namespace {

struct NodeRoundLog {
  std::vector<TraceEvent> events;
  std::optional<NodeMessage> outgoing;
};

TraceEvent snapshot_event(std::int64_t t, const ConsensusNode& node, EventKind kind) {
  TraceEvent ev;
  ev.t = t;
  ev.node = node.id();
  ev.kind = kind;
  ev.cost = node.basis_cost();
  ev.basis_size = static_cast<int>(node.basis().size());
  ev.k = node.verification_counter();
  ev.point = node.candidate().coords();
  return ev;
}

}  // namespace

SimOutcome run_simulation(std::vector<ConsensusNode>& nodes, const EdgeSchedule& schedule,
                          const SimConfig& config) {
  config.validate();
  schedule.validate();
  const int n = static_cast<int>(nodes.size());
  if (n != schedule.n) throw std::invalid_argument("run_simulation: node count mismatch");
  if (!config.force_without_ujsc &&
      !check_ujsc(schedule, schedule.connectivity_window))
    throw std::invalid_argument(
        "run_simulation: schedule is not uniformly jointly strongly connected");

  SimOutcome out;
  // Mailboxes: latest message delivered per (receiver, sender).
  std::vector<std::vector<std::optional<NodeMessage>>> mailbox(
      static_cast<std::size_t>(n), std::vector<std::optional<NodeMessage>>(n));
  std::vector<NodeMessage> published;
  published.reserve(n);
  std::vector<std::int64_t> freeze_round(n, -1);
  std::vector<std::int64_t> halt_round(n, -1);

  // Round 0: initialization events. Every node publishes its initial basis.
  for (int i = 0; i < n; ++i) {
    published.push_back(nodes[static_cast<std::size_t>(i)].current_message());
    out.trace.push_back(snapshot_event(0, nodes[static_cast<std::size_t>(i)], EventKind::Optimize));
    out.trace.push_back(snapshot_event(0, nodes[static_cast<std::size_t>(i)], EventKind::Transmit));
    if (nodes[static_cast<std::size_t>(i)].frozen()) freeze_round[i] = 0;
  }

  Rng order_rng = derive_stream(config.master_seed, "round-order");

  std::int64_t processed = 0;
  for (std::int64_t t = 1; t <= config.max_rounds; ++t) {
    bool all_halted = true;
    for (const auto& node : nodes) all_halted = all_halted && node.halted();
    if (all_halted) break;
    processed = t;

    // Deliveries for this round are fixed before any node executes.
    std::vector<bool> live_in(static_cast<std::size_t>(n), false);
    for (const auto& [from, to] : schedule.realized(t)) {
      mailbox[static_cast<std::size_t>(to)][static_cast<std::size_t>(from)] =
          published[static_cast<std::size_t>(from)];
      live_in[static_cast<std::size_t>(to)] = true;
    }

    std::optional<bool> oracle_all_frozen;
    if (config.scenario == ScenarioMode::Oracle) {
      bool all_frozen = true;
      for (const auto& node : nodes) all_frozen = all_frozen && node.frozen();
      oracle_all_frozen = all_frozen;
    }

    const bool do_verify =
        config.phases == PhaseMode::Combined || (t % 2 == 1);
    const bool do_optimize =
        config.phases == PhaseMode::Combined || (t % 2 == 0);

    std::vector<NodeRoundLog> logs(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (config.shuffled_order) {
      for (int i = n - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(order_rng.uniform_int(0, i))]);
    }

    auto process_node = [&](int i) {
      ConsensusNode& node = nodes[static_cast<std::size_t>(i)];
      NodeRoundLog& log = logs[static_cast<std::size_t>(i)];
      if (node.halted()) return;

      std::vector<NodeMessage> incoming;
      for (int s = 0; s < n; ++s)
        if (mailbox[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)])
          incoming.push_back(*mailbox[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)]);

      const bool was_frozen = node.frozen();
      const bool saw_all_frozen = node.all_frozen_seen();
      node.update_freeze(incoming, oracle_all_frozen);

      if (do_verify) {
        node.run_verification();
        log.events.push_back(snapshot_event(t, node, EventKind::Verify));
      }
      if (do_optimize) {
        const bool count_round =
            config.count_idle_rounds || live_in[static_cast<std::size_t>(i)];
        log.outgoing = node.run_optimization(incoming, count_round);
        log.events.push_back(snapshot_event(t, node, EventKind::Optimize));
        if (log.outgoing)
          log.events.push_back(snapshot_event(t, node, EventKind::Transmit));
        if (node.check_halt()) {
          node.halt();
          log.events.push_back(snapshot_event(t, node, EventKind::Halt));
        }
      }
      if ((!was_frozen && node.frozen()) || (!saw_all_frozen && node.all_frozen_seen()))
        log.events.push_back(snapshot_event(t, node, EventKind::Freeze));
    };

    if (config.parallel_nodes) {
#ifdef _OPENMP
      std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
      for (int idx = 0; idx < n; ++idx) {
        try {
          process_node(order[static_cast<std::size_t>(idx)]);
        } catch (...) {
#pragma omp critical
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
#else
      for (int idx = 0; idx < n; ++idx) process_node(order[static_cast<std::size_t>(idx)]);
#endif
    } else {
      for (int idx = 0; idx < n; ++idx) process_node(order[static_cast<std::size_t>(idx)]);
    }

    // Publish after the whole round so processing order cannot matter.
    for (int i = 0; i < n; ++i) {
      const auto& log = logs[static_cast<std::size_t>(i)];
      if (log.outgoing) published[static_cast<std::size_t>(i)] = *log.outgoing;
      // Flags travel with deliveries even when the basis is unchanged.
      published[static_cast<std::size_t>(i)].frozen = nodes[static_cast<std::size_t>(i)].frozen();
      published[static_cast<std::size_t>(i)].all_frozen_seen =
          nodes[static_cast<std::size_t>(i)].all_frozen_seen();
      for (const auto& ev : log.events) {
        if (ev.kind == EventKind::Halt && halt_round[i] < 0) halt_round[i] = t;
        if (ev.kind == EventKind::Freeze && freeze_round[i] < 0) freeze_round[i] = t;
        out.trace.push_back(ev);
      }
    }
  }

  out.rounds = processed;
  out.all_halted = true;
  for (const auto& node : nodes) out.all_halted = out.all_halted && node.halted();

  out.solutions.reserve(n);
  out.node_stats.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto& node = nodes[static_cast<std::size_t>(i)];
    out.solutions.push_back(node.solution().value_or(node.candidate()));
    NodeRunStats st;
    st.node = i;
    st.transmissions = node.transmissions();
    st.verifications = node.verification_counter();
    st.halt_round = halt_round[i];
    st.freeze_round = freeze_round[i];
    st.basis_size_violations = node.basis_size_violations();
    out.node_stats.push_back(st);
  }

  out.consensus = true;
  for (int i = 1; i < n; ++i)
    out.consensus = out.consensus &&
                    out.solutions[static_cast<std::size_t>(i)].approx_equal(
                        out.solutions[0], nodes[0].space().d_int, 1e-7);
  out.consensus_cost = nodes.empty() ? 0.0 : cost(nodes[0].objective(), out.solutions[0]);
  return out;
}

std::string event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Verify:
      return "verify";
    case EventKind::Optimize:
      return "optimize";
    case EventKind::Transmit:
      return "transmit";
    case EventKind::Halt:
      return "halt";
    case EventKind::Freeze:
      return "freeze";
  }
  return "?";
}

std::string trace_to_csv(const std::vector<TraceEvent>& trace) {
  std::string csv = "t,node,event,cost,basis_size,k\n";
  char buf[160];
  for (const auto& ev : trace) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%s,%.17g,%d,%lld\n",
                  static_cast<long long>(ev.t), ev.node, event_kind_name(ev.kind).c_str(),
                  ev.cost, ev.basis_size, static_cast<long long>(ev.k));
    csv += buf;
  }
  return csv;
}

}  // namespace rcc
