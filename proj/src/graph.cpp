#include "rcc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

namespace rcc {

namespace {

void check_ids(int n, const std::vector<Edge>& edges) {
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("EdgeSchedule: node id out of range");
    if (u == v) throw std::invalid_argument("EdgeSchedule: self-loop");
  }
}

std::vector<int> bfs_dist(int n, const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> dist(n, -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

std::vector<std::vector<int>> adjacency(int n, const std::vector<Edge>& edges, bool reverse) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : edges) adj[reverse ? v : u].push_back(reverse ? u : v);
  return adj;
}

}  // namespace

void EdgeSchedule::validate() const {
  if (n < 1) throw std::invalid_argument("EdgeSchedule: n >= 1");
  if (connectivity_window < 1) throw std::invalid_argument("EdgeSchedule: window >= 1");
  check_ids(n, edges);
  for (const auto& set : period) check_ids(n, set);
  if (mode == Mode::Periodic && period.empty())
    throw std::invalid_argument("EdgeSchedule: empty period");
  if (mode == Mode::RandomLoss && (loss_probability < 0.0 || loss_probability > 1.0))
    throw std::invalid_argument("EdgeSchedule: loss probability in [0,1]");
}

std::vector<Edge> EdgeSchedule::realized(std::int64_t t) const {
  switch (mode) {
    case Mode::Static:
      return edges;
    case Mode::Periodic:
      return period[static_cast<std::size_t>(t % static_cast<std::int64_t>(period.size()))];
    case Mode::RandomLoss: {
      std::vector<Edge> live;
      live.reserve(edges.size());
      for (std::size_t k = 0; k < edges.size(); ++k) {
        Rng r = derive_stream(loss_seed, "edge-loss", k, static_cast<std::uint64_t>(t));
        if (r.uniform01() >= loss_probability) live.push_back(edges[k]);
      }
      return live;
    }
  }
  return {};
}

EdgeSchedule make_static_schedule(int n, std::vector<Edge> edges, int window) {
  EdgeSchedule s;
  s.mode = EdgeSchedule::Mode::Static;
  s.n = n;
  s.edges = std::move(edges);
  s.connectivity_window = window;
  s.validate();
  return s;
}

EdgeSchedule make_periodic_schedule(int n, std::vector<std::vector<Edge>> sets, int window) {
  EdgeSchedule s;
  s.mode = EdgeSchedule::Mode::Periodic;
  s.n = n;
  s.period = std::move(sets);
  s.connectivity_window = window;
  s.validate();
  return s;
}

EdgeSchedule make_random_loss_schedule(int n, std::vector<Edge> base, double loss_probability,
                                       std::uint64_t seed, int window) {
  EdgeSchedule s;
  s.mode = EdgeSchedule::Mode::RandomLoss;
  s.n = n;
  s.edges = std::move(base);
  s.loss_probability = loss_probability;
  s.loss_seed = seed;
  s.connectivity_window = window;
  s.validate();
  return s;
}

bool strongly_connected(int n, const std::vector<Edge>& edges) {
  if (n == 1) return true;
  const auto fwd = bfs_dist(n, adjacency(n, edges, false), 0);
  const auto bwd = bfs_dist(n, adjacency(n, edges, true), 0);
  for (int v = 0; v < n; ++v)
    if (fwd[v] < 0 || bwd[v] < 0) return false;
  return true;
}

bool check_ujsc(const EdgeSchedule& schedule, int window) {
  schedule.validate();
  if (window < 1) throw std::invalid_argument("check_ujsc: window >= 1");
  switch (schedule.mode) {
    case EdgeSchedule::Mode::Static:
      return strongly_connected(schedule.n, schedule.edges);
    case EdgeSchedule::Mode::RandomLoss:
      return schedule.loss_probability < 1.0 &&
             strongly_connected(schedule.n, schedule.edges);
    case EdgeSchedule::Mode::Periodic: {
      const int p = static_cast<int>(schedule.period.size());
      for (int start = 0; start < p; ++start) {
        std::vector<Edge> merged;
        std::set<Edge> seen;
        for (int i = 0; i < window; ++i)
          for (const auto& e : schedule.period[static_cast<std::size_t>((start + i) % p)])
            if (seen.insert(e).second) merged.push_back(e);
        if (!strongly_connected(schedule.n, merged)) return false;
      }
      return true;
    }
  }
  return false;
}

int diameter(int n, const std::vector<Edge>& edges) {
  if (!strongly_connected(n, edges)) throw std::invalid_argument("diameter: not strongly connected");
  const auto adj = adjacency(n, edges, false);
  int diam = 0;
  for (int s = 0; s < n; ++s) {
    const auto dist = bfs_dist(n, adj, s);
    for (int v = 0; v < n; ++v) diam = std::max(diam, dist[v]);
  }
  return diam;
}

EdgeSchedule generate_knn_digraph(int n, int degree, int target_diameter, Rng& rng) {
  if (degree < 1 || degree >= n)
    throw std::invalid_argument("generate_knn_digraph: need 1 <= degree < n");
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::pair<double, double>> pos(n);
    for (auto& p : pos) {
      p.first = rng.uniform01();
      p.second = rng.uniform01();
    }
    std::set<Edge> edge_set;
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<double, int>> by_dist;
      by_dist.reserve(n - 1);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dx = pos[i].first - pos[j].first;
        const double dy = pos[i].second - pos[j].second;
        by_dist.emplace_back(dx * dx + dy * dy, j);
      }
      std::sort(by_dist.begin(), by_dist.end());
      for (int k = 0; k < degree; ++k) {
        const int j = by_dist[static_cast<std::size_t>(k)].second;
        edge_set.insert({i, j});
        edge_set.insert({j, i});
      }
    }
    std::vector<Edge> edges(edge_set.begin(), edge_set.end());
    if (!strongly_connected(n, edges)) continue;
    if (diameter(n, edges) != target_diameter) continue;
    return make_static_schedule(n, std::move(edges));
  }
  throw std::runtime_error("generate_knn_digraph: target diameter not reached within attempts");
}

}  // namespace rcc
