#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rcc/rng.hpp"

namespace rcc {

using Edge = std::pair<int, int>;  // directed (from, to), node ids 0-based

/// Time-varying directed communication schedule.
struct EdgeSchedule {
  enum class Mode { Static, Periodic, RandomLoss };

  Mode mode = Mode::Static;
  int n = 0;
  int connectivity_window = 1;  // L

  std::vector<Edge> edges;                       // Static / RandomLoss base set
  std::vector<std::vector<Edge>> period;         // Periodic
  double loss_probability = 0.0;                 // RandomLoss
  std::uint64_t loss_seed = 0;                   // RandomLoss

  /// Live edges at round t (loss draws come from per-edge substreams).
  std::vector<Edge> realized(std::int64_t t) const;

  void validate() const;
};

EdgeSchedule make_static_schedule(int n, std::vector<Edge> edges, int window = 1);
EdgeSchedule make_periodic_schedule(int n, std::vector<std::vector<Edge>> sets, int window);
EdgeSchedule make_random_loss_schedule(int n, std::vector<Edge> base, double loss_probability,
                                       std::uint64_t seed, int window = 1);

/// Strong connectivity of a static directed edge set.
bool strongly_connected(int n, const std::vector<Edge>& edges);

/// Uniform joint strong connectivity: the union graph over every window of
/// `window` consecutive rounds is strongly connected. Periodic schedules are
/// checked over one period; RandomLoss requires a strongly connected base
/// set and loss probability < 1.
bool check_ujsc(const EdgeSchedule& schedule, int window);

/// Directed diameter (max over ordered pairs of BFS distance).
/// Throws if the graph is not strongly connected.
int diameter(int n, const std::vector<Edge>& edges);

/// Random k-nearest-neighbor digraph: n points uniform in the unit square,
/// each linked to its k nearest neighbors, every edge mirrored. Resamples
/// until the graph is strongly connected with exactly the target diameter
/// (throws after 10^4 attempts).
EdgeSchedule generate_knn_digraph(int n, int degree, int target_diameter, Rng& rng);

}  // namespace rcc
