#ifndef INCSP_DIJKSTRA_HPP_
#define INCSP_DIJKSTRA_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include "incsp/model.hpp"

namespace incsp {

template <typename W>
constexpr W unreachable_weight() {
  if constexpr (std::is_floating_point_v<W>) {
    return std::numeric_limits<W>::infinity();
  } else {
    return std::numeric_limits<W>::max();
  }
}

template <typename W>
struct Arc {
  Vertex head;
  W weight;
};

// Plain adjacency-list digraph over dense vertex ids.
template <typename W>
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : adj_(n) {}

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }

  void add_edge(Vertex tail, Vertex head, W weight) {
    adj_.at(tail).push_back({head, weight});
    ++edges_;
  }

  const std::vector<Arc<W>>& out(Vertex v) const { return adj_[v]; }

 private:
  std::vector<std::vector<Arc<W>>> adj_;
  std::size_t edges_ = 0;
};

struct DijkstraStats {
  std::size_t settled = 0;
  std::size_t relaxations = 0;
};

// Shortest-path distances from `source`; unreachable_weight<W>() marks
// disconnected vertices. Weights must be non-negative.
template <typename W>
std::vector<W> dijkstra(const Digraph<W>& g, Vertex source, DijkstraStats* stats = nullptr) {
  constexpr W kInf = unreachable_weight<W>();
  std::vector<W> dist(g.vertex_count(), kInf);
  using Item = std::pair<W, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist.at(source) = W{0};
  heap.push({W{0}, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    if (stats) ++stats->settled;
    for (const auto& arc : g.out(u)) {
      W candidate = d + arc.weight;
      if (candidate < dist[arc.head]) {
        dist[arc.head] = candidate;
        heap.push({candidate, arc.head});
        if (stats) ++stats->relaxations;
      }
    }
  }
  return dist;
}

// Exact distances from `source` in G_t, as Distance values.
inline std::vector<Distance> exact_distances(std::span<const EdgeInsert> prefix, Vertex n,
                                             Vertex source) {
  Digraph<Weight> g(n);
  for (const auto& e : prefix) g.add_edge(e.tail, e.head, e.weight);
  auto raw = dijkstra(g, source);
  std::vector<Distance> out(n, kUnreachable);
  for (Vertex v = 0; v < n; ++v) {
    if (raw[v] != unreachable_weight<Weight>()) out[v] = static_cast<Distance>(raw[v]);
  }
  return out;
}

}  // namespace incsp

#endif  // INCSP_DIJKSTRA_HPP_
