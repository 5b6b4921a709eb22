#ifndef INCSP_OFFLINE_HPP_
#define INCSP_OFFLINE_HPP_

// Offline incremental (1+eps)-approximate SSSP over an insertion timeline.
//
// The timeline [0, m] is split recursively in halves. Node x (1 <= x <= m-1)
// owns the interval [x - lowbit(x), x + lowbit(x)]. A vertex is alive at x when
// its estimates at the two interval endpoints differ; only alive vertices get a
// fresh estimate at x, computed by Dijkstra on a small patch graph G'_x whose
// dead-tail edges are replaced by source edges. Estimates are rounded up to the
// fine grid. Per-vertex L tables then answer (v, t) queries by binary search.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "incsp/bucketing.hpp"
#include "incsp/dijkstra.hpp"
#include "incsp/model.hpp"

namespace incsp {

inline constexpr Time kUndefinedTime = std::numeric_limits<Time>::max();

inline Time lowbit(Time x) { return x & (~x + 1); }

inline Time node_left(Time x) { return x - lowbit(x); }
inline Time node_right(Time x) { return x + lowbit(x); }

// Depth of node x in the recursion tree over [0, m]; the root m/2 is level 1,
// times 0 and m are level 0.
inline unsigned node_level(Time x, Time m) {
  if (x == 0 || x == m) return 0;
  return static_cast<unsigned>(std::countr_zero(m) - std::countr_zero(x));
}

// The unique time in [a, b] of maximal 2-adic valuation: the root of the
// smallest subtree whose interval covers [a, b].
inline Time shallowest_midpoint(Time a, Time b) {
  if (a == 0 || a > b) {
    throw std::invalid_argument("shallowest_midpoint needs 1 <= a <= b");
  }
  for (int k = 31; k >= 0; --k) {
    const std::uint64_t step = std::uint64_t{1} << k;
    const std::uint64_t x = ((a + step - 1) / step) * step;
    if (x <= b) return static_cast<Time>(x);
  }
  return a;
}

// Midpoints from the root down to (excluding) x.
inline std::vector<Time> ancestors_of(Time x, Time m) {
  std::vector<Time> chain;
  Time cur = m / 2;
  Time step = m / 4;
  while (cur != x) {
    chain.push_back(cur);
    cur = x < cur ? cur - step : cur + step;
    step /= 2;
  }
  return chain;
}

// Edge lookup by id.
class EdgeCatalog {
 public:
  EdgeCatalog() = default;

  explicit EdgeCatalog(std::span<const EdgeInsert> edges) {
    for (const auto& e : edges) add(e);
  }

  void add(const EdgeInsert& e) {
    if (e.id >= slots_.size()) slots_.resize(e.id + 1);
    auto& slot = slots_[e.id];
    if (slot && !(*slot == e)) {
      throw ValidationError("conflicting definitions for edge id " + std::to_string(e.id));
    }
    slot = e;
  }

  bool contains(EdgeId id) const { return id < slots_.size() && slots_[id].has_value(); }

  const EdgeInsert& at(EdgeId id) const {
    if (!contains(id)) throw std::out_of_range("unknown edge id " + std::to_string(id));
    return *slots_[id];
  }

  std::size_t id_bound() const { return slots_.size(); }

 private:
  std::vector<std::optional<EdgeInsert>> slots_;
};

struct RecursionNode {
  Time left = 0;
  Time right = 0;
  unsigned level = 0;
  // Sorted by vertex id; the estimate of every vertex alive at this node.
  std::vector<std::pair<Vertex, EstimateIndex>> alive;
  // Sorted by edge id: arrived by the midpoint and head alive here.
  std::vector<EdgeId> alive_edges;

  const EstimateIndex* find(Vertex v) const {
    auto it = std::lower_bound(alive.begin(), alive.end(), v,
                               [](const auto& entry, Vertex key) { return entry.first < key; });
    if (it == alive.end() || it->first != v) return nullptr;
    return &it->second;
  }

  friend bool operator==(const RecursionNode&, const RecursionNode&) = default;
};

// Cumulative work, including every re-solve performed online.
struct BuildCounters {
  std::uint64_t solves = 0;
  std::uint64_t alive_edge_work = 0;
  std::uint64_t alive_vertex_work = 0;
  std::uint64_t scanned_edges = 0;
  std::uint64_t patch_edges = 0;
  std::uint64_t ancestor_lookups = 0;
  std::uint64_t dijkstra_settled = 0;
  std::uint64_t base_recomputes = 0;
};

struct QueryStats {
  std::size_t comparisons = 0;
};

struct OfflineOptions {
  // Record and finalize the per-vertex L tables (needed by query()).
  bool query_tables = true;
};

class OfflineStructure {
 public:
  using Options = OfflineOptions;

  OfflineStructure(Vertex n, Vertex source, std::shared_ptr<const BucketTable> table,
                   EdgeCatalog catalog, std::vector<EdgeId> order, Options options = {})
      : n_(n),
        source_(source),
        m_(static_cast<Time>(order.size())),
        table_(std::move(table)),
        catalog_(std::move(catalog)) {
    if (!table_) throw std::invalid_argument("missing bucket table");
    if (m_ < 2 || !is_power_of_two(m_)) {
      throw std::invalid_argument("sequence length must be a power of two >= 2");
    }
    if (table_->log2_m() != static_cast<unsigned>(std::countr_zero(m_))) {
      throw std::invalid_argument("bucket table built for a different sequence length");
    }
    if (source_ >= n_) throw std::invalid_argument("source out of range");
    nodes_.resize(m_);
    for (Time x = 1; x < m_; ++x) {
      nodes_[x].left = node_left(x);
      nodes_[x].right = node_right(x);
      nodes_[x].level = node_level(x, m_);
    }
    set_order(std::move(order));
    recording_ = options.query_tables;
    if (recording_) {
      L_.assign(n_, std::vector<Time>(table_->coarse_top() + 1, kUndefinedTime));
    }
    recompute_base();
    rebuild_subtree(m_ / 2);
    if (recording_) finalize_query_tables();
    recording_ = false;
  }

  Vertex n() const { return n_; }
  Vertex source() const { return source_; }
  Time m() const { return m_; }
  const BucketTable& table() const { return *table_; }
  std::shared_ptr<const BucketTable> shared_table() const { return table_; }
  const EdgeCatalog& catalog() const { return catalog_; }
  const std::vector<EdgeId>& order() const { return order_; }

  // Position of an edge in the current order; m + 1 when absent.
  Time position_of(EdgeId id) const {
    return id < position_.size() ? position_[id] : m_ + 1;
  }

  const RecursionNode& node(Time x) const {
    if (x == 0 || x >= m_) throw std::out_of_range("no recursion node at time " + std::to_string(x));
    return nodes_[x];
  }

  const std::vector<Distance>& base_m() const { return base_m_; }
  Distance base_zero(Vertex v) const { return v == source_ ? 0.0 : kUnreachable; }

  // d-hat^t(v) for any 0 <= t <= m: stored where v is alive, inherited otherwise.
  Distance estimate_at(Vertex v, Time t) const {
    check_vertex(v);
    if (t == 0) return base_zero(v);
    if (t == m_) return base_m_[v];
    if (t > m_) throw std::out_of_range("time beyond sequence length");
    if (const auto* e = nodes_[t].find(v)) return table_->value_of(*e);
    return ancestor_estimate(v, t);
  }

  // Estimate held by the lowest proper ancestor of x where v is alive, or the
  // base value when v is dead at the root (then base_0(v) == base_m(v)).
  // Vertices alive at a node are alive at all its ancestors, so the alive
  // ancestors form a prefix of the root-first chain.
  Distance ancestor_estimate(Vertex v, Time x) const {
    check_vertex(v);
    const auto chain = ancestors_of(x, m_);
    std::size_t lo = 0;
    std::size_t hi = chain.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (nodes_[chain[mid]].find(v)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo == 0) return base_m_[v];
    return table_->value_of(*nodes_[chain[lo - 1]].find(v));
  }

  bool has_query_tables() const { return tables_valid_; }

  const std::vector<Time>& query_table(Vertex v) const {
    check_vertex(v);
    if (!tables_valid_) throw std::logic_error("query tables are not current");
    return L_[v];
  }

  // (1+eps)-approximate d^t(v): the coarse cell of the first L_v entry <= t.
  Distance query(Vertex v, Time t, QueryStats* stats = nullptr) const {
    check_vertex(v);
    if (t > m_) throw std::out_of_range("query time beyond sequence length");
    if (!tables_valid_) throw std::logic_error("query tables are not current");
    if (v == source_) return 0.0;
    const auto& row = L_[v];
    // row is non-increasing, so {i : row[i] <= t} is a suffix.
    std::size_t lo = 0;
    std::size_t hi = row.size();
    std::size_t comparisons = 0;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      ++comparisons;
      if (row[mid] <= t) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (stats) stats->comparisons += comparisons;
    if (lo == row.size()) return kUnreachable;
    return table_->coarse_thresholds()[lo];
  }

  const BuildCounters& counters() const { return counters_; }

  // Number of recursion nodes at which each vertex is alive.
  std::vector<std::size_t> alive_node_counts() const {
    std::vector<std::size_t> out(n_, 0);
    for (Time x = 1; x < m_; ++x) {
      for (const auto& [v, est] : nodes_[x].alive) ++out[v];
    }
    return out;
  }

  std::uint64_t total_alive_edges() const {
    std::uint64_t sum = 0;
    for (Time x = 1; x < m_; ++x) sum += nodes_[x].alive_edges.size();
    return sum;
  }

  // Vertices whose resolved estimate increases somewhere along t = 0..m.
  std::size_t nonmonotone_vertices() const {
    std::size_t count = 0;
    for (Vertex v = 0; v < n_; ++v) {
      Distance prev = estimate_at(v, 0);
      for (Time t = 1; t <= m_; ++t) {
        Distance cur = estimate_at(v, t);
        if (cur > prev) {
          ++count;
          break;
        }
        prev = cur;
      }
    }
    return count;
  }

  // Same recursion tree: order, base estimates and every node.
  bool same_tree(const OfflineStructure& other) const {
    return m_ == other.m_ && n_ == other.n_ && source_ == other.source_ &&
           order_ == other.order_ && base_m_ == other.base_m_ && nodes_ == other.nodes_;
  }

  // Midpoints whose node differs from `other`'s.
  std::vector<Time> differing_nodes(const OfflineStructure& other) const {
    std::vector<Time> out;
    for (Time x = 1; x < m_ && x < other.m_; ++x) {
      if (!(nodes_[x] == other.nodes_[x])) out.push_back(x);
    }
    return out;
  }

  // --- Surgery used by the online engine -------------------------------------

  void add_edge_to_catalog(const EdgeInsert& e) { catalog_.add(e); }

  // Replaces the insertion order (length m). Nodes are left untouched until
  // rebuilt; query tables become stale.
  void set_order(std::vector<EdgeId> order) {
    if (order.size() != m_) throw std::invalid_argument("order length differs from m");
    position_.assign(catalog_.id_bound(), m_ + 1);
    for (Time p = 1; p <= m_; ++p) {
      EdgeId id = order[p - 1];
      if (!catalog_.contains(id)) throw std::invalid_argument("order names an unknown edge");
      if (position_[id] != m_ + 1) throw ValidationError("edge repeated in order");
      position_[id] = p;
    }
    order_ = std::move(order);
    root_edges_ = order_;
    std::sort(root_edges_.begin(), root_edges_.end());
    tables_valid_ = false;
  }

  // Exact Dijkstra on the full current order.
  void recompute_base() {
    Digraph<Weight> g(n_);
    for (EdgeId id : order_) {
      const auto& e = catalog_.at(id);
      g.add_edge(e.tail, e.head, e.weight);
    }
    auto raw = dijkstra(g, source_);
    base_m_.assign(n_, kUnreachable);
    for (Vertex v = 0; v < n_; ++v) {
      if (raw[v] != unreachable_weight<Weight>()) base_m_[v] = static_cast<Distance>(raw[v]);
    }
    ++counters_.base_recomputes;
    if (recording_) {
      record(source_, 0, 0);
      for (Vertex v = 0; v < n_; ++v) {
        if (v != source_ && !is_unreachable(base_m_[v])) {
          record(v, table_->coarse_cell_of_value(base_m_[v]), m_);
        }
      }
    }
    tables_valid_ = false;
  }

  // Re-solves node x and all its descendants, top-down, against the current
  // order. Returns the number of nodes solved.
  std::size_t rebuild_subtree(Time x) {
    if (x == 0 || x >= m_) throw std::out_of_range("no recursion node at time " + std::to_string(x));
    tables_valid_ = false;
    return solve_recursive(x);
  }

  // Per-node solve count since construction (online rebuild instrumentation).
  const std::vector<std::uint32_t>& solve_counts() const { return solve_counts_; }

  // Fault injection for verification tests.
  void overwrite_query_entry_for_testing(Vertex v, std::size_t cell, Time t) {
    L_.at(v).at(cell) = t;
  }

 private:
  void check_vertex(Vertex v) const {
    if (v >= n_) throw std::out_of_range("unknown vertex " + std::to_string(v));
  }

  std::size_t solve_recursive(Time x) {
    solve(x);
    std::size_t count = 1;
    if (nodes_[x].right - nodes_[x].left > 2) {
      Time half = lowbit(x) / 2;
      count += solve_recursive(x - half);
      count += solve_recursive(x + half);
    }
    return count;
  }

  void solve(Time x) {
    RecursionNode& node = nodes_[x];
    const Time l = node.left;
    const Time r = node.right;
    const std::vector<EdgeId>& reference = (r == m_) ? root_edges_ : nodes_[r].alive_edges;

    // Candidates are heads of the edges alive at r; a vertex alive at x is
    // alive at r and, unless unreachable at r, the head of an edge alive there.
    ++epoch_;
    if (mark_.size() != n_) {
      mark_.assign(n_, 0);
      alive_flag_.assign(n_, 0);
      local_.assign(n_, 0);
    }
    std::vector<Vertex> alive_vertices;
    for (EdgeId id : reference) {
      Vertex v = catalog_.at(id).head;
      if (mark_[v] == epoch_) continue;
      mark_[v] = epoch_;
      bool alive = v != source_ && estimate_at(v, l) != estimate_at(v, r);
      alive_flag_[v] = alive ? 1 : 0;
      if (alive) alive_vertices.push_back(v);
    }
    std::sort(alive_vertices.begin(), alive_vertices.end());

    std::vector<EdgeId> alive_edges;
    for (EdgeId id : reference) {
      const auto& e = catalog_.at(id);
      if (position_[id] <= x && alive_flag_[e.head]) alive_edges.push_back(id);
    }

    // Patch graph: alive vertices 0..k-1, source at k.
    const auto k = static_cast<Vertex>(alive_vertices.size());
    for (Vertex i = 0; i < k; ++i) local_[alive_vertices[i]] = i;
    Digraph<double> patch(k + 1);
    std::vector<double> from_source(k, kUnreachable);
    for (EdgeId id : alive_edges) {
      const auto& e = catalog_.at(id);
      const Vertex head = local_[e.head];
      const bool tail_alive = mark_[e.tail] == epoch_ && alive_flag_[e.tail];
      if (tail_alive) {
        patch.add_edge(local_[e.tail], head, static_cast<double>(e.weight));
        continue;
      }
      double tail_estimate = 0.0;
      if (e.tail != source_) {
        ++counters_.ancestor_lookups;
        tail_estimate = ancestor_estimate(e.tail, x);
      }
      if (is_unreachable(tail_estimate)) continue;
      from_source[head] = std::min(from_source[head], tail_estimate + static_cast<double>(e.weight));
    }
    for (Vertex i = 0; i < k; ++i) {
      if (!is_unreachable(from_source[i])) patch.add_edge(k, i, from_source[i]);
    }

    DijkstraStats dstats;
    auto dist = dijkstra(patch, k, &dstats);

    std::vector<std::pair<Vertex, EstimateIndex>> estimates;
    estimates.reserve(k);
    for (Vertex i = 0; i < k; ++i) {
      EstimateIndex est = EstimateIndex::unreachable();
      if (!is_unreachable(dist[i])) {
        est = table_->round_up(dist[i]);
        if (est.is_unreachable()) {
          throw std::logic_error("estimate " + std::to_string(dist[i]) + " beyond the bucket grid");
        }
        if (recording_) record(alive_vertices[i], table_->coarse_cell(est), x);
      }
      estimates.emplace_back(alive_vertices[i], est);
    }

    counters_.solves += 1;
    counters_.alive_edge_work += alive_edges.size();
    counters_.alive_vertex_work += k;
    counters_.scanned_edges += reference.size();
    counters_.patch_edges += patch.edge_count();
    counters_.dijkstra_settled += dstats.settled;
    if (solve_counts_.size() != m_) solve_counts_.assign(m_, 0);
    ++solve_counts_[x];

    node.alive = std::move(estimates);
    node.alive_edges = std::move(alive_edges);
  }

  void record(Vertex v, std::size_t cell, Time t) {
    auto& slot = L_[v][cell];
    if (slot == kUndefinedTime || t < slot) slot = t;
  }

  // Empty cells inherit from the cell below; the running minimum keeps every
  // row non-increasing in the cell index.
  void finalize_query_tables() {
    for (auto& row : L_) {
      Time best = kUndefinedTime;
      for (auto& cell : row) {
        best = std::min(best, cell);
        cell = best;
      }
    }
    tables_valid_ = true;
  }

  Vertex n_;
  Vertex source_;
  Time m_;
  std::shared_ptr<const BucketTable> table_;
  EdgeCatalog catalog_;
  std::vector<EdgeId> order_;
  std::vector<Time> position_;
  std::vector<EdgeId> root_edges_;
  std::vector<RecursionNode> nodes_;
  std::vector<Distance> base_m_;
  std::vector<std::vector<Time>> L_;
  bool recording_ = false;
  bool tables_valid_ = false;
  BuildCounters counters_;
  std::vector<std::uint32_t> solve_counts_;

  // Scratch for solve().
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> mark_;
  std::vector<char> alive_flag_;
  std::vector<Vertex> local_;
};

// Table shared by every structure over the same (eps, m, n, W).
inline std::shared_ptr<const BucketTable> table_for(const ProblemInstance& inst, std::size_t m) {
  return std::make_shared<const BucketTable>(derive_internal_epsilon(inst.epsilon), m, inst.n,
                                             inst.max_weight);
}

// Builds on an already padded sequence.
inline OfflineStructure build_offline(const ProblemInstance& inst, const InsertSequence& padded,
                                      std::shared_ptr<const BucketTable> table = nullptr,
                                      std::optional<Vertex> source = std::nullopt) {
  if (!table) table = table_for(inst, padded.size());
  return OfflineStructure(inst.n, source.value_or(inst.source), std::move(table),
                          EdgeCatalog(padded.edges()), padded.ids());
}

}  // namespace incsp

#endif  // INCSP_OFFLINE_HPP_
