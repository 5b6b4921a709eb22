#ifndef INCSP_ORACLE_HPP_
#define INCSP_ORACLE_HPP_

// Ground truth for verification: exact distances for every prefix computed
// from scratch, a brute-force edit distance, and comparators that replay the
// engines against them. Nothing here calls into the engines' own shortest-path
// code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "incsp/apsp.hpp"
#include "incsp/error_metrics.hpp"
#include "incsp/model.hpp"
#include "incsp/offline.hpp"
#include "incsp/online.hpp"

namespace incsp::oracle {

inline constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();

// Exact single-source distances of the graph made of `edges`.
inline std::vector<std::uint64_t> prefix_dijkstra(std::span<const EdgeInsert> edges, Vertex n,
                                                  Vertex source) {
  std::vector<std::vector<std::pair<Vertex, std::uint64_t>>> adj(n);
  for (const auto& e : edges) adj[e.tail].emplace_back(e.head, e.weight);
  std::vector<std::uint64_t> dist(n, kInfinite);
  using Item = std::pair<std::uint64_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.emplace(dist[v], v);
      }
    }
  }
  return dist;
}

// Bellman-Ford over the same edges, for oracle self-consistency.
inline std::vector<std::uint64_t> prefix_bellman_ford(std::span<const EdgeInsert> edges, Vertex n,
                                                      Vertex source) {
  std::vector<std::uint64_t> dist(n, kInfinite);
  dist[source] = 0;
  for (Vertex round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto& e : edges) {
      if (dist[e.tail] != kInfinite && dist[e.tail] + e.weight < dist[e.head]) {
        dist[e.head] = dist[e.tail] + e.weight;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultBudget = 5e8;

// d[t][v] for t = 0..m: one Dijkstra per prefix.
class ExactDistanceTable {
 public:
  ExactDistanceTable(std::span<const EdgeInsert> sequence, Vertex n, Vertex source,
                     double budget = kDefaultBudget)
      : n_(n) {
    const double cost = static_cast<double>(n) * static_cast<double>(sequence.size() + 1) *
                        std::max(1.0, std::log2(static_cast<double>(n)));
    if (cost > budget) throw BudgetExceeded("exact distance table exceeds the oracle budget");
    rows_.reserve(sequence.size() + 1);
    for (std::size_t t = 0; t <= sequence.size(); ++t) {
      rows_.push_back(prefix_dijkstra(sequence.first(t), n, source));
    }
  }

  Time m() const { return static_cast<Time>(rows_.size() - 1); }
  Vertex n() const { return n_; }

  std::uint64_t exact(Time t, Vertex v) const { return rows_.at(t).at(v); }

  Distance at(Time t, Vertex v) const {
    auto d = exact(t, v);
    return d == kInfinite ? kUnreachable : static_cast<Distance>(d);
  }

  const std::vector<std::uint64_t>& row(Time t) const { return rows_.at(t); }

 private:
  Vertex n_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

// d[t][s][v] for every source.
class ExactApspTable {
 public:
  ExactApspTable(std::span<const EdgeInsert> sequence, Vertex n, double budget = kDefaultBudget) {
    per_source_.reserve(n);
    for (Vertex s = 0; s < n; ++s) per_source_.emplace_back(sequence, n, s, budget / n);
  }

  Distance at(Time t, Vertex s, Vertex v) const { return per_source_.at(s).at(t, v); }

 private:
  std::vector<ExactDistanceTable> per_source_;
};

// True iff `answer` is UNREACHABLE exactly when `exact` is, and otherwise lies
// in [exact, (1 + eps) * exact].
inline bool within(Distance answer, Distance exact, double epsilon) {
  if (is_unreachable(exact) || is_unreachable(answer)) return is_unreachable(exact) == is_unreachable(answer);
  return answer >= exact && answer <= (1.0 + epsilon) * exact;
}

struct Violation {
  Vertex source = 0;
  Vertex v = 0;
  Time t = 0;
  Distance expected = 0;
  Distance got = 0;
};

struct OfflineReport {
  std::vector<Violation> violations;
  std::size_t queries = 0;
  std::size_t max_comparisons = 0;

  bool ok() const { return violations.empty(); }
};

inline OfflineReport verify_offline(const OfflineStructure& structure, const ExactDistanceTable& table,
                                    double epsilon) {
  if (table.m() != structure.m()) throw std::invalid_argument("table and structure differ in m");
  OfflineReport report;
  for (Time t = 0; t <= structure.m(); ++t) {
    for (Vertex v = 0; v < structure.n(); ++v) {
      QueryStats qs;
      Distance got = structure.query(v, t, &qs);
      ++report.queries;
      report.max_comparisons = std::max(report.max_comparisons, qs.comparisons);
      Distance expected = table.at(t, v);
      if (!within(got, expected, epsilon)) {
        report.violations.push_back({structure.source(), v, t, expected, got});
      }
    }
  }
  return report;
}

struct OnlineReport {
  std::vector<Violation> violations;
  // Insertion times after which the structure differed from a fresh build.
  std::vector<Time> equivalence_failures;
  // Positions whose jump count exceeded min_tau(tau + 2|HIGH(tau)|).
  std::vector<Time> jump_bound_failures;
  // Nodes rebuilt more than log2(m) * min_tau(tau + 2|HIGH(tau)|) times.
  std::vector<Time> rebuild_bound_failures;
  std::vector<Time> prefix_failures;
  std::size_t jump_bound = 0;
  std::uint64_t rebuild_bound = 0;
  OnlineCounters counters;
  bool equivalence_checked = false;

  bool ok() const {
    return violations.empty() && equivalence_failures.empty() && jump_bound_failures.empty() &&
           rebuild_bound_failures.empty() && prefix_failures.empty();
  }
};

struct OnlineCheckOptions {
  // Fresh-build equivalence is checked after every insert when m <= this.
  Time equivalence_max_m = 64;
};

// Replays the padded true sequence through an engine built on `prediction`
// (already normalized to length m) and checks it against the exact table.
inline OnlineReport verify_online_run(Vertex n, Vertex source, std::shared_ptr<const BucketTable> bucket,
                                      const InsertSequence& sigma,
                                      const std::vector<EdgeInsert>& prediction, double epsilon,
                                      const ExactDistanceTable& table, OnlineCheckOptions options = {}) {
  OnlineReport report;
  OnlineEngine engine(n, source, bucket, prediction);
  const Time m = engine.m();
  const auto sigma_ids = sigma.ids();
  const auto profile = error_profile(sigma_ids, ids_of(prediction));
  report.jump_bound = profile.jump_bound.value;
  report.rebuild_bound = static_cast<std::uint64_t>(bucket->log2_m()) * profile.jump_bound.value;
  report.equivalence_checked = m <= options.equivalence_max_m;

  EdgeCatalog catalog(prediction);
  for (const auto& e : sigma.edges()) catalog.add(e);

  for (Time t = 1; t <= m; ++t) {
    engine.insert(sigma.at(t));
    for (Vertex v = 0; v < n; ++v) {
      Distance got = engine.current_distance(v);
      Distance expected = table.at(t, v);
      if (!within(got, expected, epsilon)) report.violations.push_back({source, v, t, expected, got});
    }
    const auto& order = engine.prediction().order();
    for (Time p = 1; p <= t; ++p) {
      if (order[p - 1] != sigma_ids[p - 1]) {
        report.prefix_failures.push_back(t);
        break;
      }
    }
    if (report.equivalence_checked) {
      OfflineStructure fresh(n, source, bucket, catalog, order, {.query_tables = false});
      if (!engine.structure().same_tree(fresh)) report.equivalence_failures.push_back(t);
    }
  }

  report.counters = engine.counters();
  for (Time p = 1; p <= m; ++p) {
    if (report.counters.jumps_per_position[p] > report.jump_bound) report.jump_bound_failures.push_back(p);
  }
  for (Time x = 1; x < m; ++x) {
    if (report.counters.rebuilds_per_node[x] > report.rebuild_bound) {
      report.rebuild_bound_failures.push_back(x);
    }
  }
  return report;
}

// Classic insert/delete edit distance by dynamic programming.
inline std::size_t brute_edit_distance(std::span<const EdgeId> a, std::span<const EdgeId> b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = std::min(dp[i - 1][j], dp[i][j - 1]) + 1;
      if (a[i - 1] == b[j - 1]) dp[i][j] = std::min(dp[i][j], dp[i - 1][j - 1]);
    }
  }
  return dp[a.size()][b.size()];
}

}  // namespace incsp::oracle

#endif  // INCSP_ORACLE_HPP_
