#ifndef INCSP_APSP_HPP_
#define INCSP_APSP_HPP_

// All-pairs extension: one offline structure per source, and an online engine
// for permutation predictions that patches the offline answers with the edges
// that arrived ahead of the fully-arrived predicted prefix.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "incsp/bucketing.hpp"
#include "incsp/model.hpp"
#include "incsp/offline.hpp"

namespace incsp {

class ApspStructure {
 public:
  // `order` must have power-of-two length; every structure shares `table`.
  // Per-source builds are independent and run on up to `threads` workers.
  ApspStructure(Vertex n, std::shared_ptr<const BucketTable> table, const EdgeCatalog& catalog,
                const std::vector<EdgeId>& order, unsigned threads = 1)
      : table_(std::move(table)) {
    per_source_.reserve(n);
    if (threads <= 1) {
      for (Vertex s = 0; s < n; ++s) per_source_.emplace_back(n, s, table_, catalog, order);
      return;
    }
    std::vector<std::future<OfflineStructure>> pending;
    for (Vertex s = 0; s < n; ++s) {
      pending.push_back(std::async(std::launch::async, [&, s] {
        return OfflineStructure(n, s, table_, catalog, order);
      }));
      if (pending.size() >= threads || s + 1 == n) {
        for (auto& f : pending) per_source_.push_back(f.get());
        pending.clear();
      }
    }
  }

  Vertex n() const { return static_cast<Vertex>(per_source_.size()); }
  Time m() const { return per_source_.empty() ? 0 : per_source_.front().m(); }
  const BucketTable& table() const { return *table_; }

  const OfflineStructure& from(Vertex source) const {
    if (source >= per_source_.size()) throw std::out_of_range("unknown source vertex");
    return per_source_[source];
  }

  Distance query(Vertex i, Vertex j, Time t, QueryStats* stats = nullptr) const {
    return from(i).query(j, t, stats);
  }

 private:
  std::shared_ptr<const BucketTable> table_;
  std::vector<OfflineStructure> per_source_;
};

inline ApspStructure build_apsp(const ProblemInstance& inst, const InsertSequence& padded,
                                unsigned threads = 1) {
  return ApspStructure(inst.n, table_for(inst, padded.size()), EdgeCatalog(padded.edges()),
                       padded.ids(), threads);
}

struct ApspQueryStats {
  std::size_t patch_vertices = 0;
  std::size_t patch_edges_used = 0;
  std::size_t offline_lookups = 0;
};

// Online APSP with a permutation prediction.
class OnlineApsp {
 public:
  // `prediction` (length m, power of two) must be a permutation of `sigma`.
  OnlineApsp(Vertex n, std::shared_ptr<const BucketTable> table, const InsertSequence& sigma,
             const std::vector<EdgeInsert>& prediction, unsigned threads = 1)
      : predicted_edges_(checked_permutation(sigma, prediction)),
        apsp_(n, std::move(table), EdgeCatalog(prediction), ids_of(prediction), threads) {
    for (std::size_t p = 0; p < prediction.size(); ++p) {
      predicted_index_.emplace(prediction[p].id, static_cast<Time>(p + 1));
    }
  }

  const ApspStructure& structure() const { return apsp_; }
  Time time() const { return t_; }
  Time frontier() const { return frontier_; }
  Time m() const { return apsp_.m(); }

  // Arrived edges with predicted index beyond the frontier.
  std::vector<EdgeInsert> patch_edges() const {
    std::vector<EdgeInsert> out;
    out.reserve(ahead_.size());
    for (Time p : ahead_) out.push_back(predicted_edges_[p - 1]);
    return out;
  }

  std::size_t patch_size() const { return ahead_.size(); }

  // Returns the number of frontier advances.
  std::size_t insert(const EdgeInsert& e) {
    if (t_ >= m()) throw std::logic_error("more than m insertions");
    auto it = predicted_index_.find(e.id);
    if (it == predicted_index_.end()) throw ValidationError("edge not in the prediction");
    const Time p = it->second;
    if (p <= frontier_ || ahead_.count(p)) {
      throw ValidationError("duplicate insertion of edge " + std::to_string(e.id));
    }
    ahead_.insert(p);
    ++t_;
    std::size_t advances = 0;
    while (!ahead_.empty() && *ahead_.begin() == frontier_ + 1) {
      ahead_.erase(ahead_.begin());
      ++frontier_;
      ++advances;
    }
    return advances;
  }

  // (1+eps)-approximate d^t(i, j) at the current time.
  Distance query(Vertex i, Vertex j, ApspQueryStats* stats = nullptr) const {
    if (i >= apsp_.n() || j >= apsp_.n()) throw std::out_of_range("unknown vertex");
    std::vector<Vertex> vertices{i, j};
    for (Time p : ahead_) {
      vertices.push_back(predicted_edges_[p - 1].tail);
      vertices.push_back(predicted_edges_[p - 1].head);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    const std::size_t k = vertices.size();
    auto local = [&](Vertex v) {
      return static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), v) -
                                      vertices.begin());
    };

    // Dense complete patch graph.
    std::vector<double> weight(k * k, kUnreachable);
    std::size_t lookups = 0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a == b) continue;
        weight[a * k + b] = apsp_.query(vertices[a], vertices[b], frontier_);
        ++lookups;
      }
    }
    for (Time p : ahead_) {
      const auto& e = predicted_edges_[p - 1];
      double& w = weight[local(e.tail) * k + local(e.head)];
      w = std::min(w, static_cast<double>(e.weight));
    }

    // O(k^2) Dijkstra on the dense graph.
    std::vector<double> dist(k, kUnreachable);
    std::vector<char> done(k, 0);
    dist[local(i)] = 0.0;
    for (std::size_t round = 0; round < k; ++round) {
      std::size_t u = k;
      for (std::size_t v = 0; v < k; ++v) {
        if (!done[v] && (u == k || dist[v] < dist[u])) u = v;
      }
      if (u == k || is_unreachable(dist[u])) break;
      done[u] = 1;
      for (std::size_t v = 0; v < k; ++v) {
        const double w = weight[u * k + v];
        if (!done[v] && !is_unreachable(w) && dist[u] + w < dist[v]) dist[v] = dist[u] + w;
      }
    }
    if (stats) {
      stats->patch_vertices = k;
      stats->patch_edges_used = ahead_.size();
      stats->offline_lookups = lookups;
    }
    return dist[local(j)];
  }

 private:
  static std::vector<EdgeId> ids_of(const std::vector<EdgeInsert>& edges) {
    std::vector<EdgeId> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back(e.id);
    return out;
  }

  static const std::vector<EdgeInsert>& checked_permutation(const InsertSequence& sigma,
                                                            const std::vector<EdgeInsert>& prediction) {
    if (prediction.size() != sigma.size()) {
      throw ValidationError("prediction not a permutation: length differs");
    }
    for (const auto& e : prediction) {
      auto pos = sigma.position_of(e.id);
      if (!pos || !(sigma.at(*pos) == e)) {
        throw ValidationError("prediction not a permutation: edge " + std::to_string(e.id) +
                              " is not in the true sequence");
      }
    }
    return prediction;
  }

  std::vector<EdgeInsert> predicted_edges_;
  ApspStructure apsp_;
  std::unordered_map<EdgeId, Time> predicted_index_;
  std::set<Time> ahead_;
  Time frontier_ = 0;
  Time t_ = 0;
};

// Validates that `prediction` permutes the original sequence, pads it the same
// way, and builds the engine.
inline OnlineApsp apsp_preprocess(const ProblemInstance& inst, const InsertSequence& padded_sigma,
                                  std::vector<EdgeInsert> prediction, unsigned threads = 1) {
  if (prediction.size() != inst.sigma.size()) {
    throw ValidationError("prediction not a permutation: length differs");
  }
  auto normalized =
      normalize_prediction(std::move(prediction), padded_sigma, inst.sigma.size(), inst.source);
  return OnlineApsp(inst.n, table_for(inst, padded_sigma.size()), padded_sigma, normalized, threads);
}

}  // namespace incsp

#endif  // INCSP_APSP_HPP_
