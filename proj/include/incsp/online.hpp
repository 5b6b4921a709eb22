#ifndef INCSP_ONLINE_HPP_
#define INCSP_ONLINE_HPP_

// Online incremental SSSP warm-started from a predicted insertion sequence.
//
// The offline structure is built once on the prediction. When the t-th true
// edge arrives at predicted position t' > t, the prediction is corrected (the
// edge moves to t, or is inserted at t with the tail truncated when absent) and
// only the subtree under the shallowest midpoint in [t, t'-1] is re-solved.
// The distance array D is then refreshed from the alive sets of the rebuilt
// times up to t.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "incsp/bucketing.hpp"
#include "incsp/model.hpp"
#include "incsp/offline.hpp"

namespace incsp {

// Positional sequence of edge ids with position lookup. Edges not in the
// sequence report position size() + 1. Moves cost O(shift length).
class UpdatedPrediction {
 public:
  explicit UpdatedPrediction(std::vector<EdgeId> order) : order_(std::move(order)) {
    for (Time p = 1; p <= size(); ++p) {
      EdgeId id = order_[p - 1];
      ensure_slot(id);
      if (position_[id] != absent()) throw ValidationError("edge repeated in prediction");
      position_[id] = p;
    }
  }

  Time size() const { return static_cast<Time>(order_.size()); }
  Time absent() const { return size() + 1; }

  Time position_of(EdgeId id) const { return id < position_.size() ? position_[id] : absent(); }

  EdgeId at(Time position) const {
    if (position == 0 || position > size()) throw std::out_of_range("prediction position");
    return order_[position - 1];
  }

  const std::vector<EdgeId>& order() const { return order_; }

  // Moves the edge at `from` to `to` (< from), shifting [to, from) right by one.
  // Returns the number of shifted entries.
  std::size_t move(Time from, Time to) {
    if (to == 0 || to > from || from > size()) throw std::out_of_range("invalid prediction move");
    EdgeId moving = order_[from - 1];
    for (Time p = from; p > to; --p) {
      order_[p - 1] = order_[p - 2];
      position_[order_[p - 1]] = p;
    }
    order_[to - 1] = moving;
    position_[moving] = to;
    return from - to;
  }

  // Inserts a new edge at `position`, shifting the rest right and dropping the
  // last entry. Returns the dropped edge.
  EdgeId insert_at(Time position, EdgeId id) {
    if (position == 0 || position > size()) throw std::out_of_range("invalid prediction insert");
    if (position_of(id) != absent()) throw std::logic_error("edge already in prediction");
    ensure_slot(id);
    EdgeId dropped = order_.back();
    position_[dropped] = absent();
    for (Time p = size(); p > position; --p) {
      order_[p - 1] = order_[p - 2];
      position_[order_[p - 1]] = p;
    }
    order_[position - 1] = id;
    position_[id] = position;
    return dropped;
  }

 private:
  void ensure_slot(EdgeId id) {
    if (id >= position_.size()) position_.resize(static_cast<std::size_t>(id) + 1, absent());
  }

  std::vector<EdgeId> order_;
  std::vector<Time> position_;
};

// Positions jumped over when the edge at predicted position t' arrives at t:
// [t, min(t'-1, m)]; empty when t' == t.
struct TimeRange {
  Time first = 1;
  Time last = 0;

  bool empty() const { return first > last; }
  std::size_t size() const { return empty() ? 0 : last - first + 1; }
};

// Jumped midpoints {max(1, t) .. min(t'-1, m-1)}.
inline TimeRange jumped_midpoint_range(Time t, Time t_predicted, Time m) {
  if (t_predicted < t) throw std::invalid_argument("predicted position precedes arrival");
  if (t_predicted == t) return {};
  Time first = std::max<Time>(1, t);
  Time last = std::min<Time>(t_predicted - 1, m - 1);
  if (first > last) return {};
  return {first, last};
}

struct InsertReport {
  Time t = 0;
  // Position of the edge in the prediction just before it arrived (m+1 if absent).
  Time predicted_position = 0;
  TimeRange jumped_midpoints;
  std::optional<Time> rebuilt_root;
  bool base_recomputed = false;
  std::size_t rebuilt_nodes = 0;
  std::uint64_t rebuild_alive_edge_work = 0;
  // Times whose alive sets were copied into D, ascending.
  std::vector<Time> refreshed_times;
  std::size_t d_writes = 0;
};

struct OnlineCounters {
  // Index p in 1..m: number of arrivals that jumped over position p.
  std::vector<std::uint64_t> jumps_per_position;
  // Index x in 1..m-1: times node x was re-solved after preprocessing.
  std::vector<std::uint64_t> rebuilds_per_node;
  std::uint64_t rebuilt_nodes = 0;
  std::uint64_t rebuild_alive_edge_work = 0;
  std::uint64_t base_recomputes = 0;
  std::uint64_t shift_work = 0;
  std::uint64_t d_writes = 0;
  std::uint64_t mispredicted_arrivals = 0;
};

class OnlineEngine {
 public:
  // `prediction` must already have length m (see normalize_prediction).
  OnlineEngine(Vertex n, Vertex source, std::shared_ptr<const BucketTable> table,
               const std::vector<EdgeInsert>& prediction)
      : sigma_hat_(ids_of(prediction)),
        structure_(n, source, std::move(table), EdgeCatalog(prediction), ids_of(prediction),
                   OfflineStructure::Options{.query_tables = false}),
        distances_(n, kUnreachable) {
    distances_[source] = 0.0;
    const Time m = structure_.m();
    counters_.jumps_per_position.assign(m + 1, 0);
    counters_.rebuilds_per_node.assign(m, 0);
  }

  Time m() const { return structure_.m(); }
  Time time() const { return t_; }
  Vertex n() const { return structure_.n(); }

  const OfflineStructure& structure() const { return structure_; }
  const UpdatedPrediction& prediction() const { return sigma_hat_; }
  const OnlineCounters& counters() const { return counters_; }
  const std::vector<Distance>& distances() const { return distances_; }

  Distance current_distance(Vertex v) const {
    if (v >= distances_.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
    return distances_[v];
  }

  // Total re-solve work so far; a caller may switch to a worst-case algorithm
  // once this exceeds its budget.
  std::uint64_t cumulative_work() const {
    return counters_.rebuild_alive_edge_work + counters_.shift_work + counters_.d_writes;
  }

  InsertReport insert(const EdgeInsert& e) {
    const Time m = structure_.m();
    if (t_ >= m) throw std::logic_error("more than m insertions");
    const Time t = t_ + 1;
    const Time predicted = sigma_hat_.position_of(e.id);
    if (predicted < t) {
      throw ValidationError("duplicate insertion of edge " + std::to_string(e.id));
    }
    if (e.tail >= n() || e.head >= n()) throw ValidationError("edge endpoint out of range");
    structure_.add_edge_to_catalog(e);

    InsertReport report;
    report.t = t;
    report.predicted_position = predicted;
    report.jumped_midpoints = jumped_midpoint_range(t, predicted, m);

    Time lo = t;
    Time hi = t;
    if (predicted != t) {
      ++counters_.mispredicted_arrivals;
      for (Time p = t; p < predicted && p <= m; ++p) ++counters_.jumps_per_position[p];
      const auto work_before = structure_.counters().alive_edge_work;
      Time root = 0;
      if (predicted <= m) {
        counters_.shift_work += sigma_hat_.move(predicted, t);
        structure_.set_order(sigma_hat_.order());
        root = shallowest_midpoint(t, predicted - 1);
      } else {
        // The full prefix changes, so the exact base at time m and everything
        // that depends on it (the whole tree) is recomputed.
        sigma_hat_.insert_at(t, e.id);
        counters_.shift_work += m - t + 1;
        structure_.set_order(sigma_hat_.order());
        structure_.recompute_base();
        ++counters_.base_recomputes;
        report.base_recomputed = true;
        root = m / 2;
      }
      report.rebuilt_root = root;
      report.rebuilt_nodes = structure_.rebuild_subtree(root);
      lo = node_left(root);
      hi = node_right(root);
      for (Time x = lo + 1; x < hi; ++x) ++counters_.rebuilds_per_node[x];
      report.rebuild_alive_edge_work = structure_.counters().alive_edge_work - work_before;
      counters_.rebuilt_nodes += report.rebuilt_nodes;
      counters_.rebuild_alive_edge_work += report.rebuild_alive_edge_work;
    }

    refresh_distances(lo, std::min(hi, t), report);
    t_ = t;
    return report;
  }

 private:
  static std::vector<EdgeId> ids_of(const std::vector<EdgeInsert>& edges) {
    std::vector<EdgeId> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back(e.id);
    return out;
  }

  // Copies the estimates of every vertex alive at each time in [from, to].
  // Times 0 and m have all vertices alive.
  void refresh_distances(Time from, Time to, InsertReport& report) {
    const Time m = structure_.m();
    for (Time tt = from; tt <= to; ++tt) {
      report.refreshed_times.push_back(tt);
      if (tt == 0 || tt == m) {
        for (Vertex v = 0; v < n(); ++v) {
          distances_[v] = tt == 0 ? structure_.base_zero(v) : structure_.base_m()[v];
        }
        report.d_writes += n();
        continue;
      }
      for (const auto& [v, est] : structure_.node(tt).alive) {
        distances_[v] = structure_.table().value_of(est);
        ++report.d_writes;
      }
    }
    counters_.d_writes += report.d_writes;
  }

  UpdatedPrediction sigma_hat_;
  OfflineStructure structure_;
  std::vector<Distance> distances_;
  Time t_ = 0;
  OnlineCounters counters_;
};

// Builds the engine for an instance and a raw parsed prediction: pads the
// prediction to the padded sequence length first.
inline OnlineEngine preprocess(const ProblemInstance& inst, const InsertSequence& padded_sigma,
                               std::vector<EdgeInsert> prediction,
                               std::shared_ptr<const BucketTable> table = nullptr) {
  auto normalized = normalize_prediction(std::move(prediction), padded_sigma, inst.sigma.size(),
                                         inst.source);
  if (!table) table = table_for(inst, padded_sigma.size());
  return OnlineEngine(inst.n, inst.source, std::move(table), normalized);
}

}  // namespace incsp

#endif  // INCSP_ONLINE_HPP_
