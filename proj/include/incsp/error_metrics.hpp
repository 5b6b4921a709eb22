#ifndef INCSP_ERROR_METRICS_HPP_
#define INCSP_ERROR_METRICS_HPP_

// Prediction-quality measures between a true sequence and a prediction.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "incsp/model.hpp"

namespace incsp {

struct EdgeError {
  EdgeId id = 0;
  Time index = 0;            // 1-based position in the true sequence
  Time predicted_index = 0;  // 1-based position in the prediction, m+1 if absent
  std::uint64_t eta = 0;

  friend bool operator==(const EdgeError&, const EdgeError&) = default;
};

namespace detail {

inline std::unordered_map<EdgeId, Time> position_map(std::span<const EdgeId> seq) {
  std::unordered_map<EdgeId, Time> out;
  out.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!out.emplace(seq[i], static_cast<Time>(i + 1)).second) {
      throw ValidationError("sequence repeats edge " + std::to_string(seq[i]));
    }
  }
  return out;
}

}  // namespace detail

// eta_e = |index(e) - predicted_index(e)| for every e in sigma, in sigma order.
// m is |sigma|; absent edges take predicted index m+1.
inline std::vector<EdgeError> per_edge_errors(std::span<const EdgeId> sigma,
                                              std::span<const EdgeId> predicted) {
  const auto predicted_pos = detail::position_map(predicted);
  detail::position_map(sigma);
  const auto m = static_cast<Time>(sigma.size());
  std::vector<EdgeError> out;
  out.reserve(sigma.size());
  for (Time i = 1; i <= m; ++i) {
    EdgeId id = sigma[i - 1];
    auto it = predicted_pos.find(id);
    Time hat = it == predicted_pos.end() ? m + 1 : it->second;
    std::uint64_t eta = hat > i ? hat - i : i - hat;
    out.push_back({id, i, hat, eta});
  }
  return out;
}

inline std::uint64_t max_error(std::span<const EdgeError> errors) {
  std::uint64_t best = 0;
  for (const auto& e : errors) best = std::max(best, e.eta);
  return best;
}

// Length of the longest common subsequence of two sequences of distinct ids,
// via the longest strictly increasing run of sigma-positions along `predicted`.
inline std::size_t lcs_length(std::span<const EdgeId> sigma, std::span<const EdgeId> predicted) {
  const auto pos = detail::position_map(sigma);
  detail::position_map(predicted);
  std::vector<Time> tails;
  for (EdgeId id : predicted) {
    auto it = pos.find(id);
    if (it == pos.end()) continue;
    auto slot = std::lower_bound(tails.begin(), tails.end(), it->second);
    if (slot == tails.end()) {
      tails.push_back(it->second);
    } else {
      *slot = it->second;
    }
  }
  return tails.size();
}

// Insert/delete edit distance: |a| + |b| - 2 LCS(a, b).
inline std::size_t edit_distance(std::span<const EdgeId> sigma, std::span<const EdgeId> predicted) {
  return sigma.size() + predicted.size() - 2 * lcs_length(sigma, predicted);
}

inline std::size_t hamming(std::span<const EdgeId> sigma, std::span<const EdgeId> predicted) {
  if (sigma.size() != predicted.size()) {
    throw std::invalid_argument("hamming distance needs sequences of equal length");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) count += sigma[i] != predicted[i] ? 1 : 0;
  return count;
}

// Edges with eta_e > tau, in sigma order.
inline std::vector<EdgeId> high_set(std::span<const EdgeError> errors, std::uint64_t tau) {
  std::vector<EdgeId> out;
  for (const auto& e : errors) {
    if (e.eta > tau) out.push_back(e.id);
  }
  return out;
}

// |HIGH(tau)| for tau = 0..m (m = errors.size()).
inline std::vector<std::size_t> high_cardinality(std::span<const EdgeError> errors) {
  const std::size_t m = errors.size();
  // bucket[k] = number of edges with eta == k, eta <= m always.
  std::vector<std::size_t> bucket(m + 2, 0);
  for (const auto& e : errors) ++bucket[std::min<std::uint64_t>(e.eta, m + 1)];
  std::vector<std::size_t> out(m + 1, 0);
  std::size_t above = 0;
  for (std::size_t tau = m + 1; tau-- > 0;) {
    if (tau <= m) out[tau] = above;
    above += bucket[tau];
  }
  return out;
}

struct TauObjective {
  std::size_t tau = 0;
  std::size_t value = 0;

  friend bool operator==(const TauObjective&, const TauObjective&) = default;
};

// min over tau in 0..m of tau + weight * |HIGH(tau)|; smallest minimizer.
inline TauObjective weighted_tau_objective(std::span<const EdgeError> errors, std::size_t weight) {
  const auto high = high_cardinality(errors);
  TauObjective best{0, weight * high[0]};
  for (std::size_t tau = 1; tau < high.size(); ++tau) {
    std::size_t value = tau + weight * high[tau];
    if (value < best.value) best = {tau, value};
  }
  return best;
}

// min_tau { tau + |HIGH(tau)| }, the runtime objective.
inline TauObjective min_tau_objective(std::span<const EdgeError> errors) {
  return weighted_tau_objective(errors, 1);
}

// min_tau { tau + 2 |HIGH(tau)| }: the per-position jump bound.
inline TauObjective jump_bound(std::span<const EdgeError> errors) {
  return weighted_tau_objective(errors, 2);
}

struct ErrorProfile {
  std::vector<EdgeError> eta_per_edge;
  std::uint64_t eta_max = 0;
  std::optional<std::size_t> hamming;  // only defined for equal lengths
  std::size_t edit = 0;
  std::vector<std::size_t> high_cardinality;
  TauObjective objective;
  TauObjective jump_bound;
};

inline ErrorProfile error_profile(std::span<const EdgeId> sigma, std::span<const EdgeId> predicted) {
  ErrorProfile p;
  p.eta_per_edge = per_edge_errors(sigma, predicted);
  p.eta_max = max_error(p.eta_per_edge);
  if (sigma.size() == predicted.size()) p.hamming = incsp::hamming(sigma, predicted);
  p.edit = edit_distance(sigma, predicted);
  p.high_cardinality = incsp::high_cardinality(p.eta_per_edge);
  p.objective = min_tau_objective(p.eta_per_edge);
  p.jump_bound = incsp::jump_bound(p.eta_per_edge);
  return p;
}

inline std::vector<EdgeId> ids_of(std::span<const EdgeInsert> edges) {
  std::vector<EdgeId> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back(e.id);
  return out;
}

}  // namespace incsp

#endif  // INCSP_ERROR_METRICS_HPP_
