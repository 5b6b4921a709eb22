#ifndef INCSP_WORKLOAD_HPP_
#define INCSP_WORKLOAD_HPP_

// Seeded synthetic instances and prediction perturbations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "incsp/model.hpp"

namespace incsp {

// std::mt19937_64 output is fixed by the standard; distributions are not, so
// draws go through this helper to keep seeds portable.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& items, std::size_t first, std::size_t last) {
    for (std::size_t i = last; i > first + 1; --i) {
      std::size_t j = first + below(i - first);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

struct GenerateSpec {
  Vertex n = 2;
  std::size_t m = 1;
  Weight max_weight = 1;
  double epsilon = 1.0;
  Vertex source = 0;
  std::uint64_t seed = 0;
};

// m distinct (tail, head, weight) triples with tail != head, uniform tails,
// heads and weights, in uniform arrival order.
inline ProblemInstance generate(const GenerateSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("generator needs n >= 2");
  if (spec.m < 1) throw std::invalid_argument("generator needs m >= 1");
  if (spec.max_weight < 1) throw std::invalid_argument("generator needs W >= 1");
  if (spec.source >= spec.n) throw std::invalid_argument("source out of range");
  const double possible = static_cast<double>(spec.n) * (spec.n - 1) * static_cast<double>(spec.max_weight);
  if (static_cast<double>(spec.m) > possible) {
    throw std::invalid_argument("m exceeds the number of distinct edge triples");
  }
  SeededRng rng(spec.seed);
  ProblemInstance inst;
  inst.n = spec.n;
  inst.max_weight = spec.max_weight;
  inst.epsilon = spec.epsilon;
  inst.source = spec.source;
  std::set<EdgeTriple> used;
  EdgeId id = 0;
  while (inst.sigma.size() < spec.m) {
    auto tail = static_cast<Vertex>(rng.below(spec.n));
    auto head = static_cast<Vertex>(rng.below(spec.n - 1));
    if (head >= tail) ++head;
    Weight w = 1 + rng.below(spec.max_weight);
    if (!used.insert({tail, head, w}).second) continue;
    inst.sigma.push_back({id++, tail, head, w});
  }
  return inst;
}

enum class PerturbationKind { kIdentity, kWindowShuffle, kRelocate, kReplace };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kIdentity;
  // Window size k for kWindowShuffle; fraction p for kRelocate / kReplace.
  double parameter = 0;
  std::uint64_t seed = 0;
};

inline std::string to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kIdentity:
      return "identity";
    case PerturbationKind::kWindowShuffle:
      return "window_shuffle";
    case PerturbationKind::kRelocate:
      return "relocate";
    case PerturbationKind::kReplace:
      return "replace";
  }
  return "unknown";
}

inline PerturbationKind parse_perturbation_kind(const std::string& name) {
  if (name == "identity") return PerturbationKind::kIdentity;
  if (name == "window_shuffle" || name == "window") return PerturbationKind::kWindowShuffle;
  if (name == "relocate") return PerturbationKind::kRelocate;
  if (name == "replace") return PerturbationKind::kReplace;
  throw std::invalid_argument("unknown perturbation kind: " + name);
}

// Number of edges touched by a fractional perturbation: ceil(p * m).
inline std::size_t perturbed_count(double p, std::size_t m) {
  if (p < 0 || p > 1) throw std::invalid_argument("perturbation fraction must be in [0, 1]");
  return std::min(m, static_cast<std::size_t>(std::ceil(p * static_cast<double>(m) - 1e-9)));
}

// Predicted sequence for `inst.sigma`.
//  - window_shuffle(k): shuffles consecutive windows of k+1 positions (random
//    phase), so no edge moves more than k slots.
//  - relocate(p): ceil(p*m) edges are pulled out and reinserted at uniform
//    positions; the result is still a permutation.
//  - replace(p): ceil(p*m) positions get fresh edges absent from sigma.
inline std::vector<EdgeInsert> perturb(const ProblemInstance& inst, const PerturbationSpec& spec,
                                       bool require_permutation = false) {
  std::vector<EdgeInsert> out(inst.sigma.edges().begin(), inst.sigma.edges().end());
  const std::size_t m = out.size();
  SeededRng rng(spec.seed);
  switch (spec.kind) {
    case PerturbationKind::kIdentity:
      break;
    case PerturbationKind::kWindowShuffle: {
      if (spec.parameter < 0) throw std::invalid_argument("window size must be non-negative");
      const auto k = static_cast<std::size_t>(spec.parameter);
      if (k == 0 || m < 2) break;
      const std::size_t window = k + 1;
      std::size_t start = rng.below(window);
      if (start > 0) rng.shuffle(out, 0, std::min(start, m));
      for (std::size_t first = start; first < m; first += window) {
        rng.shuffle(out, first, std::min(first + window, m));
      }
      break;
    }
    case PerturbationKind::kRelocate: {
      const std::size_t count = perturbed_count(spec.parameter, m);
      std::vector<std::size_t> positions(m);
      for (std::size_t i = 0; i < m; ++i) positions[i] = i;
      rng.shuffle(positions, 0, m);
      positions.resize(count);
      std::sort(positions.begin(), positions.end());
      std::vector<EdgeInsert> moved;
      std::vector<EdgeInsert> kept;
      std::size_t next = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (next < positions.size() && positions[next] == i) {
          moved.push_back(out[i]);
          ++next;
        } else {
          kept.push_back(out[i]);
        }
      }
      for (const auto& e : moved) {
        auto at = static_cast<std::ptrdiff_t>(rng.below(kept.size() + 1));
        kept.insert(kept.begin() + at, e);
      }
      out = std::move(kept);
      break;
    }
    case PerturbationKind::kReplace: {
      if (require_permutation) {
        throw std::invalid_argument("replace perturbation breaks the permutation requirement");
      }
      const std::size_t count = perturbed_count(spec.parameter, m);
      const double possible = static_cast<double>(inst.n) * (inst.n - 1) * static_cast<double>(inst.max_weight);
      if (static_cast<double>(m + count) > possible) {
        throw std::invalid_argument("not enough distinct triples for replacement edges");
      }
      std::set<EdgeTriple> used;
      for (const auto& e : out) used.insert(triple_of(e));
      std::vector<std::size_t> positions(m);
      for (std::size_t i = 0; i < m; ++i) positions[i] = i;
      rng.shuffle(positions, 0, m);
      EdgeId fresh = inst.sigma.empty() ? 0 : inst.sigma.max_id() + 1;
      for (std::size_t c = 0; c < count; ++c) {
        EdgeInsert e{};
        do {
          e.tail = static_cast<Vertex>(rng.below(inst.n));
          e.head = static_cast<Vertex>(rng.below(inst.n - 1));
          if (e.head >= e.tail) ++e.head;
          e.weight = 1 + rng.below(inst.max_weight);
        } while (!used.insert(triple_of(e)).second);
        e.id = fresh++;
        out[positions[c]] = e;
      }
      break;
    }
  }
  return out;
}

}  // namespace incsp

#endif  // INCSP_WORKLOAD_HPP_
