#ifndef INCSP_MODEL_HPP_
#define INCSP_MODEL_HPP_

// Problem-instance data model: edge inserts, insertion timelines, instances
// and the text formats they are read from and written to.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace incsp {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Weight = std::uint64_t;
// Time t means "after the first t inserts"; positions in a sequence are 1-based.
using Time = std::uint32_t;

// Distances are reals; +inf is the UNREACHABLE sentinel.
using Distance = double;
inline constexpr Distance kUnreachable = std::numeric_limits<double>::infinity();

inline bool is_unreachable(Distance d) { return d == kUnreachable; }

// Input that violates a format or model invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EdgeInsert {
  EdgeId id = 0;
  Vertex tail = 0;
  Vertex head = 0;
  Weight weight = 1;

  friend bool operator==(const EdgeInsert&, const EdgeInsert&) = default;
};

// (tail, head, weight): edge identity when matching sequences read from text.
using EdgeTriple = std::tuple<Vertex, Vertex, Weight>;

inline EdgeTriple triple_of(const EdgeInsert& e) { return {e.tail, e.head, e.weight}; }

// Ordered list of inserts with an edge_id -> position index.
class InsertSequence {
 public:
  InsertSequence() = default;

  explicit InsertSequence(std::vector<EdgeInsert> edges) {
    for (auto& e : edges) push_back(e);
  }

  void push_back(const EdgeInsert& e) {
    auto [it, inserted] = positions_.emplace(e.id, static_cast<Time>(edges_.size() + 1));
    if (!inserted) {
      throw ValidationError("duplicate edge id " + std::to_string(e.id));
    }
    edges_.push_back(e);
  }

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  // 1-based.
  const EdgeInsert& at(Time position) const {
    if (position == 0 || position > edges_.size()) {
      throw std::out_of_range("sequence position " + std::to_string(position));
    }
    return edges_[position - 1];
  }

  std::optional<Time> position_of(EdgeId id) const {
    auto it = positions_.find(id);
    if (it == positions_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const EdgeInsert> edges() const { return edges_; }

  std::vector<EdgeId> ids() const {
    std::vector<EdgeId> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.push_back(e.id);
    return out;
  }

  EdgeId max_id() const {
    EdgeId best = 0;
    for (const auto& e : edges_) best = std::max(best, e.id);
    return best;
  }

  friend bool operator==(const InsertSequence& a, const InsertSequence& b) {
    return a.edges_ == b.edges_;
  }

 private:
  std::vector<EdgeInsert> edges_;
  std::unordered_map<EdgeId, Time> positions_;
};

struct ProblemInstance {
  Vertex n = 0;
  Weight max_weight = 1;
  double epsilon = 1.0;
  Vertex source = 0;
  // Arrival order exactly as read; pad_to_power_of_two() before building.
  InsertSequence sigma;
};

inline bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

// Checks the model invariants on an instance built in memory.
inline void validate(const ProblemInstance& inst) {
  if (inst.n == 0) throw ValidationError("instance has no vertices");
  if (inst.max_weight == 0) throw ValidationError("max weight must be positive");
  if (!(inst.epsilon > 0)) throw ValidationError("epsilon must be positive");
  if (inst.source >= inst.n) throw ValidationError("source out of range");
  std::map<EdgeTriple, EdgeId> seen;
  for (const auto& e : inst.sigma.edges()) {
    if (e.tail >= inst.n || e.head >= inst.n) {
      throw ValidationError("vertex id out of range in edge " + std::to_string(e.id));
    }
    if (e.weight < 1 || e.weight > inst.max_weight) {
      throw ValidationError("weight out of range in edge " + std::to_string(e.id));
    }
    if (!seen.emplace(triple_of(e), e.id).second) {
      throw ValidationError("duplicate edge " + std::to_string(e.tail) + " " +
                            std::to_string(e.head) + " " + std::to_string(e.weight));
    }
  }
}

namespace detail {

// Yields non-empty, non-comment lines along with their 1-based line number.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

template <typename... Ts>
bool scan_exact(const std::string& line, Ts&... out) {
  std::istringstream ss(line);
  ((ss >> out), ...);
  if (ss.fail()) return false;
  std::string rest;
  return !(ss >> rest);
}

inline ValidationError line_error(std::size_t line_no, const std::string& what) {
  return ValidationError("line " + std::to_string(line_no) + ": " + what);
}

// Unsigned extraction from istream accepts "-1"; read signed and range-check.
inline bool read_triple(const std::string& line, Vertex& tail, Vertex& head, Weight& w) {
  long long a = 0, b = 0, c = 0;
  if (!scan_exact(line, a, b, c)) return false;
  if (a < 0 || b < 0 || a > std::numeric_limits<Vertex>::max() ||
      b > std::numeric_limits<Vertex>::max()) {
    return false;
  }
  tail = static_cast<Vertex>(a);
  head = static_cast<Vertex>(b);
  if (c < 0) c = 0;  // reported as a range error by the caller
  w = static_cast<Weight>(c);
  return true;
}

}  // namespace detail

// Instance format: header `n m W epsilon source`, then m lines `tail head weight`.
// Blank lines and lines starting with '#' are skipped.
inline ProblemInstance parse_instance(std::istream& in) {
  detail::LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ValidationError("missing header line");
  long long n = 0, m = 0, w = 0, source = 0;
  double eps = 0;
  if (!detail::scan_exact(line, n, m, w, eps, source)) {
    throw detail::line_error(reader.line_no(), "malformed header, expected `n m W epsilon source`");
  }
  if (n <= 0 || n > std::numeric_limits<Vertex>::max()) {
    throw detail::line_error(reader.line_no(), "vertex count out of range");
  }
  if (m < 0 || m > std::numeric_limits<Time>::max() / 2) {
    throw detail::line_error(reader.line_no(), "edge count out of range");
  }
  if (w <= 0) throw detail::line_error(reader.line_no(), "max weight must be positive");
  if (!(eps > 0)) throw detail::line_error(reader.line_no(), "epsilon must be positive");
  if (source < 0 || source >= n) throw detail::line_error(reader.line_no(), "source out of range");

  ProblemInstance inst;
  inst.n = static_cast<Vertex>(n);
  inst.max_weight = static_cast<Weight>(w);
  inst.epsilon = eps;
  inst.source = static_cast<Vertex>(source);

  std::map<EdgeTriple, EdgeId> seen;
  EdgeId next_id = 0;
  while (reader.next(line)) {
    Vertex tail = 0, head = 0;
    Weight weight = 0;
    if (!detail::read_triple(line, tail, head, weight)) {
      throw detail::line_error(reader.line_no(), "malformed edge line");
    }
    if (tail >= inst.n || head >= inst.n) {
      throw detail::line_error(reader.line_no(), "vertex id out of range");
    }
    if (weight < 1 || weight > inst.max_weight) {
      throw detail::line_error(reader.line_no(), "weight out of range");
    }
    if (!seen.emplace(EdgeTriple{tail, head, weight}, next_id).second) {
      throw detail::line_error(reader.line_no(), "duplicate edge");
    }
    inst.sigma.push_back({next_id++, tail, head, weight});
  }
  if (static_cast<long long>(inst.sigma.size()) != m) {
    throw ValidationError("header declares " + std::to_string(m) + " edges but " +
                          std::to_string(inst.sigma.size()) + " were read");
  }
  return inst;
}

inline ProblemInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline std::string format_epsilon(double eps) {
  std::ostringstream ss;
  ss.precision(17);
  ss << eps;
  return ss.str();
}

inline void write_instance(std::ostream& out, const ProblemInstance& inst) {
  out << inst.n << ' ' << inst.sigma.size() << ' ' << inst.max_weight << ' '
      << format_epsilon(inst.epsilon) << ' ' << inst.source << '\n';
  for (const auto& e : inst.sigma.edges()) {
    out << e.tail << ' ' << e.head << ' ' << e.weight << '\n';
  }
}

inline std::string serialize_instance(const ProblemInstance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

// Prediction lines `tail head weight`. Triples found in `sigma` take that
// edge's id; unknown triples get fresh ids above every id in `sigma`.
inline std::vector<EdgeInsert> parse_prediction(std::istream& in, const ProblemInstance& inst,
                                                const InsertSequence& sigma) {
  std::map<EdgeTriple, EdgeId> known;
  for (const auto& e : sigma.edges()) known.emplace(triple_of(e), e.id);
  EdgeId fresh = sigma.empty() ? 0 : sigma.max_id() + 1;

  detail::LineReader reader(in);
  std::string line;
  std::map<EdgeTriple, bool> seen;
  std::vector<EdgeInsert> out;
  while (reader.next(line)) {
    Vertex tail = 0, head = 0;
    Weight weight = 0;
    if (!detail::read_triple(line, tail, head, weight)) {
      throw detail::line_error(reader.line_no(), "malformed edge line");
    }
    if (tail >= inst.n || head >= inst.n) {
      throw detail::line_error(reader.line_no(), "vertex id out of range");
    }
    if (weight < 1 || weight > inst.max_weight) {
      throw detail::line_error(reader.line_no(), "weight out of range");
    }
    EdgeTriple key{tail, head, weight};
    if (!seen.emplace(key, true).second) {
      throw detail::line_error(reader.line_no(), "duplicate edge");
    }
    auto it = known.find(key);
    EdgeId id = it != known.end() ? it->second : fresh++;
    out.push_back({id, tail, head, weight});
  }
  return out;
}

inline std::vector<EdgeInsert> parse_prediction(const std::string& text, const ProblemInstance& inst,
                                                const InsertSequence& sigma) {
  std::istringstream in(text);
  return parse_prediction(in, inst, sigma);
}

// Re-derives prediction ids by triple against `sigma` (see parse_prediction).
inline std::vector<EdgeInsert> rebind_prediction(std::vector<EdgeInsert> prediction,
                                                 const InsertSequence& sigma) {
  std::map<EdgeTriple, EdgeId> known;
  for (const auto& e : sigma.edges()) known.emplace(triple_of(e), e.id);
  EdgeId fresh = sigma.empty() ? 0 : sigma.max_id() + 1;
  std::map<EdgeTriple, bool> seen;
  for (auto& e : prediction) {
    if (!seen.emplace(triple_of(e), true).second) {
      throw ValidationError("duplicate edge in prediction");
    }
    auto it = known.find(triple_of(e));
    e.id = it != known.end() ? it->second : fresh++;
  }
  return prediction;
}

inline void write_prediction(std::ostream& out, std::span<const EdgeInsert> edges) {
  for (const auto& e : edges) out << e.tail << ' ' << e.head << ' ' << e.weight << '\n';
}

// Query file: lines of unsigned integers with a fixed arity (`v t` or `i j t`).
inline std::vector<std::vector<std::uint64_t>> parse_queries(std::istream& in, std::size_t arity) {
  detail::LineReader reader(in);
  std::string line;
  std::vector<std::vector<std::uint64_t>> out;
  while (reader.next(line)) {
    std::istringstream ss(line);
    std::vector<std::uint64_t> row;
    long long value = 0;
    while (ss >> value) {
      if (value < 0) throw detail::line_error(reader.line_no(), "negative query field");
      row.push_back(static_cast<std::uint64_t>(value));
    }
    if (!ss.eof() || row.size() != arity) {
      throw detail::line_error(reader.line_no(),
                               "expected " + std::to_string(arity) + " query fields");
    }
    out.push_back(std::move(row));
  }
  return out;
}

// Next power of two >= max(m, 2), filled with (source, source, 1) self-loops
// carrying fresh ids. A length of 1 also becomes 2 so that log2(m) > 0.
inline InsertSequence pad_to_power_of_two(const InsertSequence& sequence, Vertex source) {
  InsertSequence out = sequence;
  std::size_t target = std::max<std::size_t>(2, next_power_of_two(sequence.size()));
  EdgeId fresh = sequence.empty() ? 0 : sequence.max_id() + 1;
  while (out.size() < target) out.push_back({fresh++, source, source, 1});
  return out;
}

// Brings a parsed prediction to exactly sigma_padded.size() entries: truncate,
// then append sigma's own padding self-loops (positions > original_length) that
// the prediction lacks, then fresh source self-loops if still short.
inline std::vector<EdgeInsert> normalize_prediction(std::vector<EdgeInsert> prediction,
                                                    const InsertSequence& sigma_padded,
                                                    std::size_t original_length, Vertex source) {
  const std::size_t m = sigma_padded.size();
  if (prediction.size() > m) prediction.resize(m);
  std::unordered_map<EdgeId, bool> present;
  EdgeId fresh = sigma_padded.empty() ? 0 : sigma_padded.max_id() + 1;
  for (const auto& e : prediction) {
    present[e.id] = true;
    fresh = std::max(fresh, e.id + 1);
  }
  for (std::size_t pos = original_length + 1; pos <= m && prediction.size() < m; ++pos) {
    const auto& dummy = sigma_padded.at(static_cast<Time>(pos));
    if (!present.count(dummy.id)) prediction.push_back(dummy);
  }
  while (prediction.size() < m) prediction.push_back({fresh++, source, source, 1});
  return prediction;
}

// Adjacency lists of G_t: the first t inserts of `sequence` over n vertices.
struct AdjacencyArc {
  Vertex head;
  Weight weight;
  EdgeId id;
};

inline std::vector<std::vector<AdjacencyArc>> graph_at_time(const InsertSequence& sequence, Vertex n,
                                                            Time t) {
  if (t > sequence.size()) {
    throw std::out_of_range("time " + std::to_string(t) + " beyond sequence length " +
                            std::to_string(sequence.size()));
  }
  std::vector<std::vector<AdjacencyArc>> adj(n);
  for (Time p = 1; p <= t; ++p) {
    const auto& e = sequence.at(p);
    adj.at(e.tail).push_back({e.head, e.weight, e.id});
  }
  return adj;
}

// Time reversal for decremental workloads: deleting e_1..e_t from the full
// graph leaves exactly the first m - t inserts of the reversed sequence.
inline ProblemInstance reversed(const ProblemInstance& inst) {
  ProblemInstance out = inst;
  out.sigma = InsertSequence{};
  auto edges = inst.sigma.edges();
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) out.sigma.push_back(*it);
  return out;
}

}  // namespace incsp

#endif  // INCSP_MODEL_HPP_
