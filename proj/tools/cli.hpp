#ifndef INCSP_TOOLS_CLI_HPP_
#define INCSP_TOOLS_CLI_HPP_

// Command-line front end. run_cli() never calls exit(), so tests can drive it
// with captured streams.
//
// Exit codes: 0 ok, 1 usage, 2 validation or I/O, 3 verification failure.

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "incsp/apsp.hpp"
#include "incsp/bucketing.hpp"
#include "incsp/error_metrics.hpp"
#include "incsp/model.hpp"
#include "incsp/offline.hpp"
#include "incsp/online.hpp"
#include "incsp/oracle.hpp"
#include "incsp/workload.hpp"
#include "json.hpp"

namespace incsp::cli {

using nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitVerification = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_distance(Distance d) {
  if (is_unreachable(d)) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

inline ordered_json distance_json(Distance d) {
  if (is_unreachable(d)) return nullptr;
  return d;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or to `fallback` when path is empty or "-".
inline void write_output(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

// Wall-clock per phase in milliseconds; zeros when disabled.
class PhaseTimer {
 public:
  explicit PhaseTimer(bool enabled) : enabled_(enabled) {}

  template <typename F>
  auto run(const std::string& phase, F&& f) {
    auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      stop(phase, start);
    } else {
      auto result = f();
      stop(phase, start);
      return result;
    }
  }

  const ordered_json& json() const { return phases_; }

 private:
  void stop(const std::string& phase, std::chrono::steady_clock::time_point start) {
    double ms = 0;
    if (enabled_) {
      ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    phases_[phase] = ms;
  }

  bool enabled_;
  ordered_json phases_ = ordered_json::object();
};

struct LoadedInstance {
  ProblemInstance inst;
  InsertSequence padded;
};

inline LoadedInstance load_instance(const std::string& path, std::optional<double> eps_override) {
  LoadedInstance out;
  out.inst = parse_instance(read_file(path));
  if (eps_override) {
    if (!(*eps_override > 0)) throw ValidationError("epsilon must be positive");
    out.inst.epsilon = *eps_override;
  }
  out.padded = pad_to_power_of_two(out.inst.sigma, out.inst.source);
  return out;
}

inline ordered_json instance_json(const ProblemInstance& inst, const InsertSequence& padded,
                                  const BucketTable& table) {
  ordered_json j;
  j["n"] = inst.n;
  j["m"] = inst.sigma.size();
  j["m_padded"] = padded.size();
  j["max_weight"] = inst.max_weight;
  j["epsilon"] = inst.epsilon;
  j["epsilon_internal"] = table.epsilon_internal();
  j["delta"] = table.delta();
  j["k_fine"] = table.fine_count();
  j["k_coarse"] = table.coarse_count();
  j["source"] = inst.source;
  return j;
}

inline ordered_json profile_json(const ErrorProfile& p) {
  ordered_json j;
  ordered_json eta = ordered_json::array();
  for (const auto& e : p.eta_per_edge) eta.push_back(e.eta);
  j["eta"] = eta;
  j["eta_max"] = p.eta_max;
  j["hamming"] = p.hamming ? ordered_json(*p.hamming) : ordered_json(nullptr);
  j["edit"] = p.edit;
  j["high_cardinality"] = p.high_cardinality;
  j["objective"] = {{"tau", p.objective.tau}, {"value", p.objective.value}};
  j["jump_bound"] = {{"tau", p.jump_bound.tau}, {"value", p.jump_bound.value}};
  return j;
}

inline ordered_json build_counters_json(const BuildCounters& c) {
  return {{"solves", c.solves},
          {"alive_edge_work", c.alive_edge_work},
          {"alive_vertex_work", c.alive_vertex_work},
          {"scanned_edges", c.scanned_edges},
          {"patch_edges", c.patch_edges},
          {"ancestor_lookups", c.ancestor_lookups},
          {"dijkstra_settled", c.dijkstra_settled},
          {"base_recomputes", c.base_recomputes}};
}

// Rebuild counts summed per tree level; index 0 is the root (level 1).
inline std::vector<std::uint64_t> rebuilds_per_level(const OnlineCounters& c, Time m) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(std::countr_zero(m)), 0);
  for (Time x = 1; x < m; ++x) out[node_level(x, m) - 1] += c.rebuilds_per_node[x];
  return out;
}

// Histogram of jump counts: entry k = number of positions jumped over exactly k times.
inline std::vector<std::uint64_t> jump_histogram(const OnlineCounters& c) {
  std::vector<std::uint64_t> out;
  for (std::size_t p = 1; p < c.jumps_per_position.size(); ++p) {
    auto k = c.jumps_per_position[p];
    if (out.size() <= k) out.resize(k + 1, 0);
    ++out[k];
  }
  return out;
}

inline ordered_json online_counters_json(const OnlineCounters& c, Time m) {
  ordered_json j;
  j["rebuilds_per_level"] = rebuilds_per_level(c, m);
  j["jumps_per_position"] =
      std::vector<std::uint64_t>(c.jumps_per_position.begin() + 1, c.jumps_per_position.end());
  j["jump_histogram"] = jump_histogram(c);
  j["rebuilt_nodes"] = c.rebuilt_nodes;
  j["rebuild_alive_edge_work"] = c.rebuild_alive_edge_work;
  j["base_recomputes"] = c.base_recomputes;
  j["shift_work"] = c.shift_work;
  j["d_writes"] = c.d_writes;
  j["mispredicted_arrivals"] = c.mispredicted_arrivals;
  return j;
}

inline std::vector<EdgeInsert> load_prediction(const std::string& path, const LoadedInstance& li) {
  return parse_prediction(read_file(path), li.inst, li.padded);
}

struct CommonOptions {
  std::string input;
  std::string pred;
  std::string out;
  std::string metrics;
  std::string csv;
  std::string queries;
  std::optional<double> eps;
  bool no_timing = false;
  bool reverse = false;
  unsigned threads = 1;
};

// --- subcommands ----------------------------------------------------------

struct GenOptions {
  Vertex n = 0;
  std::size_t m = 0;
  Weight w = 0;
  double eps = 1.0;
  Vertex source = 0;
  std::uint64_t seed = 0;
  std::string out;
};

inline int cmd_gen(const GenOptions& o, std::ostream& out) {
  GenerateSpec spec{o.n, o.m, o.w, o.eps, o.source, o.seed};
  auto inst = generate(spec);
  write_output(o.out, out, serialize_instance(inst));
  return kExitOk;
}

struct PerturbOptions {
  std::string input;
  std::string kind = "identity";
  double parameter = 0;
  std::uint64_t seed = 0;
  bool permutation = false;
  std::string out;
  std::string profile;
};

inline int cmd_perturb(const PerturbOptions& o, std::ostream& out) {
  auto inst = parse_instance(read_file(o.input));
  PerturbationSpec spec{parse_perturbation_kind(o.kind), o.parameter, o.seed};
  auto pred = perturb(inst, spec, o.permutation);
  std::ostringstream text;
  write_prediction(text, pred);
  write_output(o.out, out, text.str());
  if (!o.profile.empty()) {
    auto rebound = rebind_prediction(pred, inst.sigma);
    auto profile = error_profile(inst.sigma.ids(), ids_of(rebound));
    write_output(o.profile, out, dump(profile_json(profile)));
  }
  return kExitOk;
}

// Offline queries `v t`. With --reverse, t counts deletions from the full graph.
inline int cmd_offline(const CommonOptions& o, std::ostream& out) {
  PhaseTimer timer(!o.no_timing);
  auto li = load_instance(o.input, o.eps);
  const auto original_m = static_cast<Time>(li.inst.sigma.size());
  if (o.reverse) {
    li.inst = reversed(li.inst);
    li.padded = pad_to_power_of_two(li.inst.sigma, li.inst.source);
  }
  auto structure = timer.run("build", [&] { return build_offline(li.inst, li.padded); });

  std::vector<std::vector<std::uint64_t>> queries;
  if (!o.queries.empty()) {
    std::istringstream qin(read_file(o.queries));
    queries = parse_queries(qin, 2);
  } else {
    for (Time t = 0; t <= original_m; ++t) {
      for (Vertex v = 0; v < li.inst.n; ++v) queries.push_back({v, t});
    }
  }
  std::ostringstream text;
  std::size_t max_comparisons = 0;
  timer.run("query", [&] {
    for (const auto& q : queries) {
      if (q[0] >= li.inst.n) throw ValidationError("query vertex out of range: " + std::to_string(q[0]));
      if (q[1] > original_m) throw ValidationError("query time out of range: " + std::to_string(q[1]));
      const auto t = static_cast<Time>(q[1]);
      QueryStats stats;
      Distance d = structure.query(static_cast<Vertex>(q[0]), o.reverse ? original_m - t : t, &stats);
      max_comparisons = std::max(max_comparisons, stats.comparisons);
      text << q[0] << ' ' << q[1] << ' ' << format_distance(d) << '\n';
    }
  });
  write_output(o.out, out, text.str());

  if (!o.metrics.empty()) {
    ordered_json doc;
    doc["command"] = "offline";
    doc["instance"] = instance_json(li.inst, li.padded, structure.table());
    doc["reverse"] = o.reverse;
    doc["build"] = build_counters_json(structure.counters());
    doc["total_alive_edges"] = structure.total_alive_edges();
    doc["queries"] = queries.size();
    doc["max_query_comparisons"] = max_comparisons;
    doc["timing_ms"] = timer.json();
    write_output(o.metrics, out, dump(doc));
  }
  return kExitOk;
}

inline int cmd_online(const CommonOptions& o, std::ostream& out) {
  PhaseTimer timer(!o.no_timing);
  auto li = load_instance(o.input, o.eps);
  auto raw = load_prediction(o.pred, li);
  auto profile = error_profile(li.inst.sigma.ids(), ids_of(raw));
  auto engine = timer.run("preprocess", [&] { return preprocess(li.inst, li.padded, raw); });
  const Time m = engine.m();
  const auto original_m = static_cast<Time>(li.inst.sigma.size());

  std::ostringstream trace;
  std::ostringstream csv;
  csv << "t,predicted_position,rebuilt_root,rebuilt_nodes,rebuild_alive_edge_work,d_writes\n";
  timer.run("updates", [&] {
    for (Time t = 1; t <= m; ++t) {
      auto report = engine.insert(li.padded.at(t));
      if (t > original_m) continue;
      trace << t;
      for (Distance d : engine.distances()) trace << ' ' << format_distance(d);
      trace << '\n';
      csv << t << ',' << report.predicted_position << ','
          << (report.rebuilt_root ? std::to_string(*report.rebuilt_root) : "") << ','
          << report.rebuilt_nodes << ',' << report.rebuild_alive_edge_work << ',' << report.d_writes
          << '\n';
    }
  });
  write_output(o.out, out, trace.str());
  if (!o.csv.empty()) write_output(o.csv, out, csv.str());

  if (!o.metrics.empty()) {
    ordered_json doc;
    doc["command"] = "online";
    doc["instance"] = instance_json(li.inst, li.padded, engine.structure().table());
    doc["counters"] = online_counters_json(engine.counters(), m);
    doc["total_alive_edge_work"] = engine.structure().counters().alive_edge_work;
    doc["error_profile"] = profile_json(profile);
    doc["timing_ms"] = timer.json();
    write_output(o.metrics, out, dump(doc));
  }
  return kExitOk;
}

// All-pairs queries `i j t`. Without --pred the offline structure answers
// directly; with --pred the online engine answers each query once time t is
// reached.
inline int cmd_apsp(const CommonOptions& o, std::ostream& out) {
  PhaseTimer timer(!o.no_timing);
  auto li = load_instance(o.input, o.eps);
  const auto original_m = static_cast<Time>(li.inst.sigma.size());
  if (o.queries.empty()) throw ValidationError("apsp needs --queries");
  std::istringstream qin(read_file(o.queries));
  auto queries = parse_queries(qin, 3);
  for (const auto& q : queries) {
    if (q[0] >= li.inst.n || q[1] >= li.inst.n) throw ValidationError("query vertex out of range");
    if (q[2] > original_m) throw ValidationError("query time out of range: " + std::to_string(q[2]));
  }
  std::vector<std::string> answers(queries.size());
  ordered_json doc;
  doc["command"] = "apsp";

  if (o.pred.empty()) {
    auto apsp = timer.run("build", [&] { return build_apsp(li.inst, li.padded, o.threads); });
    timer.run("query", [&] {
      for (std::size_t k = 0; k < queries.size(); ++k) {
        const auto& q = queries[k];
        answers[k] = format_distance(apsp.query(static_cast<Vertex>(q[0]), static_cast<Vertex>(q[1]),
                                                static_cast<Time>(q[2])));
      }
    });
    doc["instance"] = instance_json(li.inst, li.padded, apsp.table());
    doc["mode"] = "offline";
  } else {
    auto raw = load_prediction(o.pred, li);
    auto engine =
        timer.run("preprocess", [&] { return apsp_preprocess(li.inst, li.padded, raw, o.threads); });
    std::vector<std::size_t> order(queries.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return queries[a][2] < queries[b][2]; });
    std::size_t max_patch = 0;
    timer.run("updates", [&] {
      std::size_t next = 0;
      for (Time t = 0; t <= original_m; ++t) {
        if (t > 0) engine.insert(li.padded.at(t));
        max_patch = std::max(max_patch, engine.patch_size());
        for (; next < order.size() && queries[order[next]][2] == t; ++next) {
          const auto& q = queries[order[next]];
          answers[order[next]] =
              format_distance(engine.query(static_cast<Vertex>(q[0]), static_cast<Vertex>(q[1])));
        }
      }
    });
    doc["instance"] = instance_json(li.inst, li.padded, engine.structure().table());
    doc["mode"] = "online";
    doc["max_patch_edges"] = max_patch;
    doc["error_profile"] = profile_json(error_profile(li.inst.sigma.ids(), ids_of(raw)));
  }

  std::ostringstream text;
  for (std::size_t k = 0; k < queries.size(); ++k) {
    text << queries[k][0] << ' ' << queries[k][1] << ' ' << queries[k][2] << ' ' << answers[k] << '\n';
  }
  write_output(o.out, out, text.str());
  if (!o.metrics.empty()) {
    doc["queries"] = queries.size();
    doc["timing_ms"] = timer.json();
    write_output(o.metrics, out, dump(doc));
  }
  return kExitOk;
}

inline int cmd_metrics(const CommonOptions& o, std::ostream& out) {
  auto li = load_instance(o.input, std::nullopt);
  auto raw = load_prediction(o.pred, li);
  auto profile = error_profile(li.inst.sigma.ids(), ids_of(raw));
  write_output(o.out, out, dump(profile_json(profile)));
  return kExitOk;
}

inline ordered_json violations_json(const std::vector<oracle::Violation>& vs, std::size_t limit = 20) {
  ordered_json arr = ordered_json::array();
  for (std::size_t k = 0; k < vs.size() && k < limit; ++k) {
    const auto& v = vs[k];
    arr.push_back({{"source", v.source},
                   {"v", v.v},
                   {"t", v.t},
                   {"expected", distance_json(v.expected)},
                   {"got", distance_json(v.got)}});
  }
  return arr;
}

// Checks the offline build (and the online run when --pred is given) against
// the exact oracle.
inline int cmd_verify(const CommonOptions& o, std::ostream& out) {
  PhaseTimer timer(!o.no_timing);
  auto li = load_instance(o.input, o.eps);
  auto table = table_for(li.inst, li.padded.size());
  auto exact = timer.run("oracle", [&] {
    return oracle::ExactDistanceTable(li.padded.edges(), li.inst.n, li.inst.source);
  });
  auto structure = timer.run("offline_build", [&] { return build_offline(li.inst, li.padded, table); });
  auto offline = timer.run("offline_check", [&] { return oracle::verify_offline(structure, exact, li.inst.epsilon); });

  ordered_json doc;
  doc["command"] = "verify";
  doc["instance"] = instance_json(li.inst, li.padded, *table);
  doc["offline"] = {{"ok", offline.ok()},
                    {"queries", offline.queries},
                    {"violations", offline.violations.size()},
                    {"max_query_comparisons", offline.max_comparisons},
                    {"examples", violations_json(offline.violations)}};
  bool ok = offline.ok();

  if (!o.pred.empty()) {
    auto raw = load_prediction(o.pred, li);
    auto normalized = normalize_prediction(raw, li.padded, li.inst.sigma.size(), li.inst.source);
    auto online = timer.run("online_check", [&] {
      return oracle::verify_online_run(li.inst.n, li.inst.source, table, li.padded, normalized,
                                       li.inst.epsilon, exact);
    });
    doc["online"] = {{"ok", online.ok()},
                     {"violations", online.violations.size()},
                     {"prefix_failures", online.prefix_failures.size()},
                     {"equivalence_checked", online.equivalence_checked},
                     {"equivalence_failures", online.equivalence_failures.size()},
                     {"jump_bound", online.jump_bound},
                     {"jump_bound_failures", online.jump_bound_failures.size()},
                     {"rebuild_bound", online.rebuild_bound},
                     {"rebuild_bound_failures", online.rebuild_bound_failures.size()},
                     {"counters", online_counters_json(online.counters, static_cast<Time>(li.padded.size()))},
                     {"examples", violations_json(online.violations)}};
    doc["error_profile"] = profile_json(error_profile(li.inst.sigma.ids(), ids_of(raw)));
    ok = ok && online.ok();
  }
  doc["ok"] = ok;
  doc["timing_ms"] = timer.json();
  write_output(o.out, out, dump(doc));
  return ok ? kExitOk : kExitVerification;
}

struct BenchOptions {
  Vertex n = 30;
  std::size_t m = 128;
  Weight w = 32;
  double eps = 0.5;
  std::uint64_t seed = 0;
  std::string kind = "identity";
  double parameter = 0;
  unsigned threads = 1;
  bool apsp = false;
  bool no_timing = false;
  std::string out;
};

// Generates an instance and prediction, then reports timing and work for the
// offline build, the online run and (optionally) the APSP build.
inline int cmd_bench(const BenchOptions& o, std::ostream& out) {
  PhaseTimer timer(!o.no_timing);
  auto inst = generate({o.n, o.m, o.w, o.eps, 0, o.seed});
  PerturbationSpec spec{parse_perturbation_kind(o.kind), o.parameter, o.seed + 1};
  auto raw_pred = perturb(inst, spec, o.apsp);
  auto padded = pad_to_power_of_two(inst.sigma, inst.source);
  auto pred = rebind_prediction(raw_pred, padded);
  auto table = table_for(inst, padded.size());

  ordered_json doc;
  doc["command"] = "bench";
  doc["instance"] = instance_json(inst, padded, *table);
  doc["perturbation"] = {{"kind", to_string(spec.kind)}, {"parameter", o.parameter}};

  auto structure = timer.run("offline_build", [&] { return build_offline(inst, padded, table); });
  doc["offline"] = build_counters_json(structure.counters());
  doc["offline"]["total_alive_edges"] = structure.total_alive_edges();

  auto engine = timer.run("online_preprocess", [&] { return preprocess(inst, padded, pred, table); });
  timer.run("online_updates", [&] {
    for (Time t = 1; t <= engine.m(); ++t) engine.insert(padded.at(t));
  });
  doc["online"] = online_counters_json(engine.counters(), engine.m());
  doc["online"]["total_alive_edge_work"] = engine.structure().counters().alive_edge_work;
  doc["error_profile"] = profile_json(error_profile(inst.sigma.ids(), ids_of(pred)));

  if (o.apsp) {
    auto apsp = timer.run("apsp_build", [&] { return build_apsp(inst, padded, o.threads); });
    std::uint64_t work = 0;
    for (Vertex s = 0; s < apsp.n(); ++s) work += apsp.from(s).counters().alive_edge_work;
    doc["apsp"] = {{"sources", apsp.n()}, {"alive_edge_work", work}, {"threads", o.threads}};
  }
  doc["timing_ms"] = timer.json();
  write_output(o.out, out, dump(doc));
  return kExitOk;
}

// --- dispatch -------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incremental shortest paths with predicted insertion orders"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--n", gen.n, "Vertex count")->required();
  gen_cmd->add_option("--m", gen.m, "Edge count")->required();
  gen_cmd->add_option("--W", gen.w, "Maximum weight")->required();
  gen_cmd->add_option("--eps", gen.eps, "Epsilon written to the header");
  gen_cmd->add_option("--source", gen.source, "Source vertex");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  PerturbOptions pert;
  auto* pert_cmd = app.add_subcommand("perturb", "Write a predicted sequence for an instance");
  pert_cmd->add_option("--input", pert.input, "Instance file")->required();
  pert_cmd->add_option("--kind", pert.kind, "identity | window_shuffle | relocate | replace");
  pert_cmd->add_option("--param", pert.parameter, "Window size k or fraction p");
  pert_cmd->add_option("--seed", pert.seed, "Random seed")->required();
  pert_cmd->add_flag("--permutation", pert.permutation, "Require a permutation (APSP mode)");
  pert_cmd->add_option("--out", pert.out, "Output file (default stdout)");
  pert_cmd->add_option("--profile", pert.profile, "Also write the error profile JSON here");

  CommonOptions common;
  auto add_common = [&](CLI::App* cmd, bool pred_required) {
    cmd->add_option("--input", common.input, "Instance file")->required();
    auto* p = cmd->add_option("--pred", common.pred, "Prediction file");
    if (pred_required) p->required();
    cmd->add_option("--eps", common.eps, "Override the instance epsilon");
    cmd->add_option("--out", common.out, "Output file (default stdout)");
  };

  auto* off_cmd = app.add_subcommand("offline", "Answer (v, t) queries from the offline structure");
  add_common(off_cmd, false);
  off_cmd->add_option("--queries", common.queries, "Query file with lines `v t`");
  off_cmd->add_flag("--reverse", common.reverse, "Decremental: t counts deletions");
  off_cmd->add_option("--metrics", common.metrics, "Metrics JSON file");
  off_cmd->add_flag("--no-timing", common.no_timing, "Write zero wall-clock times");

  auto* on_cmd = app.add_subcommand("online", "Replay the instance through the online engine");
  add_common(on_cmd, true);
  on_cmd->add_option("--metrics", common.metrics, "Metrics JSON file");
  on_cmd->add_option("--csv", common.csv, "Per-step CSV trace");
  on_cmd->add_flag("--no-timing", common.no_timing, "Write zero wall-clock times");

  auto* apsp_cmd = app.add_subcommand("apsp", "Answer (i, j, t) all-pairs queries");
  add_common(apsp_cmd, false);
  apsp_cmd->add_option("--queries", common.queries, "Query file with lines `i j t`")->required();
  apsp_cmd->add_option("--threads", common.threads, "Parallel per-source builds");
  apsp_cmd->add_option("--metrics", common.metrics, "Metrics JSON file");
  apsp_cmd->add_flag("--no-timing", common.no_timing, "Write zero wall-clock times");

  auto* met_cmd = app.add_subcommand("metrics", "Error profile of a prediction");
  add_common(met_cmd, true);

  auto* ver_cmd = app.add_subcommand("verify", "Check the structures against the exact oracle");
  add_common(ver_cmd, false);
  ver_cmd->add_flag("--no-timing", common.no_timing, "Write zero wall-clock times");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Generate, build and report work counters");
  bench_cmd->add_option("--n", bench.n, "Vertex count");
  bench_cmd->add_option("--m", bench.m, "Edge count");
  bench_cmd->add_option("--W", bench.w, "Maximum weight");
  bench_cmd->add_option("--eps", bench.eps, "Epsilon");
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->required();
  bench_cmd->add_option("--kind", bench.kind, "Perturbation kind");
  bench_cmd->add_option("--param", bench.parameter, "Perturbation parameter");
  bench_cmd->add_option("--threads", bench.threads, "Parallel APSP builds");
  bench_cmd->add_flag("--apsp", bench.apsp, "Also build the APSP structure");
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Write zero wall-clock times");
  bench_cmd->add_option("--out", bench.out, "Output file (default stdout)");

  std::vector<std::string> argv_storage{"incsp"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (pert_cmd->parsed()) return cmd_perturb(pert, out);
    if (off_cmd->parsed()) return cmd_offline(common, out);
    if (on_cmd->parsed()) return cmd_online(common, out);
    if (apsp_cmd->parsed()) return cmd_apsp(common, out);
    if (met_cmd->parsed()) return cmd_metrics(common, out);
    if (ver_cmd->parsed()) return cmd_verify(common, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const oracle::BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace incsp::cli

#endif  // INCSP_TOOLS_CLI_HPP_
