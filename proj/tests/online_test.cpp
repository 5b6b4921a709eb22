#include <gtest/gtest.h>

#include <algorithm>

#include <cmath>

#include "incsp/error_metrics.hpp"
#include "incsp/online.hpp"
#include "incsp/oracle.hpp"
#include "incsp/workload.hpp"
#include "test_support.hpp"

namespace incsp {
namespace {

using testing::make_scenario;
using testing::Scenario;

OnlineEngine engine_for(const Scenario& s) {
  return OnlineEngine(s.inst.n, s.inst.source, s.table, s.prediction);
}

Scenario t1_permuted() {
  auto inst = testing::t1();
  return make_scenario(inst,
                       parse_prediction(std::string(testing::kT1PermutedPrediction), inst, inst.sigma));
}

TEST(UpdatedPrediction, MoveAndInsert) {
  UpdatedPrediction p({10, 11, 12, 13});
  EXPECT_EQ(p.position_of(12), 3u);
  EXPECT_EQ(p.position_of(99), 5u);
  EXPECT_EQ(p.move(3, 1), 2u);
  EXPECT_EQ(p.order(), (std::vector<EdgeId>{12, 10, 11, 13}));
  EXPECT_EQ(p.position_of(10), 2u);
  EXPECT_EQ(p.insert_at(2, 20), 13u);
  EXPECT_EQ(p.order(), (std::vector<EdgeId>{12, 20, 10, 11}));
  EXPECT_EQ(p.position_of(13), 5u);
  EXPECT_EQ(p.position_of(20), 2u);
  EXPECT_EQ(p.size(), 4u);
}

TEST(JumpedMidpoints, Examples) {
  auto r = jumped_midpoint_range(4, 8, 16);
  EXPECT_EQ(r.first, 4u);
  EXPECT_EQ(r.last, 7u);
  EXPECT_EQ(shallowest_midpoint(r.first, r.last), 4u);
  EXPECT_EQ(node_left(4), 0u);
  EXPECT_EQ(node_right(4), 8u);
  EXPECT_TRUE(jumped_midpoint_range(3, 3, 16).empty());
  auto full = jumped_midpoint_range(1, 17, 16);
  EXPECT_EQ(full.first, 1u);
  EXPECT_EQ(full.last, 15u);
  EXPECT_THROW(jumped_midpoint_range(4, 3, 16), std::invalid_argument);
}

TEST(OnlineT1, PreprocessMatchesOfflineBuild) {
  auto inst = testing::t1();
  auto s = make_scenario(inst, {inst.sigma.edges().begin(), inst.sigma.edges().end()});
  auto engine = engine_for(s);
  auto fresh = OfflineStructure(s.inst.n, 0, s.table, EdgeCatalog(s.prediction), ids_of(s.prediction),
                                {.query_tables = false});
  EXPECT_TRUE(engine.structure().same_tree(fresh));
  EXPECT_EQ(engine.current_distance(0), 0.0);
  EXPECT_TRUE(is_unreachable(engine.current_distance(1)));
  EXPECT_TRUE(is_unreachable(engine.current_distance(2)));
}

TEST(OnlineT1, PermutedTrace) {
  auto s = t1_permuted();
  auto engine = engine_for(s);
  const EdgeId e1 = s.padded.at(1).id, e2 = s.padded.at(2).id, e3 = s.padded.at(3).id,
               e4 = s.padded.at(4).id;

  auto r1 = engine.insert(s.padded.at(1));
  EXPECT_EQ(r1.predicted_position, 2u);
  EXPECT_EQ(engine.prediction().order(), (std::vector<EdgeId>{e1, e2, e3, e4}));
  EXPECT_EQ(r1.jumped_midpoints.first, 1u);
  EXPECT_EQ(r1.jumped_midpoints.last, 1u);
  ASSERT_TRUE(r1.rebuilt_root.has_value());
  EXPECT_EQ(*r1.rebuilt_root, 1u);
  EXPECT_EQ(r1.rebuilt_nodes, 1u);
  EXPECT_EQ(r1.refreshed_times, (std::vector<Time>{0, 1}));
  EXPECT_EQ(engine.current_distance(1), engine.structure().estimate_at(1, 1));
  EXPECT_GE(engine.current_distance(1), 4.0);

  for (Time t = 2; t <= 4; ++t) {
    auto r = engine.insert(s.padded.at(t));
    EXPECT_EQ(r.predicted_position, t);
    EXPECT_FALSE(r.rebuilt_root.has_value());
    EXPECT_EQ(r.refreshed_times, (std::vector<Time>{t}));
  }
  const double eps = s.inst.epsilon;
  EXPECT_EQ(engine.current_distance(0), 0.0);
  EXPECT_GE(engine.current_distance(1), 1.0);
  EXPECT_LE(engine.current_distance(1), 1.0 * (1 + eps));
  EXPECT_GE(engine.current_distance(2), 3.0);
  EXPECT_LE(engine.current_distance(2), 3.0 * (1 + eps));
  EXPECT_EQ(engine.counters().jumps_per_position[1], 1u);
  EXPECT_EQ(engine.counters().jumps_per_position[2], 0u);
  EXPECT_EQ(engine.counters().rebuilds_per_node[1], 1u);
}

TEST(OnlineT1, Errors) {
  auto s = t1_permuted();
  auto engine = engine_for(s);
  engine.insert(s.padded.at(1));
  EXPECT_THROW(engine.insert(s.padded.at(1)), ValidationError);
  for (Time t = 2; t <= 4; ++t) engine.insert(s.padded.at(t));
  EXPECT_THROW(engine.insert({99, 0, 1, 1}), std::logic_error);
  EXPECT_THROW(engine.current_distance(3), std::out_of_range);
}

TEST(Online, AbsentEdgeRebuildsEverything) {
  auto inst = generate({6, 8, 5, 1.0, 0, 3});
  // Prediction drops sigma's first edge for a fresh one.
  std::vector<EdgeInsert> pred(inst.sigma.edges().begin(), inst.sigma.edges().end());
  pred[0] = {999, 5, 4, 5};
  if (std::find_if(inst.sigma.edges().begin(), inst.sigma.edges().end(),
                   [](const EdgeInsert& e) { return triple_of(e) == EdgeTriple{5, 4, 5}; }) !=
      inst.sigma.edges().end()) {
    pred[0] = {999, 5, 4, 4};
  }
  auto s = make_scenario(inst, pred);
  const EdgeId fresh = s.prediction[0].id;
  auto engine = engine_for(s);
  auto r = engine.insert(s.padded.at(1));
  EXPECT_EQ(r.predicted_position, 9u);
  EXPECT_TRUE(r.base_recomputed);
  ASSERT_TRUE(r.rebuilt_root.has_value());
  EXPECT_EQ(*r.rebuilt_root, 4u);
  EXPECT_EQ(r.rebuilt_nodes, 7u);
  EXPECT_EQ(engine.prediction().at(1), s.padded.at(1).id);
  EXPECT_EQ(engine.prediction().position_of(fresh), 2u);
}

TEST(Online, IdentityPredictionNeverRebuilds) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = testing::random_scenario(12, 70, 9, 0.5, seed);
    auto engine = engine_for(s);
    for (Time t = 1; t <= engine.m(); ++t) engine.insert(s.padded.at(t));
    EXPECT_EQ(engine.counters().rebuilt_nodes, 0u);
    EXPECT_EQ(engine.counters().shift_work, 0u);
  }
}

struct OnlineCase {
  PerturbationKind kind;
  double parameter;
};

class OnlineProperties
    : public ::testing::TestWithParam<std::tuple<std::uint64_t, OnlineCase>> {};

TEST_P(OnlineProperties, MatchesOracleAndBounds) {
  auto [seed, c] = GetParam();
  SeededRng rng(seed);
  const Vertex n = 3 + static_cast<Vertex>(rng.below(14));
  const Weight w = 1 + rng.below(20);
  const std::size_t m = std::min<std::size_t>(2 + rng.below(62), std::size_t{n} * (n - 1) * w);
  const double eps = 0.1 + static_cast<double>(rng.below(90)) / 100.0;
  auto s = testing::random_scenario(n, m, w, eps, seed, {c.kind, c.parameter, 0});
  oracle::ExactDistanceTable exact(s.padded.edges(), s.inst.n, s.inst.source);
  auto report = oracle::verify_online_run(s.inst.n, s.inst.source, s.table, s.padded, s.prediction,
                                          s.inst.epsilon, exact);
  EXPECT_TRUE(report.violations.empty());
  EXPECT_TRUE(report.prefix_failures.empty());
  EXPECT_TRUE(report.equivalence_checked);
  EXPECT_TRUE(report.equivalence_failures.empty());
  EXPECT_TRUE(report.jump_bound_failures.empty());
  EXPECT_TRUE(report.rebuild_bound_failures.empty());
}

TEST_P(OnlineProperties, UntouchedNodesStable) {
  auto [seed, c] = GetParam();
  auto s = testing::random_scenario(8, 30, 6, 0.5, seed, {c.kind, c.parameter, 0});
  auto engine = engine_for(s);
  for (Time t = 1; t <= engine.m(); ++t) {
    std::vector<RecursionNode> before;
    for (Time x = 1; x < engine.m(); ++x) before.push_back(engine.structure().node(x));
    auto r = engine.insert(s.padded.at(t));
    for (Time x = 1; x < engine.m(); ++x) {
      const bool inside = r.rebuilt_root && !r.base_recomputed && x > node_left(*r.rebuilt_root) &&
                          x < node_right(*r.rebuilt_root);
      if (!inside && !r.base_recomputed) EXPECT_EQ(engine.structure().node(x), before[x - 1]);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Perturbations, OnlineProperties,
    ::testing::Combine(::testing::Range<std::uint64_t>(1, 9),
                       ::testing::Values(OnlineCase{PerturbationKind::kIdentity, 0},
                                         OnlineCase{PerturbationKind::kWindowShuffle, 1},
                                         OnlineCase{PerturbationKind::kWindowShuffle, 4},
                                         OnlineCase{PerturbationKind::kWindowShuffle, 16},
                                         OnlineCase{PerturbationKind::kRelocate, 0.1},
                                         OnlineCase{PerturbationKind::kReplace, 0.1})));

TEST(Online, ShortAndLongPredictionsAreNormalized) {
  auto inst = generate({7, 12, 4, 0.5, 0, 21});
  auto padded = pad_to_power_of_two(inst.sigma, 0);
  std::vector<EdgeInsert> shorter(inst.sigma.edges().begin(), inst.sigma.edges().begin() + 5);
  auto engine = preprocess(inst, padded, rebind_prediction(shorter, padded));
  EXPECT_EQ(engine.prediction().size(), 16u);
  oracle::ExactDistanceTable exact(padded.edges(), inst.n, 0);
  for (Time t = 1; t <= 16; ++t) {
    engine.insert(padded.at(t));
    for (Vertex v = 0; v < inst.n; ++v) {
      EXPECT_TRUE(oracle::within(engine.current_distance(v), exact.at(t, v), inst.epsilon));
    }
  }

  std::vector<EdgeInsert> longer(inst.sigma.edges().begin(), inst.sigma.edges().end());
  for (Vertex k = 0; k < 10; ++k) longer.push_back({0, k % 7, (k + 1) % 7, 100 + k});
  auto rebound = rebind_prediction(longer, padded);
  auto normalized = normalize_prediction(rebound, padded, inst.sigma.size(), 0);
  EXPECT_EQ(normalized.size(), 16u);
}

}  // namespace
}  // namespace incsp
