#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "incsp/error_metrics.hpp"
#include "incsp/oracle.hpp"
#include "incsp/workload.hpp"
#include "test_support.hpp"

namespace incsp {
namespace {

std::vector<EdgeId> ids(std::initializer_list<EdgeId> list) { return list; }

TEST(PerEdgeErrors, T1Permutation) {
  auto inst = testing::t1();
  auto pred = parse_prediction(std::string(testing::kT1PermutedPrediction), inst, inst.sigma);
  auto profile = error_profile(inst.sigma.ids(), ids_of(pred));
  std::vector<std::uint64_t> eta;
  for (const auto& e : profile.eta_per_edge) eta.push_back(e.eta);
  EXPECT_EQ(eta, (std::vector<std::uint64_t>{1, 1, 0, 0}));
  EXPECT_EQ(profile.eta_max, 1u);
  ASSERT_TRUE(profile.hamming.has_value());
  EXPECT_EQ(*profile.hamming, 2u);
  EXPECT_EQ(profile.edit, 2u);
  EXPECT_EQ(profile.objective.value, 1u);
  EXPECT_EQ(profile.objective.tau, 1u);
  EXPECT_EQ(profile.high_cardinality, (std::vector<std::size_t>{2, 0, 0, 0, 0}));
  EXPECT_EQ(profile.jump_bound.value, 1u);
}

TEST(PerEdgeErrors, AbsentEdgesUseMPlusOne) {
  auto errs = per_edge_errors(ids({1, 2, 3, 4}), ids({1, 2, 9}));
  EXPECT_EQ(errs[2].predicted_index, 5u);
  EXPECT_EQ(errs[2].eta, 2u);
  EXPECT_EQ(errs[3].eta, 1u);
  EXPECT_EQ(max_error(errs), 2u);
}

TEST(PerEdgeErrors, RejectsRepeats) {
  EXPECT_THROW(per_edge_errors(ids({1, 1}), ids({1, 2})), ValidationError);
  EXPECT_THROW(per_edge_errors(ids({1, 2}), ids({2, 2})), ValidationError);
}

TEST(EditDistance, Examples) {
  EXPECT_EQ(edit_distance(ids({1, 2, 3}), ids({1, 2, 3})), 0u);
  EXPECT_EQ(edit_distance(ids({1, 2, 3}), ids({3, 2, 1})), 4u);
  EXPECT_EQ(edit_distance(ids({1, 2}), ids({})), 2u);
  EXPECT_EQ(edit_distance(ids({1, 2, 3}), ids({1, 7, 3})), 2u);
}

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming(ids({1, 2, 3}), ids({1, 3, 2})), 2u);
  EXPECT_THROW(hamming(ids({1}), ids({1, 2})), std::invalid_argument);
}

TEST(HighCardinality, MatchesDirectCount) {
  SeededRng rng(5);
  for (int round = 0; round < 200; ++round) {
    const std::size_t m = 1 + rng.below(30);
    std::vector<EdgeId> a(m), b;
    std::iota(a.begin(), a.end(), 0);
    b = a;
    rng.shuffle(b, 0, m);
    for (auto& id : b) {
      if (rng.below(5) == 0) id += 1000;
    }
    auto errs = per_edge_errors(a, b);
    auto high = high_cardinality(errs);
    ASSERT_EQ(high.size(), m + 1);
    for (std::size_t tau = 0; tau <= m; ++tau) {
      EXPECT_EQ(high[tau], high_set(errs, tau).size());
    }
    std::size_t best = SIZE_MAX;
    std::size_t best2 = SIZE_MAX;
    for (std::size_t tau = 0; tau <= m; ++tau) {
      best = std::min(best, tau + high[tau]);
      best2 = std::min(best2, tau + 2 * high[tau]);
    }
    EXPECT_EQ(min_tau_objective(errs).value, best);
    EXPECT_EQ(jump_bound(errs).value, best2);
    // Both objectives are at most the max error (tau = eta_max) and at most m.
    EXPECT_LE(best, max_error(errs));
    EXPECT_LE(best, m);
  }
}

TEST(EditDistance, MatchesBruteForce) {
  SeededRng rng(11);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t m = rng.below(11);
    std::vector<EdgeId> a(m);
    std::iota(a.begin(), a.end(), 0);
    std::vector<EdgeId> b = a;
    rng.shuffle(b, 0, m);
    const std::size_t drop = m == 0 ? 0 : rng.below(m + 1);
    b.resize(m - drop);
    const std::size_t extra = rng.below(4);
    for (std::size_t k = 0; k < extra; ++k) {
      b.insert(b.begin() + static_cast<std::ptrdiff_t>(rng.below(b.size() + 1)),
               static_cast<EdgeId>(100 + k));
    }
    EXPECT_EQ(edit_distance(a, b), oracle::brute_edit_distance(a, b));
  }
}

TEST(ErrorProfile, BasicRelations) {
  SeededRng rng(2);
  for (int round = 0; round < 100; ++round) {
    const std::size_t m = 1 + rng.below(40);
    std::vector<EdgeId> a(m);
    std::iota(a.begin(), a.end(), 0);
    auto b = a;
    rng.shuffle(b, 0, m);
    auto p = error_profile(a, b);
    ASSERT_TRUE(p.hamming.has_value());
    EXPECT_EQ(*p.hamming, p.high_cardinality[0]);
    EXPECT_LE(p.objective.value, m);
    EXPECT_LE(p.edit, 2 * *p.hamming);
  }
}

}  // namespace
}  // namespace incsp
