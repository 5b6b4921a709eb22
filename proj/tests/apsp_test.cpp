#include <gtest/gtest.h>

#include "incsp/apsp.hpp"
#include "incsp/error_metrics.hpp"
#include "incsp/oracle.hpp"
#include "incsp/workload.hpp"
#include "test_support.hpp"

namespace incsp {
namespace {

TEST(ApspOffline, T1) {
  auto inst = testing::t1();
  auto padded = pad_to_power_of_two(inst.sigma, inst.source);
  auto apsp = build_apsp(inst, padded);
  oracle::ExactApspTable exact(padded.edges(), inst.n);
  for (Time t = 0; t <= 4; ++t) {
    for (Vertex i = 0; i < 3; ++i) {
      for (Vertex j = 0; j < 3; ++j) {
        EXPECT_TRUE(oracle::within(apsp.query(i, j, t), exact.at(t, i, j), inst.epsilon))
            << i << ' ' << j << ' ' << t;
      }
    }
  }
  EXPECT_THROW(apsp.from(3), std::out_of_range);
}

TEST(ApspOffline, ThreadedBuildIsIdentical) {
  auto inst = generate({9, 40, 6, 0.5, 0, 8});
  auto padded = pad_to_power_of_two(inst.sigma, 0);
  auto a = build_apsp(inst, padded, 1);
  auto b = build_apsp(inst, padded, 4);
  for (Vertex s = 0; s < inst.n; ++s) EXPECT_TRUE(a.from(s).same_tree(b.from(s)));
}

class ApspProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ApspProperties, OfflineSandwich) {
  SeededRng rng(GetParam());
  const auto n = static_cast<Vertex>(3 + rng.below(10));
  const std::size_t m = 2 + rng.below(60);
  auto inst = generate({n, m, 1 + rng.below(16), 0.2 + 0.1 * static_cast<double>(rng.below(8)), 0,
                        GetParam()});
  auto padded = pad_to_power_of_two(inst.sigma, 0);
  auto apsp = build_apsp(inst, padded);
  oracle::ExactApspTable exact(padded.edges(), n);
  for (Time t = 0; t <= padded.size(); ++t) {
    for (Vertex i = 0; i < n; ++i) {
      for (Vertex j = 0; j < n; ++j) {
        ASSERT_TRUE(oracle::within(apsp.query(i, j, t), exact.at(t, i, j), inst.epsilon));
      }
    }
  }
}

TEST_P(ApspProperties, OnlineSandwichAndPatchSize) {
  SeededRng rng(GetParam());
  const auto n = static_cast<Vertex>(3 + rng.below(10));
  const std::size_t m = 2 + rng.below(60);
  auto inst = generate({n, m, 1 + rng.below(16), 0.3, 0, GetParam()});
  auto padded = pad_to_power_of_two(inst.sigma, 0);
  const double k = static_cast<double>(1 + rng.below(8));
  auto raw = perturb(inst, {PerturbationKind::kWindowShuffle, k, GetParam() + 1}, true);
  auto engine = apsp_preprocess(inst, padded, raw);
  auto normalized = normalize_prediction(rebind_prediction(raw, padded), padded, m, 0);
  const auto eta_max = max_error(per_edge_errors(padded.ids(), ids_of(normalized)));
  oracle::ExactApspTable exact(padded.edges(), n);
  for (Time t = 1; t <= padded.size(); ++t) {
    engine.insert(padded.at(t));
    EXPECT_LE(engine.patch_size(), eta_max);
    for (Vertex i = 0; i < n; ++i) {
      for (Vertex j = 0; j < n; ++j) {
        ApspQueryStats stats;
        ASSERT_TRUE(oracle::within(engine.query(i, j, &stats), exact.at(t, i, j), inst.epsilon))
            << i << ' ' << j << ' ' << t;
        EXPECT_LE(stats.patch_vertices, 2 * engine.patch_size() + 2);
      }
    }
  }
  EXPECT_EQ(engine.frontier(), padded.size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, ApspProperties, ::testing::Range<std::uint64_t>(1, 13));

TEST(ApspOnline, RejectsNonPermutation) {
  auto inst = generate({6, 10, 5, 0.5, 0, 2});
  auto padded = pad_to_power_of_two(inst.sigma, 0);
  auto raw = perturb(inst, {PerturbationKind::kReplace, 0.2, 3});
  EXPECT_THROW(apsp_preprocess(inst, padded, raw), ValidationError);
  raw = perturb(inst, {PerturbationKind::kIdentity, 0, 3});
  raw.pop_back();
  EXPECT_THROW(apsp_preprocess(inst, padded, raw), ValidationError);
}

TEST(ApspOnline, DuplicateInsertRejected) {
  auto inst = generate({5, 8, 5, 0.5, 0, 2});
  auto padded = pad_to_power_of_two(inst.sigma, 0);
  auto engine = apsp_preprocess(inst, padded, perturb(inst, {}));
  engine.insert(padded.at(1));
  EXPECT_THROW(engine.insert(padded.at(1)), ValidationError);
}

}  // namespace
}  // namespace incsp
