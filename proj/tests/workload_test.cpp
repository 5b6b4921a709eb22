#include <gtest/gtest.h>

#include <set>

#include "incsp/error_metrics.hpp"
#include "incsp/workload.hpp"

namespace incsp {
namespace {

TEST(Generate, SmallestInstance) {
  auto inst = generate({2, 1, 1, 1.0, 0, 5});
  ASSERT_EQ(inst.sigma.size(), 1u);
  const auto& e = inst.sigma.at(1);
  EXPECT_NE(e.tail, e.head);
  EXPECT_EQ(e.weight, 1u);
}

TEST(Generate, Deterministic) {
  EXPECT_EQ(serialize_instance(generate({30, 128, 32, 0.5, 0, 7})),
            serialize_instance(generate({30, 128, 32, 0.5, 0, 7})));
  EXPECT_NE(serialize_instance(generate({30, 128, 32, 0.5, 0, 7})),
            serialize_instance(generate({30, 128, 32, 0.5, 0, 8})));
}

TEST(Generate, PassesValidation) {
  auto inst = generate({30, 128, 32, 0.5, 0, 7});
  EXPECT_NO_THROW(validate(inst));
  EXPECT_NO_THROW(parse_instance(serialize_instance(inst)));
  for (const auto& e : inst.sigma.edges()) EXPECT_NE(e.tail, e.head);
}

TEST(Generate, Errors) {
  EXPECT_THROW(generate({2, 3, 1, 1.0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(generate({1, 1, 1, 1.0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(generate({3, 0, 1, 1.0, 0, 0}), std::invalid_argument);
  EXPECT_NO_THROW(generate({2, 2, 1, 1.0, 0, 0}));
}

TEST(SeededRng, PortableSequence) {
  SeededRng a(42), b(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.below(1000), b.below(1000));
  SeededRng c(0);
  for (int k = 0; k < 1000; ++k) EXPECT_LT(c.below(7), 7u);
  EXPECT_THROW(c.below(0), std::invalid_argument);
}

TEST(Perturb, Identity) {
  auto inst = generate({10, 40, 5, 1.0, 0, 1});
  auto pred = perturb(inst, {PerturbationKind::kIdentity, 0, 3});
  EXPECT_EQ(ids_of(pred), inst.sigma.ids());
  EXPECT_EQ(error_profile(inst.sigma.ids(), ids_of(pred)).eta_max, 0u);
}

TEST(Perturb, WindowShuffleBound) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (double k : {1.0, 3.0, 4.0, 16.0}) {
      auto inst = generate({12, 100, 9, 1.0, 0, seed});
      auto pred = perturb(inst, {PerturbationKind::kWindowShuffle, k, seed});
      auto profile = error_profile(inst.sigma.ids(), ids_of(pred));
      EXPECT_LE(profile.eta_max, static_cast<std::uint64_t>(k));
      EXPECT_EQ(profile.edit % 2, 0u);
      auto sigma = inst.sigma.ids();
      std::multiset<EdgeId> a(sigma.begin(), sigma.end());
      auto p = ids_of(pred);
      EXPECT_EQ(a, std::multiset<EdgeId>(p.begin(), p.end()));
    }
  }
}

TEST(Perturb, RelocateCount) {
  EXPECT_EQ(perturbed_count(0.1, 128), 13u);
  EXPECT_EQ(perturbed_count(0.05, 32), 2u);
  EXPECT_EQ(perturbed_count(0.0, 32), 0u);
  EXPECT_EQ(perturbed_count(1.0, 32), 32u);
  EXPECT_THROW(perturbed_count(1.5, 32), std::invalid_argument);

  auto inst = generate({30, 128, 32, 1.0, 0, 4});
  auto pred = perturb(inst, {PerturbationKind::kRelocate, 0.1, 9});
  auto p = ids_of(pred);
  auto sigma = inst.sigma.ids();
  EXPECT_EQ(std::set<EdgeId>(p.begin(), p.end()), std::set<EdgeId>(sigma.begin(), sigma.end()));
  // Moving 13 edges leaves an order-preserved subsequence of at least m - 13.
  EXPECT_GE(lcs_length(sigma, p), 128u - 13u);
}

TEST(Perturb, ReplaceIntroducesFreshEdges) {
  auto inst = generate({30, 128, 32, 1.0, 0, 4});
  auto pred = perturb(inst, {PerturbationKind::kReplace, 0.05, 9});
  ASSERT_EQ(pred.size(), 128u);
  std::set<EdgeTriple> sigma;
  for (const auto& e : inst.sigma.edges()) sigma.insert(triple_of(e));
  std::set<EdgeTriple> seen;
  std::size_t fresh = 0;
  for (const auto& e : pred) {
    EXPECT_TRUE(seen.insert(triple_of(e)).second);
    EXPECT_NE(e.tail, e.head);
    fresh += sigma.count(triple_of(e)) ? 0 : 1;
  }
  EXPECT_EQ(fresh, 7u);
  EXPECT_THROW(perturb(inst, {PerturbationKind::kReplace, 0.05, 9}, true), std::invalid_argument);
}

TEST(Perturb, KindNames) {
  for (auto kind : {PerturbationKind::kIdentity, PerturbationKind::kWindowShuffle,
                    PerturbationKind::kRelocate, PerturbationKind::kReplace}) {
    EXPECT_EQ(parse_perturbation_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_perturbation_kind("bogus"), std::invalid_argument);
}

}  // namespace
}  // namespace incsp
