#ifndef INCSP_TESTS_TEST_SUPPORT_HPP_
#define INCSP_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "incsp/model.hpp"
#include "incsp/offline.hpp"
#include "incsp/workload.hpp"

namespace incsp::testing {

// n=3, W=8, sigma = (0,1,4) (1,2,2) (0,2,8) (0,1,1), source 0.
inline constexpr const char* kT1Text =
    "3 4 8 1.0 0\n"
    "0 1 4\n"
    "1 2 2\n"
    "0 2 8\n"
    "0 1 1\n";

// e2 e1 e3 e4
inline constexpr const char* kT1PermutedPrediction =
    "1 2 2\n"
    "0 1 4\n"
    "0 2 8\n"
    "0 1 1\n";

inline ProblemInstance t1() { return parse_instance(std::string(kT1Text)); }

// Everything a run needs, already padded and with prediction ids bound.
struct Scenario {
  ProblemInstance inst;
  InsertSequence padded;
  std::vector<EdgeInsert> prediction;  // normalized to padded length
  std::vector<EdgeInsert> raw_prediction;
  std::shared_ptr<const BucketTable> table;
};

inline Scenario make_scenario(const ProblemInstance& inst, const std::vector<EdgeInsert>& raw) {
  Scenario s;
  s.inst = inst;
  s.padded = pad_to_power_of_two(inst.sigma, inst.source);
  s.raw_prediction = rebind_prediction(raw, s.padded);
  s.prediction = normalize_prediction(s.raw_prediction, s.padded, inst.sigma.size(), inst.source);
  s.table = table_for(inst, s.padded.size());
  return s;
}

inline Scenario random_scenario(Vertex n, std::size_t m, Weight w, double eps, std::uint64_t seed,
                                PerturbationSpec spec = {}) {
  auto inst = generate({n, m, w, eps, 0, seed});
  spec.seed = seed * 7919 + 13;
  return make_scenario(inst, perturb(inst, spec));
}

}  // namespace incsp::testing

#endif  // INCSP_TESTS_TEST_SUPPORT_HPP_
