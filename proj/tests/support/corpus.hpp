#pragma once

// Shared problem corpus for the property suites: a spread of matrix
// completion, CPD, and tensor completion instances small enough for the svd
// backend yet varied in shape, rank, and observation density.

#include <cstdint>
#include <vector>

#include "chrank/experiment.hpp"
#include "chrank/jacobian.hpp"
#include "chrank/problem.hpp"
#include "chrank/rng.hpp"

namespace chrank::testing {

inline ObservationPattern random_mask(std::vector<int> shape, std::int64_t m,
                                      std::uint64_t seed) {
  Rng rng(seed);
  return sample_pattern(std::move(shape), m, rng);
}

inline std::vector<ProblemSpec> corpus() {
  std::vector<ProblemSpec> specs;
  // matrix completion
  specs.push_back(ProblemSpec::matrix_completion(
      2, 2, 1, ObservationPattern::from_tuples({2, 2}, {{0, 0}, {1, 1}})));
  specs.push_back(ProblemSpec::matrix_completion(
      2, 2, 1,
      ObservationPattern::from_tuples({2, 2}, {{0, 0}, {0, 1}, {1, 0}})));
  specs.push_back(
      ProblemSpec::matrix_completion(3, 3, 1, random_mask({3, 3}, 5, 101)));
  specs.push_back(
      ProblemSpec::matrix_completion(4, 5, 2, random_mask({4, 5}, 14, 102)));
  specs.push_back(
      ProblemSpec::matrix_completion(4, 4, 2, ObservationPattern::full({4, 4})));
  specs.push_back(
      ProblemSpec::matrix_completion(5, 4, 3, random_mask({5, 4}, 18, 103)));
  // cpd
  specs.push_back(ProblemSpec::cpd(2, 2, 2, 1));
  specs.push_back(ProblemSpec::cpd(2, 2, 2, 3));
  specs.push_back(ProblemSpec::cpd(3, 4, 5, 2));
  specs.push_back(ProblemSpec::cpd(3, 3, 3, 2));
  specs.push_back(ProblemSpec::cpd(2, 3, 4, 2));
  specs.push_back(ProblemSpec::cpd(4, 4, 4, 3));
  // tensor completion
  specs.push_back(ProblemSpec::tensor_completion(
      2, 2, 2, 1, random_mask({2, 2, 2}, 4, 104)));
  specs.push_back(ProblemSpec::tensor_completion(
      3, 3, 3, 1, random_mask({3, 3, 3}, 7, 105)));
  specs.push_back(ProblemSpec::tensor_completion(
      3, 3, 3, 2, random_mask({3, 3, 3}, 20, 106)));
  specs.push_back(ProblemSpec::tensor_completion(
      4, 4, 4, 1, random_mask({4, 4, 4}, 10, 107)));
  specs.push_back(ProblemSpec::tensor_completion(
      3, 4, 5, 2, random_mask({3, 4, 5}, 30, 108)));
  specs.push_back(ProblemSpec::tensor_completion(
      3, 3, 3, 1, ObservationPattern::full({3, 3, 3})));
  return specs;
}

/// Parameter point with small integer entries: every Jacobian entry is then
/// an exact integer over the reals and reduces losslessly into F_p, so the
/// same matrix can be ranked by all three routes (rational oracle, svd,
/// finite field).
inline ParameterPoint<double> integer_point(const ProblemSpec& spec,
                                            std::uint64_t seed, int range = 5) {
  Rng rng(seed);
  ParameterPoint<double> point{spec, {}};
  point.values.resize(static_cast<std::size_t>(spec.param_dim()));
  for (auto& v : point.values) {
    do {
      v = double(std::int64_t(rng.below(std::uint64_t(2 * range + 1))) - range);
    } while (v == 0.0);  // keep factors away from the degenerate all-zero case
  }
  return point;
}

}  // namespace chrank::testing
