// Acceptance gate: one criterion per line, [PASS]/[FAIL] plus wall time.
// Exits nonzero if any criterion fails or overruns its budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "chrank/analysis.hpp"
#include "chrank/experiment.hpp"
#include "chrank/jacobian.hpp"
#include "chrank/rank.hpp"

using namespace chrank;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure(message);
}

template <typename T>
std::string str(const T& v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

AnalysisOptions options_with(std::uint64_t seed, AnalysisBackend backend,
                             int samples = 8) {
  AnalysisOptions options;
  options.seed = seed;
  options.backend = backend;
  options.samples = samples;
  return options;
}

ObservationPattern random_mask(std::vector<int> shape, std::int64_t m,
                               std::uint64_t seed) {
  Rng rng(seed);
  return sample_pattern(std::move(shape), m, rng);
}

// ---- criterion 1 & 2: the 2x2 closed-form regressions ----

void expect_jacobian(const ProblemSpec& spec,
                     const std::vector<double>& theta,
                     const std::vector<std::vector<double>>& expected) {
  ParameterPoint<double> point{spec, theta};
  const auto jac = assemble_jacobian(point, RealField{});
  require(jac.rows() == std::int64_t(expected.size()),
          "Jacobian has " + str(jac.rows()) + " rows, expected " +
              str(expected.size()));
  for (std::size_t r = 0; r < expected.size(); ++r) {
    require(jac.cols() == std::int64_t(expected[r].size()),
            "Jacobian has " + str(jac.cols()) + " cols, expected " +
                str(expected[r].size()));
    for (std::size_t c = 0; c < expected[r].size(); ++c)
      require(jac.matrix(std::int64_t(r), std::int64_t(c)) == expected[r][c],
              "entry (" + str(r) + "," + str(c) + ") is " +
                  str(jac.matrix(std::int64_t(r), std::int64_t(c))) +
                  ", expected " + str(expected[r][c]));
  }
}

void criterion_1() {
  const auto spec = ProblemSpec::matrix_completion(
      2, 2, 1, ObservationPattern::from_tuples({2, 2}, {{0, 0}, {1, 1}}));
  const auto report = check_wellposed(spec, options_with(7, AnalysisBackend::auto_crosscheck));
  require(report.estimate.char_rank == 4,
          "char_rank is " + str(report.estimate.char_rank) + ", expected 4");
  require(report.dims.wellposed_target == 5,
          "target is " + str(report.dims.wellposed_target) + ", expected 5");
  require(!report.wellposed, "diagonal mask must not be well-posed");
  // theta = (v1, v2, w1, w2, x(0,1), x(1,0))
  const double v1 = 2, v2 = 3, w1 = 5, w2 = 7;
  expect_jacobian(spec, {v1, v2, w1, w2, 11, 13},
                  {{w1, 0, v1, 0, 0, 0},
                   {w2, 0, 0, v1, 1, 0},
                   {0, w1, v2, 0, 0, 1},
                   {0, w2, 0, v2, 0, 0}});
}

void criterion_2() {
  const auto spec = ProblemSpec::matrix_completion(
      2, 2, 1,
      ObservationPattern::from_tuples({2, 2}, {{0, 0}, {0, 1}, {1, 0}}));
  const auto report = check_wellposed(spec, options_with(7, AnalysisBackend::auto_crosscheck));
  require(report.estimate.char_rank == 4,
          "char_rank is " + str(report.estimate.char_rank) + ", expected 4");
  require(report.dims.wellposed_target == 4,
          "target is " + str(report.dims.wellposed_target) + ", expected 4");
  require(report.wellposed, "three-cell mask must be well-posed");
  const double v1 = 2, v2 = 3, w1 = 5, w2 = 7;
  expect_jacobian(spec, {v1, v2, w1, w2, 11},
                  {{w1, 0, v1, 0, 0},
                   {w2, 0, 0, v1, 0},
                   {0, w1, v2, 0, 0},
                   {0, w2, 0, v2, 1}});
}

void criterion_3() {
  for (std::uint64_t mask_index = 0; mask_index < 50; ++mask_index) {
    const auto spec = ProblemSpec::matrix_completion(
        10, 10, 3,
        random_mask({10, 10}, 52, derive_seed(333, {mask_index})));
    const auto report = check_solvability(
        spec, options_with(derive_seed(334, {mask_index}),
                           AnalysisBackend::finite_field, 3));
    require(report.estimate.char_rank <= 99,
            "mask " + str(mask_index) + ": char_rank " +
                str(report.estimate.char_rank) + " exceeds 99");
    require(report.sard_unsolvable.has_value() && *report.sard_unsolvable,
            "mask " + str(mask_index) + ": expected sard_unsolvable");
  }
}

void criterion_4() {
  const struct {
    int n1, n2, n3, r;
    std::int64_t expected;
  } exact_cases[] = {{2, 2, 2, 1, 4}, {3, 4, 5, 2, 20}};
  for (const auto& c : exact_cases) {
    const auto spec = ProblemSpec::cpd(c.n1, c.n2, c.n3, c.r);
    const auto fp = characteristic_rank(
        spec, options_with(17, AnalysisBackend::finite_field));
    const auto svd =
        characteristic_rank(spec, options_with(18, AnalysisBackend::svd));
    require(fp.char_rank == c.expected,
            "finite-field char_rank " + str(fp.char_rank) + ", expected " +
                str(c.expected));
    require(svd.char_rank == c.expected,
            "svd char_rank " + str(svd.char_rank) + ", expected " +
                str(c.expected));
  }
  const auto over = check_wellposed(
      ProblemSpec::cpd(2, 2, 2, 3),
      options_with(19, AnalysisBackend::auto_crosscheck));
  require(over.estimate.char_rank <= 8, "char_rank " +
                                            str(over.estimate.char_rank) +
                                            " exceeds the ambient bound 8");
  require(over.dims.wellposed_target == 12, "target must be 12");
  require(!over.wellposed, "overcomplete cpd must not be well-posed");
}

// smallest grid p whose sample count reaches the counting bound 3n-2
double grid_bound(int n, const std::vector<double>& grid) {
  for (double p : grid)
    if (cell_sample_count(p, n) >= 3 * n - 2) return p;
  throw Failure("grid never reaches the counting bound for n=" + str(n));
}

void criterion_5() {
  SweepConfig config;
  config.n_values = {2, 3, 4, 5, 6};
  config.trials = 100;
  config.rank = 1;
  config.seed = 20260814;
  const auto result = run_sweep(config);

  // (a) hard zero below the counting bound
  for (const auto& cell : result.cells)
    if (cell.m < 3 * cell.n - 2)
      require(cell.probability == 0.0,
              "n=" + str(cell.n) + " p=" + str(cell.p) + " (m=" + str(cell.m) +
                  "): probability " + str(cell.probability) +
                  " in the impossible region");

  // (b) 90% thresholds exist and respect the grid-rounded counting bound
  const auto curve = extract_thresholds(result, 0.90);
  std::vector<double> thresholds;
  for (const auto& point : curve.per_n) {
    require(point.p_threshold.has_value(),
            "no 90% threshold found for n=" + str(point.n));
    const double bound = grid_bound(point.n, config.p_values);
    require(*point.p_threshold >= bound - 1e-12,
            "n=" + str(point.n) + ": threshold " + str(*point.p_threshold) +
                " below the grid-rounded bound " + str(bound));
    thresholds.push_back(*point.p_threshold);
  }

  // (c) non-increasing in n for n >= 3, one grid step of slack
  for (std::size_t i = 1; i + 1 < thresholds.size(); ++i)
    require(thresholds[i + 1] <= thresholds[i] + 0.02 + 1e-12,
            "threshold rises from n=" + str(config.n_values[i]) + " (" +
                str(thresholds[i]) + ") to n=" + str(config.n_values[i + 1]) +
                " (" + str(thresholds[i + 1]) + ")");
}

// ---- criterion 6: property suites ----

std::vector<ProblemSpec> property_corpus() {
  std::vector<ProblemSpec> specs;
  specs.push_back(ProblemSpec::matrix_completion(
      2, 2, 1, ObservationPattern::from_tuples({2, 2}, {{0, 0}, {1, 1}})));
  specs.push_back(
      ProblemSpec::matrix_completion(3, 3, 1, random_mask({3, 3}, 5, 601)));
  specs.push_back(
      ProblemSpec::matrix_completion(4, 5, 2, random_mask({4, 5}, 14, 602)));
  specs.push_back(ProblemSpec::cpd(2, 2, 2, 1));
  specs.push_back(ProblemSpec::cpd(2, 2, 2, 3));
  specs.push_back(ProblemSpec::cpd(3, 4, 5, 2));
  specs.push_back(ProblemSpec::cpd(3, 3, 3, 2));
  specs.push_back(ProblemSpec::tensor_completion(
      2, 2, 2, 1, random_mask({2, 2, 2}, 4, 603)));
  specs.push_back(ProblemSpec::tensor_completion(
      3, 3, 3, 1, random_mask({3, 3, 3}, 7, 604)));
  specs.push_back(ProblemSpec::tensor_completion(
      3, 4, 5, 2, random_mask({3, 4, 5}, 30, 605)));
  return specs;
}

void check_fd_agreement() {
  const RealField reals;
  int instances = 0;
  for (std::uint64_t trial = 0; instances < 100; ++trial) {
    Rng setup(derive_seed(5000, {trial}));
    const int variant = int(setup.below(3));
    const int n1 = 2 + int(setup.below(3));
    const int n2 = 2 + int(setup.below(3));
    const int n3 = 2 + int(setup.below(3));
    ProblemSpec spec;
    if (variant == 0) {
      const int r = 1 + int(setup.below(std::uint64_t(std::min(n1, n2))));
      const std::int64_t m =
          std::int64_t(setup.below(std::uint64_t(n1) * n2 + 1));
      spec = ProblemSpec::matrix_completion(
          n1, n2, r, random_mask({n1, n2}, m, derive_seed(5001, {trial})));
    } else if (variant == 1) {
      spec = ProblemSpec::cpd(n1, n2, n3, 1 + int(setup.below(4)));
    } else {
      const std::int64_t m =
          std::int64_t(setup.below(std::uint64_t(n1) * n2 * n3 + 1));
      spec = ProblemSpec::tensor_completion(
          n1, n2, n3, 1 + int(setup.below(3)),
          random_mask({n1, n2, n3}, m, derive_seed(5002, {trial})));
    }
    Rng rng(derive_seed(5003, {trial}));
    const auto point = random_point(spec, reals, rng);
    const auto analytic = assemble_jacobian(point, reals);

    const double h = 1e-4;
    double scale = 1.0, gap = 0.0;
    for (const double v : analytic.matrix.data())
      scale = std::max(scale, std::abs(v));
    ParameterPoint<double> shifted = point;
    for (std::int64_t c = 0; c < analytic.cols(); ++c) {
      const double saved = shifted.values[std::size_t(c)];
      shifted.values[std::size_t(c)] = saved + h;
      const auto plus = apply_map(shifted, reals);
      shifted.values[std::size_t(c)] = saved - h;
      const auto minus = apply_map(shifted, reals);
      shifted.values[std::size_t(c)] = saved;
      for (std::int64_t r = 0; r < analytic.rows(); ++r)
        gap = std::max(gap, std::abs(analytic.matrix(r, c) -
                                     (plus[std::size_t(r)] -
                                      minus[std::size_t(r)]) /
                                         (2 * h)));
    }
    require(gap / scale < 1e-6,
            "finite-difference gap " + str(gap / scale) + " on instance " +
                str(instances));
    ++instances;
  }
}

void check_backend_agreement() {
  for (const auto& spec : property_corpus()) {
    const auto fp = characteristic_rank(
        spec, options_with(21, AnalysisBackend::finite_field));
    const auto svd =
        characteristic_rank(spec, options_with(22, AnalysisBackend::svd));
    require(fp.char_rank == svd.char_rank,
            to_string(spec.variant()).data() +
                (": finite-field rank " + str(fp.char_rank) + " vs svd " +
                 str(svd.char_rank)));
  }
}

void check_permutation_invariance() {
  const PrimeField field(kDefaultPrime);
  for (const auto& spec : property_corpus()) {
    Rng rng(derive_seed(23, {std::uint64_t(spec.param_dim())}));
    const auto point = random_point(spec, field, rng);
    const auto jac = assemble_jacobian(point, field);
    const auto base = finite_field_rank(jac.matrix, field).rank;
    std::vector<std::int64_t> perm(std::size_t(jac.cols()));
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 20; ++trial) {
      for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[std::size_t(rng.below(i))]);
      DenseMatrix<std::uint64_t> permuted(jac.rows(), jac.cols());
      for (std::int64_t r = 0; r < jac.rows(); ++r)
        for (std::int64_t c = 0; c < jac.cols(); ++c)
          permuted(r, c) = jac.matrix(r, perm[std::size_t(c)]);
      require(finite_field_rank(permuted, field).rank == base,
              "rank changed under a column permutation");
    }
  }
}

void check_rescaling_invariance() {
  const PrimeField field(kDefaultPrime);
  for (const auto& spec : property_corpus()) {
    if (spec.variant() != Variant::cpd) continue;
    Rng rng(derive_seed(24, {std::uint64_t(spec.rank())}));
    const auto point = random_point(spec, field, rng);
    const auto base =
        finite_field_rank(assemble_jacobian(point, field).matrix, field).rank;
    const auto layout = BlockLayout::of(spec);
    for (int trial = 0; trial < 20; ++trial) {
      // unit-product column scaling (alpha, beta, (alpha*beta)^-1) fixes the
      // tensor, so the Jacobian rank at the rescaled point cannot move
      auto scaled = point;
      for (int l = 0; l < spec.rank(); ++l) {
        const auto alpha = field.add(field.sample(rng), field.one());
        const auto beta = field.add(field.sample(rng), field.one());
        const auto gamma = field.inv(field.mul(alpha, beta));
        const std::uint64_t factors[] = {alpha, beta, gamma};
        for (int f = 0; f < 3; ++f)
          for (int i = 0; i < layout.factor_rows[std::size_t(f)]; ++i) {
            auto& v = scaled.values[std::size_t(
                layout.factor_offset(f) +
                std::int64_t(l) * layout.factor_rows[std::size_t(f)] + i)];
            v = field.mul(v, factors[f]);
          }
      }
      require(finite_field_rank(assemble_jacobian(scaled, field).matrix, field)
                      .rank == base,
              "rank changed under a unit-product rescaling");
    }
  }
}

void check_sample_concentration() {
  for (const auto& spec : property_corpus()) {
    const auto estimate = characteristic_rank(
        spec, options_with(25, AnalysisBackend::finite_field));
    require(estimate.all_samples_agree,
            "sample ranks disagree on " + std::string(to_string(spec.variant())));
  }
}

void check_csv_determinism() {
  SweepConfig config;
  config.n_values = {2, 3};
  config.p_values = {0.1, 0.3, 0.5, 0.8};
  config.trials = 25;
  config.seed = 77;
  std::vector<std::string> outputs;
  for (const int workers : {1, 2, 0}) {  // 0 = all cores
    config.workers = workers;
    const auto result = run_sweep(config);
    std::ostringstream csv;
    for (const auto& cell : result.cells)
      csv << cell.n << ',' << cell.p << ',' << cell.m << ',' << cell.successes
          << '\n';
    outputs.push_back(csv.str());
  }
  require(outputs[0] == outputs[1] && outputs[0] == outputs[2],
          "sweep output differs across worker counts");
}

void criterion_6() {
  check_fd_agreement();
  check_backend_agreement();
  check_permutation_invariance();
  check_rescaling_invariance();
  check_sample_concentration();
  check_csv_determinism();
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // <= 0: no budget
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "2x2 diagonal-mask regression (rank 4 < target 5, closed-form Jacobian)",
       1.0, criterion_1},
      {2, "2x2 three-cell regression (rank 4 = target 4, closed-form Jacobian)",
       1.0, criterion_2},
      {3, "Sard regime: 50 masks, m=52 on 10x10 rank 3, rank <= 99, unsolvable",
       30.0, criterion_3},
      {4, "CPD ranks 4/20 on both backends; overcomplete (2,2,2,3) capped at 8",
       10.0, criterion_4},
      {5, "phase-transition sweep n=2..6: hard zeros, threshold bounds, monotone",
       300.0, criterion_5},
      {6, "property suites: FD, backend agreement, invariances, determinism",
       0.0, criterion_6},
  };
  bool all_pass = true;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (failure.empty() && criterion.budget_seconds > 0 &&
        elapsed >= criterion.budget_seconds)
      failure = "exceeded the " + str(criterion.budget_seconds) + "s budget";
    if (failure.empty()) {
      std::printf("[PASS] criterion %d: %s (%.2fs)\n", criterion.id,
                  criterion.name, elapsed);
    } else {
      std::printf("[FAIL] criterion %d: %s -- %s (%.2fs)\n", criterion.id,
                  criterion.name, failure.c_str(), elapsed);
      all_pass = false;
    }
  }
  return all_pass ? 0 : 1;
}
