#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "chrank/analysis.hpp"
#include "chrank/pattern.hpp"
#include "chrank/rng.hpp"

namespace chrank {

/// Monte Carlo sweep over cubic tensor size n and sampling proportion p:
/// each cell draws `trials` uniform masks of m = ceil(p * n^3) cells and
/// counts how often the tensor-completion instance is well-posed.
struct SweepConfig {
  std::vector<int> n_values = default_n_values();
  std::vector<double> p_values = default_p_values();
  int rank = 1;
  int trials = 100;
  std::uint64_t seed = 0;
  AnalysisBackend backend = AnalysisBackend::finite_field;
  // Jacobian draws per trial. One exact evaluation already attains the
  // characteristic rank except with probability O(1/prime), which is far
  // below the Monte Carlo resolution, so 1 is the right default.
  int samples = 1;
  std::uint64_t prime = kDefaultPrime;
  std::vector<double> levels = {0.90, 0.999};
  int workers = 0;  // 0 = available parallelism

  static std::vector<int> default_n_values();      // 2..10
  static std::vector<double> default_p_values();   // 0.02 step 0.02 up to 0.6
};

struct SweepCell {
  int n = 0;
  double p = 0.0;
  std::int64_t m = 0;
  int trials = 0;
  int successes = 0;
  double probability = 0.0;
};

struct ThresholdPoint {
  int n = 0;
  std::optional<double> p_threshold;  // smallest grid p reaching the level
  double p_theory = 0.0;              // r*(3n-2)/n^3
};

struct ThresholdCurve {
  double level = 0.0;
  std::vector<ThresholdPoint> per_n;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;          // (n, p) lexicographic
  std::vector<ThresholdCurve> curves;    // one per configured level
};

/// m = ceil(p * n^3), clamped to the full cell count. A small slack absorbs
/// the rounding of p values like 0.1 that are not exact binary fractions.
std::int64_t cell_sample_count(double p, int n);

/// Uniform-without-replacement mask via seeded partial Fisher-Yates over the
/// linearized cells.
ObservationPattern sample_pattern(std::vector<int> shape, std::int64_t m, Rng& rng);

/// Runs every (n, p, trial) with a stream derived from (seed, n, p, trial),
/// so output is identical at any worker count.
SweepResult run_sweep(const SweepConfig& config);

/// Per n, the smallest grid p whose empirical probability reaches the level.
ThresholdCurve extract_thresholds(const SweepResult& result, double level);

/// Writes <directory>/sweep.csv (n,p,m,trials,successes,probability) and
/// <directory>/thresholds.csv (level,n,p_threshold,p_theory).
void emit_csv(const SweepResult& result, const std::filesystem::path& directory);

/// Probability table pivoted by n (one column per n), gnuplot-friendly.
void emit_gnuplot(const SweepResult& result, const std::filesystem::path& file);

}  // namespace chrank
