#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chrank/problem.hpp"
#include "chrank/rank.hpp"

namespace chrank {

/// finite_field is exact; svd adds spectrum diagnostics; auto_crosscheck runs
/// the exact backend and verifies it against the svd rank whenever the
/// Jacobian is small enough (param_dim <= crosscheck_max_cols). A mismatch is
/// an error, never silently resolved.
enum class AnalysisBackend { finite_field, svd, auto_crosscheck };

std::string_view to_string(AnalysisBackend backend);

struct AnalysisOptions {
  AnalysisBackend backend = AnalysisBackend::auto_crosscheck;
  int samples = 8;
  std::uint64_t seed = 0;
  std::uint64_t prime = kDefaultPrime;
  TolerancePolicy tolerance{};
  std::int64_t crosscheck_max_cols = 200;
};

/// Maximal observed Jacobian rank over independently drawn parameter points.
/// The rank is almost-everywhere constant, so the samples are expected to
/// agree; the estimate keeps the max regardless.
struct CharRankEstimate {
  ProblemSpec spec;
  int sample_count = 0;
  std::vector<std::int64_t> sample_ranks;
  std::int64_t char_rank = 0;
  bool all_samples_agree = true;
  RankBackend backend = RankBackend::finite_field;  // backend of the reported ranks
  bool cross_checked = false;
  std::uint64_t seed = 0;
};

struct IdentifiabilityReport {
  ProblemSpec spec;
  CharRankEstimate estimate;
  DimensionSummary dims;
  bool wellposed = false;          // char_rank == wellposed_target
  std::int64_t rank_deficit = 0;   // wellposed_target - char_rank
  // Completion variants only:
  std::optional<bool> sard_unsolvable;    // char_rank < ambient_dim
  std::optional<bool> counting_bound_ok;  // m >= necessary_sample_bound
  std::optional<std::int64_t> sample_bound;
  std::string verdict;
};

CharRankEstimate characteristic_rank(const ProblemSpec& spec,
                                     const AnalysisOptions& options);

/// Does the characteristic rank reach the sum of the tangent-space dimension
/// and the unobserved-subspace dimension? Equality is generically equivalent
/// to local identifiability.
IdentifiabilityReport check_wellposed(const ProblemSpec& spec,
                                      const AnalysisOptions& options);

/// Sard criterion for completion variants: characteristic rank below the
/// ambient dimension means the image of the parametrization has measure
/// zero, so generic data admit no exact rank-r completion.
IdentifiabilityReport check_solvability(const ProblemSpec& spec,
                                        const AnalysisOptions& options);

std::string report_to_json(const IdentifiabilityReport& report, int indent = 2);
std::string report_to_text(const IdentifiabilityReport& report);

}  // namespace chrank
