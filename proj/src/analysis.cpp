#include "chrank/analysis.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "chrank/error.hpp"
#include "chrank/jacobian.hpp"
#include "chrank/version.hpp"

namespace chrank {

std::string_view to_string(AnalysisBackend backend) {
  switch (backend) {
    case AnalysisBackend::finite_field: return "finite_field";
    case AnalysisBackend::svd: return "svd";
    case AnalysisBackend::auto_crosscheck: return "auto_crosscheck";
  }
  return "unknown";
}

namespace {

void require_options(const AnalysisOptions& options) {
  if (options.samples < 1)
    fail(ErrorKind::config, "sample count must be at least 1, got " +
                                std::to_string(options.samples));
}

std::int64_t svd_rank_at(const ProblemSpec& spec, std::uint64_t seed,
                         const TolerancePolicy& policy) {
  Rng rng(seed);
  RealField reals;
  const auto point = random_point(spec, reals, rng);
  const auto jac = assemble_jacobian(point, reals);
  return numeric_rank(to_eigen(jac), policy).rank;
}

}  // namespace

CharRankEstimate characteristic_rank(const ProblemSpec& spec,
                                     const AnalysisOptions& options) {
  require_options(options);
  CharRankEstimate estimate;
  estimate.spec = spec;
  estimate.sample_count = options.samples;
  estimate.seed = options.seed;

  const bool use_exact = options.backend != AnalysisBackend::svd;
  estimate.backend =
      use_exact ? RankBackend::finite_field : RankBackend::svd;
  std::optional<PrimeField> field;
  if (use_exact) field.emplace(options.prime);

  for (int s = 0; s < options.samples; ++s) {
    const std::uint64_t point_seed =
        derive_seed(options.seed, {0x706f696e74ull /* "point" */,
                                   std::uint64_t(s)});
    const std::int64_t rank =
        use_exact ? jacobian_rank_mod_p(spec, point_seed, *field).rank
                  : svd_rank_at(spec, point_seed, options.tolerance);
    estimate.sample_ranks.push_back(rank);
  }
  estimate.char_rank = *std::max_element(estimate.sample_ranks.begin(),
                                         estimate.sample_ranks.end());
  estimate.all_samples_agree =
      std::all_of(estimate.sample_ranks.begin(), estimate.sample_ranks.end(),
                  [&](std::int64_t r) { return r == estimate.char_rank; });

  if (options.backend == AnalysisBackend::auto_crosscheck &&
      spec.param_dim() <= options.crosscheck_max_cols) {
    const std::uint64_t check_seed =
        derive_seed(options.seed, {0x63726f7373ull /* "cross" */});
    const std::int64_t svd_rank =
        svd_rank_at(spec, check_seed, options.tolerance);
    if (svd_rank != estimate.char_rank)
      fail(ErrorKind::backend_disagreement,
           "exact rank " + std::to_string(estimate.char_rank) +
               " (mod " + std::to_string(options.prime) +
               ") disagrees with svd rank " + std::to_string(svd_rank));
    estimate.cross_checked = true;
  }
  return estimate;
}

namespace {

IdentifiabilityReport build_report(const ProblemSpec& spec,
                                   const AnalysisOptions& options) {
  IdentifiabilityReport report;
  report.spec = spec;
  report.estimate = characteristic_rank(spec, options);
  report.dims = dimension_summary(spec);
  report.wellposed = report.estimate.char_rank == report.dims.wellposed_target;
  report.rank_deficit = report.dims.wellposed_target - report.estimate.char_rank;
  if (spec.is_completion()) {
    report.sard_unsolvable = report.estimate.char_rank < report.dims.ambient_dim;
    report.sample_bound = necessary_sample_bound(spec);
    report.counting_bound_ok = spec.observed_count() >= *report.sample_bound;
  }
  return report;
}

}  // namespace

IdentifiabilityReport check_wellposed(const ProblemSpec& spec,
                                      const AnalysisOptions& options) {
  IdentifiabilityReport report = build_report(spec, options);
  std::ostringstream verdict;
  if (report.wellposed) {
    verdict << "well-posed: the problem is generically locally identifiable";
  } else {
    verdict << "ill-posed: rank deficit " << report.rank_deficit;
    if (report.counting_bound_ok && !*report.counting_bound_ok)
      verdict << " (sample count " << spec.observed_count()
              << " is below the necessary bound " << *report.sample_bound << ")";
  }
  report.verdict = verdict.str();
  return report;
}

IdentifiabilityReport check_solvability(const ProblemSpec& spec,
                                        const AnalysisOptions& options) {
  if (!spec.is_completion())
    fail(ErrorKind::unsupported,
         "solvability analysis applies to completion problems only");
  IdentifiabilityReport report = build_report(spec, options);
  std::ostringstream verdict;
  if (*report.sard_unsolvable) {
    verdict << "generically unsolvable: the parametrized image has measure "
               "zero (rank "
            << report.estimate.char_rank << " < ambient dimension "
            << report.dims.ambient_dim << ")";
  } else {
    verdict << "generically solvable: the parametrization is dominant";
  }
  report.verdict = verdict.str();
  return report;
}

std::string report_to_json(const IdentifiabilityReport& report, int indent) {
  using nlohmann::json;
  const ProblemSpec& spec = report.spec;
  json spec_json = {
      {"variant", std::string(to_string(spec.variant()))},
      {"n1", spec.n1()},
      {"n2", spec.n2()},
      {"rank", spec.rank()},
  };
  if (spec.order() == 3) spec_json["n3"] = spec.n3();
  if (spec.is_completion()) {
    spec_json["observed_count"] = spec.observed_count();
    spec_json["cells"] = spec.pattern().cells();
  }
  json estimate_json = {
      {"backend", std::string(to_string(report.estimate.backend))},
      {"samples", report.estimate.sample_count},
      {"sample_ranks", report.estimate.sample_ranks},
      {"char_rank", report.estimate.char_rank},
      {"all_samples_agree", report.estimate.all_samples_agree},
      {"cross_checked", report.estimate.cross_checked},
      {"seed", report.estimate.seed},
  };
  json dims_json = {
      {"ambient_dim", report.dims.ambient_dim},
      {"param_dim", report.dims.param_dim},
      {"tangent_dim", report.dims.tangent_dim},
      {"complement_dim", report.dims.complement_dim},
      {"wellposed_target", report.dims.wellposed_target},
  };
  json j = {
      {"tool", std::string(kToolName)},
      {"tool_version", std::string(kToolVersion)},
      {"spec", spec_json},
      {"seed", report.estimate.seed},
      {"estimate", estimate_json},
      {"dims", dims_json},
      {"char_rank", report.estimate.char_rank},
      {"wellposed_target", report.dims.wellposed_target},
      {"wellposed", report.wellposed},
      {"rank_deficit", report.rank_deficit},
      {"verdict", report.verdict},
  };
  if (report.sard_unsolvable) j["sard_unsolvable"] = *report.sard_unsolvable;
  if (report.counting_bound_ok) j["counting_bound_ok"] = *report.counting_bound_ok;
  if (report.sample_bound) j["sample_bound"] = *report.sample_bound;
  return j.dump(indent);
}

std::string report_to_text(const IdentifiabilityReport& report) {
  const ProblemSpec& spec = report.spec;
  std::ostringstream out;
  out << "problem: " << to_string(spec.variant()) << ' ' << spec.n1() << " x "
      << spec.n2();
  if (spec.order() == 3) out << " x " << spec.n3();
  out << ", rank " << spec.rank();
  if (spec.is_completion()) out << ", observed " << spec.observed_count();
  out << '\n';
  out << "characteristic rank: " << report.estimate.char_rank << " ("
      << to_string(report.estimate.backend) << ", "
      << report.estimate.sample_count << " samples";
  if (!report.estimate.all_samples_agree) out << ", samples disagree";
  if (report.estimate.cross_checked) out << ", cross-checked";
  out << ")\n";
  out << "dimensions: ambient " << report.dims.ambient_dim << ", parameters "
      << report.dims.param_dim << ", tangent " << report.dims.tangent_dim
      << ", unobserved " << report.dims.complement_dim << ", target "
      << report.dims.wellposed_target << '\n';
  if (report.sample_bound)
    out << "sample bound: m = " << spec.observed_count() << " vs required "
        << *report.sample_bound
        << (*report.counting_bound_ok ? " (satisfied)" : " (violated)") << '\n';
  if (report.sard_unsolvable)
    out << "sard: " << (*report.sard_unsolvable ? "image has measure zero"
                                                : "parametrization is dominant")
        << '\n';
  out << "verdict: " << report.verdict << '\n';
  return out.str();
}

}  // namespace chrank
