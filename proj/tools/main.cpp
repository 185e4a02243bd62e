// chrank: decide generic well-posedness of low-rank completion and CP
// decomposition instances from the characteristic rank of the analytic
// Jacobian, and run Monte Carlo phase-transition sweeps.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chrank/analysis.hpp"
#include "chrank/experiment.hpp"
#include "chrank/jacobian.hpp"
#include "chrank/version.hpp"

namespace {

using namespace chrank;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitBackendDisagreement = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec:
    case ErrorKind::config:
    case ErrorKind::unsupported:
      return kExitUsage;
    case ErrorKind::parse:
    case ErrorKind::io:
    case ErrorKind::numeric_input:
      return kExitInput;
    case ErrorKind::backend_disagreement:
      return kExitBackendDisagreement;
  }
  return 1;
}

// Options shared by every subcommand that draws random parameter points.
struct AnalysisCliOptions {
  std::uint64_t seed = 0;
  std::string backend = "auto";
  int samples = 8;
  std::optional<double> tolerance_factor;
  std::uint64_t prime = kDefaultPrime;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Master seed; all randomness derives from it")
        ->required();
    cmd->add_option("--backend", backend,
                    "Rank backend: exact residues, svd, or exact with svd "
                    "cross-check")
        ->check(CLI::IsMember({"auto", "finite-field", "svd"}));
    cmd->add_option("--samples", samples, "Parameter points per rank estimate")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance-factor", tolerance_factor,
                    "Relative singular-value cutoff factor for the svd backend");
    cmd->add_option("--prime", prime, "Modulus for the exact backend");
  }

  AnalysisOptions resolve() const {
    AnalysisOptions options;
    if (backend == "finite-field") options.backend = AnalysisBackend::finite_field;
    else if (backend == "svd") options.backend = AnalysisBackend::svd;
    else options.backend = AnalysisBackend::auto_crosscheck;
    options.samples = samples;
    options.seed = seed;
    options.prime = prime;
    if (tolerance_factor) options.tolerance.factor = tolerance_factor;
    return options;
  }
};

// Exactly one of --mask / --random-mask selects the observation pattern.
struct MaskCliOptions {
  std::string mask_path;
  std::int64_t random_cells = -1;

  void attach(CLI::App* cmd) {
    auto* mask = cmd->add_option("--mask", mask_path,
                                 "Mask file: one observed index tuple per line");
    auto* random = cmd->add_option(
        "--random-mask", random_cells,
        "Draw this many observed cells uniformly (uses --seed)");
    mask->excludes(random);
    random->excludes(mask);
  }

  ObservationPattern resolve(std::vector<int> shape, std::uint64_t seed) const {
    if (!mask_path.empty())
      return load_mask_file(mask_path, std::move(shape));
    if (random_cells >= 0) {
      Rng rng(derive_seed(seed, {0x6d61736bull /* "mask" */}));
      return sample_pattern(std::move(shape), random_cells, rng);
    }
    fail(ErrorKind::config, "one of --mask or --random-mask is required");
  }
};

struct OutputCliOptions {
  std::string format = "json";
  std::string out_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  }

  void emit(const IdentifiabilityReport& report) const {
    const std::string body =
        format == "json" ? report_to_json(report) + "\n" : report_to_text(report);
    if (out_path.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream out(out_path);
    if (!out)
      fail(ErrorKind::io, "cannot open " + out_path + " for writing");
    out << body;
    if (!out)
      fail(ErrorKind::io, "write failed on " + out_path);
  }
};

std::vector<int> require_dims3(const std::vector<int>& dims) {
  if (dims.size() != 3)
    fail(ErrorKind::config, "--dims needs exactly three extents, got " +
                                std::to_string(dims.size()));
  return dims;
}

int default_workers() {
  if (const char* env = std::getenv("CHRANK_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
      fail(ErrorKind::config,
           std::string("CHRANK_WORKERS must be a nonnegative integer, got '") +
               env + "'");
    return static_cast<int>(v);
  }
  return 0;  // library default: available parallelism
}

void run_sweep_command(const SweepConfig& config, const std::string& out_dir,
                       const std::string& gnuplot_path,
                       const OutputCliOptions& output) {
  const SweepResult result = run_sweep(config);
  emit_csv(result, out_dir);
  if (!gnuplot_path.empty()) emit_gnuplot(result, gnuplot_path);

  if (output.format == "json") {
    nlohmann::json thresholds = nlohmann::json::array();
    for (const auto& curve : result.curves)
      for (const auto& point : curve.per_n) {
        nlohmann::json row = {{"level", curve.level},
                              {"n", point.n},
                              {"p_theory", point.p_theory}};
        if (point.p_threshold) row["p_threshold"] = *point.p_threshold;
        else row["p_threshold"] = nullptr;
        thresholds.push_back(row);
      }
    nlohmann::json j = {
        {"tool", std::string(kToolName)},
        {"tool_version", std::string(kToolVersion)},
        {"seed", config.seed},
        {"rank", config.rank},
        {"trials", config.trials},
        {"n_values", config.n_values},
        {"p_values", config.p_values},
        {"cells", result.cells.size()},
        {"sweep_csv", out_dir + "/sweep.csv"},
        {"thresholds_csv", out_dir + "/thresholds.csv"},
        {"thresholds", thresholds},
    };
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << "sweep: " << result.cells.size() << " cells, " << config.trials
            << " trials each, seed " << config.seed << '\n';
  std::cout << "wrote " << out_dir << "/sweep.csv and " << out_dir
            << "/thresholds.csv\n";
  for (const auto& curve : result.curves) {
    std::cout << "level " << curve.level << ":";
    for (const auto& point : curve.per_n) {
      std::cout << "  n=" << point.n << " p=";
      if (point.p_threshold) std::cout << *point.p_threshold;
      else std::cout << "none";
    }
    std::cout << '\n';
  }
}

void dump_jacobian(const ProblemSpec& spec, std::uint64_t seed,
                   const std::string& field_name, std::uint64_t prime,
                   const std::string& out_path) {
  std::ostringstream body;
  Rng rng(derive_seed(seed, {0x706f696e74ull /* "point" */, 0}));
  if (field_name == "prime") {
    PrimeField field(prime);
    const auto point = random_point(spec, field, rng);
    write_jacobian_csv(body, assemble_jacobian(point, field), spec);
  } else {
    RealField field;
    const auto point = random_point(spec, field, rng);
    write_jacobian_csv(body, assemble_jacobian(point, field), spec);
  }
  if (out_path.empty()) {
    std::cout << body.str();
    return;
  }
  std::ofstream out(out_path);
  if (!out)
    fail(ErrorKind::io, "cannot open " + out_path + " for writing");
  out << body.str();
  if (!out)
    fail(ErrorKind::io, "write failed on " + out_path);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"characteristic-rank analysis of low-rank completion and CP "
               "decomposition problems"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // check-matrix
  auto* check_matrix = app.add_subcommand(
      "check-matrix", "Well-posedness of a matrix completion instance");
  int mc_n1 = 0, mc_n2 = 0, mc_rank = 0;
  check_matrix->add_option("--n1", mc_n1, "Rows")->required();
  check_matrix->add_option("--n2", mc_n2, "Columns")->required();
  check_matrix->add_option("--rank", mc_rank, "Target rank")->required();
  MaskCliOptions mc_mask;
  mc_mask.attach(check_matrix);
  AnalysisCliOptions mc_analysis;
  mc_analysis.attach(check_matrix);
  OutputCliOptions mc_output;
  mc_output.attach(check_matrix);

  // check-cpd
  auto* check_cpd = app.add_subcommand(
      "check-cpd", "Well-posedness (generic local identifiability) of a CP "
                   "decomposition");
  std::vector<int> cpd_dims;
  int cpd_rank = 0;
  check_cpd->add_option("--dims", cpd_dims, "Tensor extents n1,n2,n3")
      ->required()
      ->delimiter(',');
  check_cpd->add_option("--rank", cpd_rank, "CP rank")->required();
  AnalysisCliOptions cpd_analysis;
  cpd_analysis.attach(check_cpd);
  OutputCliOptions cpd_output;
  cpd_output.attach(check_cpd);

  // check-tensor
  auto* check_tensor = app.add_subcommand(
      "check-tensor", "Well-posedness of a tensor completion instance");
  std::vector<int> tc_dims;
  int tc_rank = 0;
  check_tensor->add_option("--dims", tc_dims, "Tensor extents n1,n2,n3")
      ->required()
      ->delimiter(',');
  check_tensor->add_option("--rank", tc_rank, "CP rank")->required();
  MaskCliOptions tc_mask;
  tc_mask.attach(check_tensor);
  AnalysisCliOptions tc_analysis;
  tc_analysis.attach(check_tensor);
  OutputCliOptions tc_output;
  tc_output.attach(check_tensor);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Monte Carlo phase-transition sweep over (n, p) cells");
  SweepConfig sweep_config;
  sweep->add_option("--n-values", sweep_config.n_values,
                    "Cubic tensor extents (default 2..10)")
      ->delimiter(',');
  sweep->add_option("--p-values", sweep_config.p_values,
                    "Sampling proportions (default 0.02 step 0.02 up to 0.6)")
      ->delimiter(',');
  sweep->add_option("--rank", sweep_config.rank, "CP rank (default 1)");
  sweep->add_option("--trials", sweep_config.trials, "Trials per (n, p) cell");
  sweep->add_option("--seed", sweep_config.seed, "Master seed")->required();
  std::string sweep_backend = "finite-field";
  sweep->add_option("--backend", sweep_backend, "Rank backend")
      ->check(CLI::IsMember({"auto", "finite-field", "svd"}));
  sweep->add_option("--samples", sweep_config.samples,
                    "Jacobian draws per trial (default 1)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--prime", sweep_config.prime, "Modulus for the exact backend");
  sweep->add_option("--levels", sweep_config.levels,
                    "Probability levels for threshold curves")
      ->delimiter(',');
  std::optional<int> sweep_workers;
  sweep->add_option("--workers", sweep_workers,
                    "Worker threads (default: CHRANK_WORKERS env, else all "
                    "cores)");
  std::string sweep_out_dir;
  sweep->add_option("--out-dir", sweep_out_dir, "Directory for the CSV output")
      ->required();
  std::string sweep_gnuplot;
  sweep->add_option("--gnuplot", sweep_gnuplot,
                    "Also write a per-n probability table to this file");
  OutputCliOptions sweep_output;
  sweep_output.attach(sweep);

  // jacobian-dump
  auto* dump = app.add_subcommand(
      "jacobian-dump", "CSV of the Jacobian at a seeded random point");
  std::string dump_variant;
  dump->add_option("--variant", dump_variant, "Problem family")
      ->check(CLI::IsMember({"matrix", "cpd", "tensor"}))
      ->required();
  int dump_n1 = 0, dump_n2 = 0, dump_rank = 0;
  std::vector<int> dump_dims;
  dump->add_option("--n1", dump_n1, "Rows (matrix variant)");
  dump->add_option("--n2", dump_n2, "Columns (matrix variant)");
  dump->add_option("--dims", dump_dims, "Tensor extents n1,n2,n3")->delimiter(',');
  dump->add_option("--rank", dump_rank, "Rank")->required();
  MaskCliOptions dump_mask;
  dump_mask.attach(dump);
  std::uint64_t dump_seed = 0;
  dump->add_option("--seed", dump_seed, "Master seed")->required();
  std::string dump_field = "real";
  dump->add_option("--field", dump_field, "Entry field for the dumped point")
      ->check(CLI::IsMember({"real", "prime"}));
  std::uint64_t dump_prime = kDefaultPrime;
  dump->add_option("--prime", dump_prime, "Modulus when --field prime");
  std::string dump_out;
  dump->add_option("--out", dump_out, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: [usage] " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*check_matrix) {
      const auto spec = ProblemSpec::matrix_completion(
          mc_n1, mc_n2, mc_rank,
          mc_mask.resolve({mc_n1, mc_n2}, mc_analysis.seed));
      mc_output.emit(check_wellposed(spec, mc_analysis.resolve()));
    } else if (*check_cpd) {
      const auto dims = require_dims3(cpd_dims);
      const auto spec = ProblemSpec::cpd(dims[0], dims[1], dims[2], cpd_rank);
      cpd_output.emit(check_wellposed(spec, cpd_analysis.resolve()));
    } else if (*check_tensor) {
      const auto dims = require_dims3(tc_dims);
      const auto spec = ProblemSpec::tensor_completion(
          dims[0], dims[1], dims[2], tc_rank,
          tc_mask.resolve(dims, tc_analysis.seed));
      tc_output.emit(check_wellposed(spec, tc_analysis.resolve()));
    } else if (*sweep) {
      if (sweep_backend == "svd") sweep_config.backend = AnalysisBackend::svd;
      else if (sweep_backend == "auto")
        sweep_config.backend = AnalysisBackend::auto_crosscheck;
      else sweep_config.backend = AnalysisBackend::finite_field;
      sweep_config.workers = sweep_workers ? *sweep_workers : default_workers();
      run_sweep_command(sweep_config, sweep_out_dir, sweep_gnuplot, sweep_output);
    } else if (*dump) {
      std::optional<ProblemSpec> spec;
      if (dump_variant == "matrix") {
        if (dump_n1 < 1 || dump_n2 < 1)
          fail(ErrorKind::config, "matrix variant needs --n1 and --n2");
        spec = ProblemSpec::matrix_completion(
            dump_n1, dump_n2, dump_rank,
            dump_mask.resolve({dump_n1, dump_n2}, dump_seed));
      } else {
        const auto dims = require_dims3(dump_dims);
        if (dump_variant == "cpd") {
          spec = ProblemSpec::cpd(dims[0], dims[1], dims[2], dump_rank);
        } else {
          spec = ProblemSpec::tensor_completion(
              dims[0], dims[1], dims[2], dump_rank,
              dump_mask.resolve(dims, dump_seed));
        }
      }
      dump_jacobian(*spec, dump_seed, dump_field, dump_prime, dump_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: [" << to_string(e.kind()) << "] " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: [internal] " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
