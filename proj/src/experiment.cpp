#include "chrank/experiment.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "chrank/error.hpp"

namespace chrank {

std::vector<int> SweepConfig::default_n_values() {
  std::vector<int> n;
  for (int v = 2; v <= 10; ++v) n.push_back(v);
  return n;
}

std::vector<double> SweepConfig::default_p_values() {
  std::vector<double> p;
  for (int i = 1; i <= 30; ++i) p.push_back(i * 0.02);
  return p;
}

namespace {

void require_config(const SweepConfig& config) {
  if (config.n_values.empty())
    fail(ErrorKind::config, "sweep needs at least one extent");
  for (int n : config.n_values)
    if (n < 1)
      fail(ErrorKind::config, "extent must be positive, got " +
                                  std::to_string(n));
  if (config.p_values.empty())
    fail(ErrorKind::config, "sweep needs at least one proportion");
  for (double p : config.p_values)
    if (!(p > 0.0 && p <= 1.0))
      fail(ErrorKind::config, "proportion must lie in (0, 1], got " +
                                  std::to_string(p));
  if (config.rank < 1)
    fail(ErrorKind::config, "rank must be positive, got " +
                                std::to_string(config.rank));
  if (config.trials < 1)
    fail(ErrorKind::config, "trials must be at least 1, got " +
                                std::to_string(config.trials));
  if (config.samples < 1)
    fail(ErrorKind::config, "samples must be at least 1, got " +
                                std::to_string(config.samples));
  for (double level : config.levels)
    if (!(level > 0.0 && level <= 1.0))
      fail(ErrorKind::config, "threshold level must lie in (0, 1], got " +
                                  std::to_string(level));
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::int64_t cell_sample_count(double p, int n) {
  const std::int64_t full = std::int64_t(n) * n * n;
  // Snap away binary-representation noise (0.1 * 1000 is slightly above 100)
  // before rounding up; the grid values are far coarser than the slack.
  auto m = static_cast<std::int64_t>(std::ceil(p * double(full) - 1e-9));
  return std::clamp<std::int64_t>(m, 0, full);
}

ObservationPattern sample_pattern(std::vector<int> shape, std::int64_t m,
                                  Rng& rng) {
  std::int64_t ambient = 1;
  for (int e : shape) ambient *= e;
  if (m < 0 || m > ambient)
    fail(ErrorKind::config, "cannot sample " + std::to_string(m) +
                                " cells from " + std::to_string(ambient));
  std::vector<std::int64_t> pool(static_cast<std::size_t>(ambient));
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = std::int64_t(i);
  for (std::int64_t i = 0; i < m; ++i)
    std::swap(pool[i], pool[i + std::int64_t(rng.below(
                                   std::uint64_t(ambient - i)))]);
  pool.resize(static_cast<std::size_t>(m));
  return ObservationPattern::from_linear(std::move(shape), std::move(pool));
}

namespace {

SweepCell run_cell(const SweepConfig& config, int n, double p) {
  SweepCell cell;
  cell.n = n;
  cell.p = p;
  cell.m = cell_sample_count(p, n);
  cell.trials = config.trials;

  const std::uint64_t p_bits = std::bit_cast<std::uint64_t>(p);
  AnalysisOptions options;
  options.backend = config.backend;
  options.samples = config.samples;
  options.prime = config.prime;

  for (int trial = 0; trial < config.trials; ++trial) {
    Rng mask_rng(derive_seed(config.seed,
                             {std::uint64_t(n), p_bits, std::uint64_t(trial), 1}));
    auto pattern = sample_pattern({n, n, n}, cell.m, mask_rng);
    const auto spec =
        ProblemSpec::tensor_completion(n, n, n, config.rank, std::move(pattern));
    options.seed = derive_seed(
        config.seed, {std::uint64_t(n), p_bits, std::uint64_t(trial), 2});
    if (check_wellposed(spec, options).wellposed) ++cell.successes;
  }
  cell.probability = double(cell.successes) / double(cell.trials);
  return cell;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  require_config(config);
  SweepResult result;
  result.config = config;
  result.cells.resize(config.n_values.size() * config.p_values.size());

  // Each cell is fully determined by (config, n, p), so any scheduling of the
  // index range yields the same result vector.
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.cells.size()) return;
      const int n = config.n_values[i / config.p_values.size()];
      const double p = config.p_values[i % config.p_values.size()];
      try {
        result.cells[i] = run_cell(config, n, p);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  unsigned workers = config.workers > 0
                         ? unsigned(config.workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, unsigned(result.cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (double level : config.levels)
    result.curves.push_back(extract_thresholds(result, level));
  return result;
}

ThresholdCurve extract_thresholds(const SweepResult& result, double level) {
  if (!(level > 0.0 && level <= 1.0))
    fail(ErrorKind::config, "threshold level must lie in (0, 1], got " +
                                std::to_string(level));
  ThresholdCurve curve;
  curve.level = level;
  for (int n : result.config.n_values) {
    ThresholdPoint point;
    point.n = n;
    point.p_theory = double(result.config.rank) * (3.0 * n - 2.0) /
                     (double(n) * n * n);
    for (const auto& cell : result.cells) {
      if (cell.n != n || cell.probability < level) continue;
      if (!point.p_threshold || cell.p < *point.p_threshold)
        point.p_threshold = cell.p;
    }
    curve.per_n.push_back(point);
  }
  return curve;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void emit_csv(const SweepResult& result, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec)
    fail(ErrorKind::io, "cannot create directory " + directory.string() + ": " +
                            ec.message());

  auto sweep = open_output(directory / "sweep.csv");
  sweep << "n,p,m,trials,successes,probability\n";
  for (const auto& cell : result.cells)
    sweep << cell.n << ',' << format_double(cell.p) << ',' << cell.m << ','
          << cell.trials << ',' << cell.successes << ','
          << format_double(cell.probability) << '\n';
  if (!sweep)
    fail(ErrorKind::io, "write failed on " + (directory / "sweep.csv").string());

  auto thresholds = open_output(directory / "thresholds.csv");
  thresholds << "level,n,p_threshold,p_theory\n";
  for (const auto& curve : result.curves)
    for (const auto& point : curve.per_n) {
      thresholds << format_double(curve.level) << ',' << point.n << ',';
      if (point.p_threshold)
        thresholds << format_double(*point.p_threshold);
      else
        thresholds << "none";
      thresholds << ',' << format_double(point.p_theory) << '\n';
    }
  if (!thresholds)
    fail(ErrorKind::io,
         "write failed on " + (directory / "thresholds.csv").string());
}

void emit_gnuplot(const SweepResult& result, const std::filesystem::path& file) {
  auto out = open_output(file);
  out << "p";
  for (int n : result.config.n_values) out << ",n" << n;
  out << '\n';
  const std::size_t p_count = result.config.p_values.size();
  for (std::size_t pi = 0; pi < p_count; ++pi) {
    out << format_double(result.config.p_values[pi]);
    for (std::size_t ni = 0; ni < result.config.n_values.size(); ++ni)
      out << ',' << format_double(result.cells[ni * p_count + pi].probability);
    out << '\n';
  }
  if (!out)
    fail(ErrorKind::io, "write failed on " + file.string());
}

}  // namespace chrank
