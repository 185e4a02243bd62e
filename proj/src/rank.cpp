#include "chrank/rank.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "chrank/error.hpp"

namespace chrank {

std::string_view to_string(RankBackend backend) {
  switch (backend) {
    case RankBackend::svd: return "svd";
    case RankBackend::finite_field: return "finite_field";
  }
  return "unknown";
}

double TolerancePolicy::resolve(std::int64_t rows, std::int64_t cols,
                                double sigma_max) const {
  if (factor && *factor <= 0.0)
    fail(ErrorKind::config, "tolerance factor must be positive");
  if (mode == Mode::absolute) {
    if (!factor)
      fail(ErrorKind::config, "absolute tolerance requires an explicit value");
    return *factor;
  }
  const double f = factor ? *factor
                          : double(std::max(rows, cols)) *
                                std::numeric_limits<double>::epsilon();
  return f * sigma_max;
}

std::string RankResult::diagnostics() const {
  std::ostringstream out;
  out << "backend=" << to_string(backend) << " rank=" << rank;
  if (backend == RankBackend::svd) {
    out << " tolerance=" << tolerance;
    if (!singular_values.empty())
      out << " sigma_max=" << singular_values.front()
          << " sigma_min=" << singular_values.back();
  } else {
    out << " prime=" << prime << " point_seed=" << point_seed;
  }
  return out.str();
}

Eigen::MatrixXd to_eigen(const DenseMatrix<double>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::int64_t r = 0; r < m.rows(); ++r)
    for (std::int64_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

RankResult numeric_rank(const Eigen::MatrixXd& m, const TolerancePolicy& policy) {
  if (!m.allFinite())
    fail(ErrorKind::numeric_input, "matrix contains non-finite entries");
  RankResult result;
  result.backend = RankBackend::svd;
  if (m.rows() == 0 || m.cols() == 0) {
    result.tolerance = policy.mode == TolerancePolicy::Mode::absolute
                           ? policy.resolve(0, 0, 0.0)
                           : 0.0;
    return result;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sigma = svd.singularValues();
  result.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  result.tolerance = policy.resolve(m.rows(), m.cols(), sigma(0));
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > result.tolerance) ++result.rank;
  return result;
}

RankResult finite_field_rank(const DenseMatrix<std::uint64_t>& m,
                             const PrimeField& field) {
  const std::uint64_t p = field.modulus();
  for (std::uint64_t v : m.data())
    if (v >= p)
      fail(ErrorKind::numeric_input,
           "entry " + std::to_string(v) + " is not a residue mod " +
               std::to_string(p));

  // Row-echelon reduction on a working copy; only rows below the pivot are
  // updated, and zero multipliers are skipped (the Jacobians are sparse).
  DenseMatrix<std::uint64_t> a = m;
  const std::int64_t rows = a.rows(), cols = a.cols();
  std::int64_t rank = 0;
  for (std::int64_t col = 0; col < cols && rank < rows; ++col) {
    std::int64_t pivot = -1;
    for (std::int64_t r = rank; r < rows; ++r)
      if (a(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (std::int64_t c = col; c < cols; ++c)
        std::swap(a(pivot, c), a(rank, c));
    const std::uint64_t inv_pivot = field.inv(a(rank, col));
    for (std::int64_t r = rank + 1; r < rows; ++r) {
      const std::uint64_t head = a(r, col);
      if (head == 0) continue;
      const std::uint64_t factor = field.mul(head, inv_pivot);
      a(r, col) = 0;
      const std::uint64_t* src = a.row_ptr(rank);
      std::uint64_t* dst = a.row_ptr(r);
      for (std::int64_t c = col + 1; c < cols; ++c) {
        if (src[c] == 0) continue;
        dst[c] = field.sub(dst[c], field.mul(factor, src[c]));
      }
    }
    ++rank;
  }

  RankResult result;
  result.backend = RankBackend::finite_field;
  result.rank = rank;
  result.prime = p;
  return result;
}

RankResult jacobian_rank_mod_p(const ProblemSpec& spec, std::uint64_t seed,
                               const PrimeField& field) {
  Rng rng(seed);
  const auto point = random_point(spec, field, rng);
  const auto jac = assemble_jacobian(point, field);
  RankResult result = finite_field_rank(jac.matrix, field);
  result.point_seed = seed;
  return result;
}

}  // namespace chrank
