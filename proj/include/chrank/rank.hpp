#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chrank/dense_matrix.hpp"
#include "chrank/jacobian.hpp"
#include "chrank/prime_field.hpp"
#include "chrank/problem.hpp"

namespace chrank {

enum class RankBackend { svd, finite_field };

std::string_view to_string(RankBackend backend);

/// Singular-value cutoff for the numerical rank. In relative mode the cutoff
/// is factor * sigma_max; when no factor is given the usual
/// max(rows, cols) * machine-epsilon convention applies.
struct TolerancePolicy {
  enum class Mode { absolute, relative };
  Mode mode = Mode::relative;
  std::optional<double> factor;  // must be positive when set

  double resolve(std::int64_t rows, std::int64_t cols, double sigma_max) const;
};

struct RankResult {
  std::int64_t rank = 0;
  RankBackend backend = RankBackend::svd;
  // svd diagnostics
  std::vector<double> singular_values;
  double tolerance = 0.0;
  // finite-field diagnostics
  std::uint64_t prime = 0;
  std::uint64_t point_seed = 0;

  std::string diagnostics() const;
};

Eigen::MatrixXd to_eigen(const DenseMatrix<double>& m);
inline Eigen::MatrixXd to_eigen(const Jacobian<double>& jac) {
  return to_eigen(jac.matrix);
}

/// Numerical rank: the number of singular values above the policy cutoff.
/// Rejects non-finite entries.
RankResult numeric_rank(const Eigen::MatrixXd& m,
                        const TolerancePolicy& policy = {});

/// Exact rank over F_p by Gaussian elimination with partial pivoting by
/// nonzero search. Entries must already be residues in [0, p).
RankResult finite_field_rank(const DenseMatrix<std::uint64_t>& m,
                             const PrimeField& field);

/// Exact rank of the Jacobian at a uniform random point of F_p^param_dim.
/// The Jacobian entries are polynomials of degree at most 2 in the
/// parameters, so by Schwartz-Zippel the result equals the generic rank
/// except with probability O(deg/p).
RankResult jacobian_rank_mod_p(const ProblemSpec& spec, std::uint64_t seed,
                               const PrimeField& field);

}  // namespace chrank
