#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chrank/dense_matrix.hpp"
#include "chrank/error.hpp"
#include "chrank/problem.hpp"
#include "chrank/rng.hpp"

namespace chrank {

/// Real arithmetic with the same surface as PrimeField, so the map and its
/// Jacobian assemble identically over doubles and over residues.
struct RealField {
  using Elem = double;
  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  double add(double a, double b) const { return a + b; }
  double sub(double a, double b) const { return a - b; }
  double neg(double a) const { return -a; }
  double mul(double a, double b) const { return a * b; }
  double sample(Rng& rng) const { return rng.normal(); }
};

/// Ties one Jacobian column to one parameter coordinate: either entry
/// (row, col) of a factor block, or the ambient cell of an unobserved-entry
/// coordinate.
struct ColumnLabel {
  char block = '?';  // 'V','W' (matrix), 'A','B','C' (tensor), 'X' (completion)
  int row = -1;      // factor blocks: row index within the factor
  int col = -1;      // factor blocks: factor column
  std::array<int, 3> cell{-1, -1, -1};  // X block: ambient index tuple

  std::string str() const;  // "V:1:0" or "X:0:1:1"; colon-separated, CSV-safe
  bool operator==(const ColumnLabel&) const = default;
};

/// Parameter vector layout. Blocks appear in fixed order (V|W|X or A|B|C|X);
/// within a factor block entries are column-major, within the X block
/// unobserved cells are lexicographic.
struct BlockLayout {
  int factor_count = 0;
  std::array<int, 3> factor_rows{};  // n1, n2[, n3]
  int rank = 0;
  std::int64_t x_count = 0;

  std::int64_t factor_offset(int f) const {
    std::int64_t off = 0;
    for (int i = 0; i < f; ++i) off += std::int64_t(factor_rows[i]) * rank;
    return off;
  }
  std::int64_t x_offset() const { return factor_offset(factor_count); }
  std::int64_t total() const { return x_offset() + x_count; }
  char block_name(int f) const {
    return factor_count == 2 ? "VW"[f] : "ABC"[f];
  }

  static BlockLayout of(const ProblemSpec& spec);
};

template <typename T>
struct ParameterPoint {
  ProblemSpec spec;
  std::vector<T> values;  // length spec.param_dim()
};

template <typename T>
struct Jacobian {
  DenseMatrix<T> matrix;            // ambient_dim x param_dim
  std::vector<ColumnLabel> labels;  // one per column

  std::int64_t rows() const { return matrix.rows(); }
  std::int64_t cols() const { return matrix.cols(); }
};

std::vector<ColumnLabel> column_labels(const ProblemSpec& spec);

namespace detail {

template <typename T>
void require_point(const ParameterPoint<T>& point) {
  if (std::int64_t(point.values.size()) != point.spec.param_dim())
    fail(ErrorKind::invalid_spec,
         "parameter vector has length " + std::to_string(point.values.size()) +
             ", expected " + std::to_string(point.spec.param_dim()));
}

}  // namespace detail

/// Draw a parameter point with i.i.d. entries from the field's sampling
/// distribution (standard normal over the reals, uniform residues over F_p).
template <class Field>
ParameterPoint<typename Field::Elem> random_point(const ProblemSpec& spec,
                                                  const Field& field, Rng& rng) {
  ParameterPoint<typename Field::Elem> point{spec, {}};
  point.values.resize(static_cast<std::size_t>(spec.param_dim()));
  for (auto& v : point.values) v = field.sample(rng);
  return point;
}

/// Evaluate the parametrization map at the point: the linearized ambient
/// image V W^T + X, sum of rank-one tensors, or their tensor-completion
/// combination.
template <class Field>
std::vector<typename Field::Elem> apply_map(
    const ParameterPoint<typename Field::Elem>& point, const Field& f);

/// d(V W^T + X)/dtheta: dY_ij/dV_il = W_jl, dY_ij/dW_jl = V_il, plus a unit
/// column per unobserved cell.
template <class Field>
Jacobian<typename Field::Elem> assemble_matrix_completion(
    const ParameterPoint<typename Field::Elem>& point, const Field& f);

/// dX_ijk/dA_il = B_jl C_kl and cyclically for B and C.
template <class Field>
Jacobian<typename Field::Elem> assemble_cpd(
    const ParameterPoint<typename Field::Elem>& point, const Field& f);

/// CPD block plus a unit column per unobserved tensor cell.
template <class Field>
Jacobian<typename Field::Elem> assemble_tensor_completion(
    const ParameterPoint<typename Field::Elem>& point, const Field& f);

/// Dispatch on the problem variant.
template <class Field>
Jacobian<typename Field::Elem> assemble_jacobian(
    const ParameterPoint<typename Field::Elem>& point, const Field& f) {
  switch (point.spec.variant()) {
    case Variant::matrix_completion:
      return assemble_matrix_completion(point, f);
    case Variant::cpd:
      return assemble_cpd(point, f);
    case Variant::tensor_completion:
      return assemble_tensor_completion(point, f);
  }
  fail(ErrorKind::invalid_spec, "unknown problem variant");
}

// CSV dump: header row carries column labels, first column the ambient index
// tuple of each row.
void write_jacobian_csv(std::ostream& out, const Jacobian<double>& jac,
                        const ProblemSpec& spec);
void write_jacobian_csv(std::ostream& out, const Jacobian<std::uint64_t>& jac,
                        const ProblemSpec& spec);

// ---- template definitions ----

template <class Field>
std::vector<typename Field::Elem> apply_map(
    const ParameterPoint<typename Field::Elem>& point, const Field& f) {
  detail::require_point(point);
  const ProblemSpec& spec = point.spec;
  const BlockLayout layout = BlockLayout::of(spec);
  const auto& th = point.values;
  std::vector<typename Field::Elem> image(
      static_cast<std::size_t>(spec.ambient_dim()), f.zero());

  const int r = spec.rank();
  if (spec.variant() == Variant::matrix_completion) {
    const int n1 = spec.n1(), n2 = spec.n2();
    const std::int64_t v_off = layout.factor_offset(0);
    const std::int64_t w_off = layout.factor_offset(1);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        auto& y = image[std::int64_t(i) * n2 + j];
        for (int l = 0; l < r; ++l)
          y = f.add(y, f.mul(th[v_off + std::int64_t(l) * n1 + i],
                             th[w_off + std::int64_t(l) * n2 + j]));
      }
  } else {
    const int n1 = spec.n1(), n2 = spec.n2(), n3 = spec.n3();
    const std::int64_t a_off = layout.factor_offset(0);
    const std::int64_t b_off = layout.factor_offset(1);
    const std::int64_t c_off = layout.factor_offset(2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n3; ++k) {
          auto& y = image[(std::int64_t(i) * n2 + j) * n3 + k];
          for (int l = 0; l < r; ++l)
            y = f.add(y, f.mul(f.mul(th[a_off + std::int64_t(l) * n1 + i],
                                     th[b_off + std::int64_t(l) * n2 + j]),
                               th[c_off + std::int64_t(l) * n3 + k]));
        }
  }

  if (spec.is_completion() && layout.x_count > 0) {
    const auto& observed = spec.pattern().cells();
    std::size_t next_observed = 0;
    std::int64_t x_index = 0;
    for (std::int64_t cell = 0; cell < spec.ambient_dim(); ++cell) {
      if (next_observed < observed.size() && observed[next_observed] == cell) {
        ++next_observed;
        continue;
      }
      image[cell] = f.add(image[cell], th[layout.x_offset() + x_index]);
      ++x_index;
    }
  }
  return image;
}

template <class Field>
Jacobian<typename Field::Elem> assemble_matrix_completion(
    const ParameterPoint<typename Field::Elem>& point, const Field& f) {
  detail::require_point(point);
  const ProblemSpec& spec = point.spec;
  if (spec.variant() != Variant::matrix_completion)
    fail(ErrorKind::invalid_spec, "spec variant is not matrix completion");
  const BlockLayout layout = BlockLayout::of(spec);
  const auto& th = point.values;
  const int n1 = spec.n1(), n2 = spec.n2(), r = spec.rank();
  const std::int64_t v_off = layout.factor_offset(0);
  const std::int64_t w_off = layout.factor_offset(1);

  Jacobian<typename Field::Elem> jac;
  jac.matrix = DenseMatrix<typename Field::Elem>(spec.ambient_dim(), layout.total());
  jac.labels = column_labels(spec);

  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const std::int64_t row = std::int64_t(i) * n2 + j;
      for (int l = 0; l < r; ++l) {
        jac.matrix(row, v_off + std::int64_t(l) * n1 + i) =
            th[w_off + std::int64_t(l) * n2 + j];
        jac.matrix(row, w_off + std::int64_t(l) * n2 + j) =
            th[v_off + std::int64_t(l) * n1 + i];
      }
    }

  if (layout.x_count > 0) {
    const auto& observed = spec.pattern().cells();
    std::size_t next_observed = 0;
    std::int64_t x_index = 0;
    for (std::int64_t cell = 0; cell < spec.ambient_dim(); ++cell) {
      if (next_observed < observed.size() && observed[next_observed] == cell) {
        ++next_observed;
        continue;
      }
      jac.matrix(cell, layout.x_offset() + x_index) = f.one();
      ++x_index;
    }
  }
  return jac;
}

template <class Field>
Jacobian<typename Field::Elem> assemble_cpd_block(
    const ParameterPoint<typename Field::Elem>& point, const Field& f,
    std::int64_t total_cols) {
  const ProblemSpec& spec = point.spec;
  const BlockLayout layout = BlockLayout::of(spec);
  const auto& th = point.values;
  const int n1 = spec.n1(), n2 = spec.n2(), n3 = spec.n3(), r = spec.rank();
  const std::int64_t a_off = layout.factor_offset(0);
  const std::int64_t b_off = layout.factor_offset(1);
  const std::int64_t c_off = layout.factor_offset(2);

  Jacobian<typename Field::Elem> jac;
  jac.matrix = DenseMatrix<typename Field::Elem>(spec.ambient_dim(), total_cols);
  jac.labels = column_labels(spec);

  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n3; ++k) {
        const std::int64_t row = (std::int64_t(i) * n2 + j) * n3 + k;
        for (int l = 0; l < r; ++l) {
          const auto a = th[a_off + std::int64_t(l) * n1 + i];
          const auto b = th[b_off + std::int64_t(l) * n2 + j];
          const auto c = th[c_off + std::int64_t(l) * n3 + k];
          jac.matrix(row, a_off + std::int64_t(l) * n1 + i) = f.mul(b, c);
          jac.matrix(row, b_off + std::int64_t(l) * n2 + j) = f.mul(a, c);
          jac.matrix(row, c_off + std::int64_t(l) * n3 + k) = f.mul(a, b);
        }
      }
  return jac;
}

template <class Field>
Jacobian<typename Field::Elem> assemble_cpd(
    const ParameterPoint<typename Field::Elem>& point, const Field& f) {
  detail::require_point(point);
  if (point.spec.variant() != Variant::cpd)
    fail(ErrorKind::invalid_spec, "spec variant is not CPD");
  return assemble_cpd_block(point, f, BlockLayout::of(point.spec).total());
}

template <class Field>
Jacobian<typename Field::Elem> assemble_tensor_completion(
    const ParameterPoint<typename Field::Elem>& point, const Field& f) {
  detail::require_point(point);
  const ProblemSpec& spec = point.spec;
  if (spec.variant() != Variant::tensor_completion)
    fail(ErrorKind::invalid_spec, "spec variant is not tensor completion");
  const BlockLayout layout = BlockLayout::of(spec);
  auto jac = assemble_cpd_block(point, f, layout.total());

  if (layout.x_count > 0) {
    const auto& observed = spec.pattern().cells();
    std::size_t next_observed = 0;
    std::int64_t x_index = 0;
    for (std::int64_t cell = 0; cell < spec.ambient_dim(); ++cell) {
      if (next_observed < observed.size() && observed[next_observed] == cell) {
        ++next_observed;
        continue;
      }
      jac.matrix(cell, layout.x_offset() + x_index) = f.one();
      ++x_index;
    }
  }
  return jac;
}

}  // namespace chrank
