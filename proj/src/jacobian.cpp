#include "chrank/jacobian.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace chrank {

std::string ColumnLabel::str() const {
  if (block == 'X') {
    std::string s = "X";
    for (int d = 0; d < 3; ++d) {
      if (cell[d] < 0) break;
      s += ':';
      s += std::to_string(cell[d]);
    }
    return s;
  }
  return std::string(1, block) + ':' + std::to_string(row) + ':' +
         std::to_string(col);
}

BlockLayout BlockLayout::of(const ProblemSpec& spec) {
  BlockLayout layout;
  layout.rank = spec.rank();
  if (spec.variant() == Variant::matrix_completion) {
    layout.factor_count = 2;
    layout.factor_rows = {spec.n1(), spec.n2(), 0};
  } else {
    layout.factor_count = 3;
    layout.factor_rows = {spec.n1(), spec.n2(), spec.n3()};
  }
  layout.x_count =
      spec.is_completion() ? spec.ambient_dim() - spec.observed_count() : 0;
  return layout;
}

std::vector<ColumnLabel> column_labels(const ProblemSpec& spec) {
  const BlockLayout layout = BlockLayout::of(spec);
  std::vector<ColumnLabel> labels;
  labels.reserve(static_cast<std::size_t>(layout.total()));
  for (int f = 0; f < layout.factor_count; ++f)
    for (int l = 0; l < layout.rank; ++l)        // column-major within a factor
      for (int i = 0; i < layout.factor_rows[f]; ++i) {
        ColumnLabel label;
        label.block = layout.block_name(f);
        label.row = i;
        label.col = l;
        labels.push_back(label);
      }
  if (layout.x_count > 0) {
    const auto& observed = spec.pattern().cells();
    std::size_t next_observed = 0;
    const auto shape = spec.shape();
    for (std::int64_t cell = 0; cell < spec.ambient_dim(); ++cell) {
      if (next_observed < observed.size() && observed[next_observed] == cell) {
        ++next_observed;
        continue;
      }
      ColumnLabel label;
      label.block = 'X';
      const auto tuple = decode_index(shape, cell);
      for (std::size_t d = 0; d < tuple.size(); ++d) label.cell[d] = tuple[d];
      labels.push_back(label);
    }
  }
  return labels;
}

namespace {

std::string row_label(const ProblemSpec& spec, std::int64_t row) {
  const auto tuple = decode_index(spec.shape(), row);
  std::string s = "Y";
  for (int idx : tuple) {
    s += ':';
    s += std::to_string(idx);
  }
  return s;
}

std::string format_entry(double v) {
  // Integers print exactly; everything else gets full round-trip precision.
  if (v == std::floor(v) && std::abs(v) < 1e15)
    return std::to_string(static_cast<long long>(v));
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string format_entry(std::uint64_t v) { return std::to_string(v); }

template <typename T>
void write_csv_impl(std::ostream& out, const Jacobian<T>& jac,
                    const ProblemSpec& spec) {
  if (std::int64_t(jac.labels.size()) != jac.cols())
    fail(ErrorKind::invalid_spec, "jacobian has " + std::to_string(jac.cols()) +
                                      " columns but " +
                                      std::to_string(jac.labels.size()) +
                                      " labels");
  out << "row";
  for (const auto& label : jac.labels) out << ',' << label.str();
  out << '\n';
  for (std::int64_t r = 0; r < jac.rows(); ++r) {
    out << row_label(spec, r);
    for (std::int64_t c = 0; c < jac.cols(); ++c)
      out << ',' << format_entry(jac.matrix(r, c));
    out << '\n';
  }
}

}  // namespace

void write_jacobian_csv(std::ostream& out, const Jacobian<double>& jac,
                        const ProblemSpec& spec) {
  write_csv_impl(out, jac, spec);
}

void write_jacobian_csv(std::ostream& out, const Jacobian<std::uint64_t>& jac,
                        const ProblemSpec& spec) {
  write_csv_impl(out, jac, spec);
}

}  // namespace chrank
