#include "chrank/problem.hpp"

#include <algorithm>
#include <sstream>

#include "chrank/error.hpp"

namespace chrank {

namespace {

void require_positive(int value, const char* name) {
  if (value < 1)
    fail(ErrorKind::invalid_spec, std::string(name) + " must be positive, got " +
                                      std::to_string(value));
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::matrix_completion: return "matrix_completion";
    case Variant::cpd: return "cpd";
    case Variant::tensor_completion: return "tensor_completion";
  }
  return "unknown";
}

ProblemSpec ProblemSpec::matrix_completion(int n1, int n2, int r,
                                           ObservationPattern pattern) {
  require_positive(n1, "n1");
  require_positive(n2, "n2");
  require_positive(r, "rank");
  if (r > std::min(n1, n2))
    fail(ErrorKind::invalid_spec, "rank " + std::to_string(r) +
                                      " exceeds min(n1, n2) = " +
                                      std::to_string(std::min(n1, n2)));
  if (pattern.shape() != std::vector<int>{n1, n2})
    fail(ErrorKind::invalid_spec, "pattern shape does not match matrix extents " +
                                      std::to_string(n1) + " x " +
                                      std::to_string(n2));
  ProblemSpec s;
  s.variant_ = Variant::matrix_completion;
  s.extents_[0] = n1;
  s.extents_[1] = n2;
  s.extents_[2] = 1;
  s.rank_ = r;
  s.pattern_ = std::move(pattern);
  return s;
}

ProblemSpec ProblemSpec::cpd(int n1, int n2, int n3, int r) {
  require_positive(n1, "n1");
  require_positive(n2, "n2");
  require_positive(n3, "n3");
  require_positive(r, "rank");
  ProblemSpec s;
  s.variant_ = Variant::cpd;
  s.extents_[0] = n1;
  s.extents_[1] = n2;
  s.extents_[2] = n3;
  s.rank_ = r;
  return s;
}

ProblemSpec ProblemSpec::tensor_completion(int n1, int n2, int n3, int r,
                                           ObservationPattern pattern) {
  require_positive(n1, "n1");
  require_positive(n2, "n2");
  require_positive(n3, "n3");
  require_positive(r, "rank");
  if (pattern.shape() != std::vector<int>{n1, n2, n3})
    fail(ErrorKind::invalid_spec, "pattern shape does not match tensor extents " +
                                      std::to_string(n1) + " x " +
                                      std::to_string(n2) + " x " +
                                      std::to_string(n3));
  ProblemSpec s;
  s.variant_ = Variant::tensor_completion;
  s.extents_[0] = n1;
  s.extents_[1] = n2;
  s.extents_[2] = n3;
  s.rank_ = r;
  s.pattern_ = std::move(pattern);
  return s;
}

int ProblemSpec::n3() const {
  if (order() != 3)
    fail(ErrorKind::invalid_spec, "n3 is undefined for a matrix problem");
  return extents_[2];
}

std::vector<int> ProblemSpec::shape() const {
  if (variant_ == Variant::matrix_completion)
    return {extents_[0], extents_[1]};
  return {extents_[0], extents_[1], extents_[2]};
}

const ObservationPattern& ProblemSpec::pattern() const {
  if (!pattern_)
    fail(ErrorKind::invalid_spec,
         "cpd problems carry no observation pattern");
  return *pattern_;
}

std::int64_t ProblemSpec::observed_count() const {
  return pattern_ ? pattern_->size() : ambient_dim();
}

std::int64_t ProblemSpec::ambient_dim() const {
  std::int64_t n = 1;
  for (int e : shape()) n *= e;
  return n;
}

std::int64_t ProblemSpec::param_dim() const {
  const std::int64_t unobserved = ambient_dim() - observed_count();
  switch (variant_) {
    case Variant::matrix_completion:
      return std::int64_t(rank_) * (extents_[0] + extents_[1]) + unobserved;
    case Variant::cpd:
      return std::int64_t(rank_) * (extents_[0] + extents_[1] + extents_[2]);
    case Variant::tensor_completion:
      return std::int64_t(rank_) * (extents_[0] + extents_[1] + extents_[2]) +
             unobserved;
  }
  fail(ErrorKind::invalid_spec, "unknown problem variant");
}

std::int64_t manifold_dim(int n1, int n2, int r) {
  return std::int64_t(r) * (n1 + n2 - r);
}

std::int64_t cpd_tangent_dim(int n1, int n2, int n3, int r) {
  return std::int64_t(r) * (n1 + n2 + n3 - 2);
}

DimensionSummary dimension_summary(const ProblemSpec& spec) {
  DimensionSummary d;
  d.ambient_dim = spec.ambient_dim();
  d.param_dim = spec.param_dim();
  switch (spec.variant()) {
    case Variant::matrix_completion:
      d.tangent_dim = manifold_dim(spec.n1(), spec.n2(), spec.rank());
      break;
    case Variant::cpd:
    case Variant::tensor_completion:
      d.tangent_dim =
          cpd_tangent_dim(spec.n1(), spec.n2(), spec.n3(), spec.rank());
      break;
  }
  d.complement_dim = d.ambient_dim - spec.observed_count();
  d.wellposed_target = d.tangent_dim + d.complement_dim;
  return d;
}

std::int64_t necessary_sample_bound(const ProblemSpec& spec) {
  if (!spec.is_completion())
    fail(ErrorKind::unsupported,
         "sample bound applies to completion problems only");
  return dimension_summary(spec).tangent_dim;
}

std::string spec_to_kv(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "variant=" << to_string(spec.variant()) << '\n';
  out << "n1=" << spec.n1() << '\n';
  out << "n2=" << spec.n2() << '\n';
  if (spec.order() == 3) out << "n3=" << spec.n3() << '\n';
  out << "rank=" << spec.rank() << '\n';
  if (spec.is_completion()) {
    out << "cells=";
    const auto& cells = spec.pattern().cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  }
  return out.str();
}

ProblemSpec spec_from_kv(std::istream& in, const std::filesystem::path& base_dir) {
  std::string variant;
  int n1 = 0, n2 = 0, n3 = 0, rank = 0;
  bool has_cells = false;
  std::vector<std::int64_t> cells;
  std::filesystem::path mask_path;

  std::string line;
  int line_no = 0;
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::parse, "spec line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    // trim surrounding whitespace
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "variant") variant = value;
      else if (key == "n1") n1 = std::stoi(value);
      else if (key == "n2") n2 = std::stoi(value);
      else if (key == "n3") n3 = std::stoi(value);
      else if (key == "rank") rank = std::stoi(value);
      else if (key == "cells") {
        has_cells = true;
        std::istringstream list(value);
        std::string item;
        while (std::getline(list, item, ','))
          if (!item.empty()) cells.push_back(std::stoll(item));
      } else if (key == "mask") {
        mask_path = base_dir.empty() ? std::filesystem::path(value)
                                     : base_dir / value;
      } else {
        bad("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      bad("non-numeric value '" + value + "' for key '" + key + "'");
    } catch (const std::out_of_range&) {
      bad("value '" + value + "' out of range for key '" + key + "'");
    }
  }

  const bool completion =
      variant == "matrix_completion" || variant == "tensor_completion";
  if (completion && has_cells && !mask_path.empty())
    fail(ErrorKind::parse, "spec gives both cells= and mask=");
  if (completion && !has_cells && mask_path.empty())
    fail(ErrorKind::parse, "spec variant '" + variant +
                               "' requires cells= or mask=");
  if (!completion && (has_cells || !mask_path.empty()))
    fail(ErrorKind::parse, "cpd spec does not take an observation pattern");

  auto make_pattern = [&](std::vector<int> shape) {
    if (!mask_path.empty()) return load_mask_file(mask_path, std::move(shape));
    return ObservationPattern::from_linear(std::move(shape), std::move(cells));
  };
  if (variant == "matrix_completion")
    return ProblemSpec::matrix_completion(n1, n2, rank, make_pattern({n1, n2}));
  if (variant == "cpd")
    return ProblemSpec::cpd(n1, n2, n3, rank);
  if (variant == "tensor_completion")
    return ProblemSpec::tensor_completion(n1, n2, n3, rank,
                                          make_pattern({n1, n2, n3}));
  fail(ErrorKind::parse, "unknown variant '" + variant + "'");
}

ProblemSpec spec_from_kv_text(const std::string& text,
                              const std::filesystem::path& base_dir) {
  std::istringstream in(text);
  return spec_from_kv(in, base_dir);
}

}  // namespace chrank
