#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chrank/pattern.hpp"

namespace chrank {

enum class Variant { matrix_completion, cpd, tensor_completion };

std::string_view to_string(Variant v);

/// One analyzable problem instance. Immutable after construction; all
/// invariants (positive extents, rank bounds, pattern shape agreement) are
/// enforced by the factories.
class ProblemSpec {
 public:
  /// Default-constructed specs are empty placeholders; build real instances
  /// through the validating factories below.
  ProblemSpec() = default;

  static ProblemSpec matrix_completion(int n1, int n2, int r,
                                       ObservationPattern pattern);
  static ProblemSpec cpd(int n1, int n2, int n3, int r);
  static ProblemSpec tensor_completion(int n1, int n2, int n3, int r,
                                       ObservationPattern pattern);

  Variant variant() const { return variant_; }
  bool is_completion() const { return variant_ != Variant::cpd; }
  int order() const { return variant_ == Variant::matrix_completion ? 2 : 3; }

  int n1() const { return extents_[0]; }
  int n2() const { return extents_[1]; }
  int n3() const;  // order-3 variants only
  int rank() const { return rank_; }
  std::vector<int> shape() const;

  /// Observation pattern; only completion variants carry one.
  const ObservationPattern& pattern() const;
  /// m = |Omega| for completion variants; the full cell count for CPD (every
  /// entry of the target tensor is known).
  std::int64_t observed_count() const;

  std::int64_t ambient_dim() const;
  std::int64_t param_dim() const;

  bool operator==(const ProblemSpec&) const = default;

 private:
  Variant variant_ = Variant::matrix_completion;
  int extents_[3] = {0, 0, 0};
  int rank_ = 0;
  std::optional<ObservationPattern> pattern_;
};

/// Dimension of the manifold of n1 x n2 matrices of fixed rank r:
/// r*(n1 + n2 - r). Requires 1 <= r <= min(n1, n2).
std::int64_t manifold_dim(int n1, int n2, int r);

/// Dimension of the set of tensors admitting a rank-r CP decomposition,
/// after quotienting the per-column scaling indeterminacy: r*(n1+n2+n3-2).
std::int64_t cpd_tangent_dim(int n1, int n2, int n3, int r);

struct DimensionSummary {
  std::int64_t ambient_dim = 0;
  std::int64_t param_dim = 0;
  std::int64_t tangent_dim = 0;
  std::int64_t complement_dim = 0;   // dim of the unobserved-entry subspace
  std::int64_t wellposed_target = 0; // tangent_dim + complement_dim

  bool operator==(const DimensionSummary&) const = default;
};

DimensionSummary dimension_summary(const ProblemSpec& spec);

/// Smallest m for which wellposed_target <= ambient_dim; equals the tangent
/// dimension of the variant. Unsupported for CPD (no observation pattern).
std::int64_t necessary_sample_bound(const ProblemSpec& spec);

// Flat key-value serialization: variant, extents, rank, and either an inline
// observed list or a mask file path.
std::string spec_to_kv(const ProblemSpec& spec);
ProblemSpec spec_from_kv(std::istream& in, const std::filesystem::path& base_dir = {});
ProblemSpec spec_from_kv_text(const std::string& text,
                              const std::filesystem::path& base_dir = {});

}  // namespace chrank
