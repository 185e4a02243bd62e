#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chrank {

/// Lexicographic linearization of an index tuple: (i,j) -> i*n2 + j and
/// (i,j,k) -> (i*n2 + j)*n3 + k.
std::int64_t encode_index(std::span<const int> shape, std::span<const int> tuple);
std::vector<int> decode_index(std::span<const int> shape, std::int64_t linear);

/// A validated set of observed index tuples over a matrix or 3-way tensor.
/// Cells are stored as sorted linearized indices, so iteration order is the
/// lexicographic tuple order and serialization is deterministic.
/// Immutable after construction.
class ObservationPattern {
 public:
  ObservationPattern() = default;

  /// Validates arity, bounds and duplicates. Indices are 0-based.
  static ObservationPattern from_tuples(std::vector<int> shape,
                                        const std::vector<std::vector<int>>& tuples);
  static ObservationPattern from_linear(std::vector<int> shape,
                                        std::vector<std::int64_t> cells);
  static ObservationPattern full(std::vector<int> shape);
  static ObservationPattern none(std::vector<int> shape);

  const std::vector<int>& shape() const { return shape_; }
  int order() const { return static_cast<int>(shape_.size()); }
  std::int64_t ambient() const;
  std::int64_t size() const { return static_cast<std::int64_t>(cells_.size()); }

  bool contains(std::int64_t cell) const;
  const std::vector<std::int64_t>& cells() const { return cells_; }
  std::vector<int> tuple_of(std::int64_t cell) const;

  bool operator==(const ObservationPattern&) const = default;

 private:
  std::vector<int> shape_;
  std::vector<std::int64_t> cells_;  // sorted, unique
};

// Mask text format: one observed tuple per line, whitespace-separated 0-based
// integers, '#' starts a comment, blank lines ignored.
ObservationPattern parse_mask_text(std::istream& in, std::vector<int> shape,
                                   std::string_view source_name);
ObservationPattern load_mask_file(const std::filesystem::path& path,
                                  std::vector<int> shape);
void write_mask_text(std::ostream& out, const ObservationPattern& pattern);
std::string mask_to_text(const ObservationPattern& pattern);

}  // namespace chrank
