#include "chrank/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "chrank/error.hpp"

namespace chrank {

namespace {

void require_shape(const std::vector<int>& shape) {
  if (shape.size() != 2 && shape.size() != 3)
    fail(ErrorKind::invalid_spec, "shape must have 2 or 3 extents, got " +
                                      std::to_string(shape.size()));
  for (std::size_t d = 0; d < shape.size(); ++d)
    if (shape[d] < 1)
      fail(ErrorKind::invalid_spec, "extent " + std::to_string(shape[d]) +
                                        " in dimension " + std::to_string(d) +
                                        " is not positive");
}

std::int64_t ambient_of(const std::vector<int>& shape) {
  std::int64_t n = 1;
  for (int e : shape) n *= e;
  return n;
}

std::string tuple_str(std::span<const int> tuple) {
  std::string s = "(";
  for (std::size_t d = 0; d < tuple.size(); ++d) {
    if (d) s += ", ";
    s += std::to_string(tuple[d]);
  }
  return s + ")";
}

}  // namespace

std::int64_t encode_index(std::span<const int> shape, std::span<const int> tuple) {
  std::int64_t linear = 0;
  for (std::size_t d = 0; d < shape.size(); ++d)
    linear = linear * shape[d] + tuple[d];
  return linear;
}

std::vector<int> decode_index(std::span<const int> shape, std::int64_t linear) {
  std::vector<int> tuple(shape.size());
  for (std::size_t d = shape.size(); d-- > 0;) {
    tuple[d] = static_cast<int>(linear % shape[d]);
    linear /= shape[d];
  }
  return tuple;
}

ObservationPattern ObservationPattern::from_tuples(
    std::vector<int> shape, const std::vector<std::vector<int>>& tuples) {
  require_shape(shape);
  std::vector<std::int64_t> cells;
  cells.reserve(tuples.size());
  for (const auto& tuple : tuples) {
    if (tuple.size() != shape.size())
      fail(ErrorKind::invalid_spec,
           "index tuple " + tuple_str(tuple) + " has arity " +
               std::to_string(tuple.size()) + ", expected " +
               std::to_string(shape.size()));
    for (std::size_t d = 0; d < shape.size(); ++d)
      if (tuple[d] < 0 || tuple[d] >= shape[d])
        fail(ErrorKind::invalid_spec,
             "index " + std::to_string(tuple[d]) + " out of range [0, " +
                 std::to_string(shape[d]) + ") in dimension " +
                 std::to_string(d));
    cells.push_back(encode_index(shape, tuple));
  }
  return from_linear(std::move(shape), std::move(cells));
}

ObservationPattern ObservationPattern::from_linear(std::vector<int> shape,
                                                   std::vector<std::int64_t> cells) {
  require_shape(shape);
  const std::int64_t ambient = ambient_of(shape);
  std::sort(cells.begin(), cells.end());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < 0 || cells[i] >= ambient)
      fail(ErrorKind::invalid_spec,
           "linearized cell " + std::to_string(cells[i]) +
               " out of range [0, " + std::to_string(ambient) + ")");
    if (i > 0 && cells[i] == cells[i - 1])
      fail(ErrorKind::invalid_spec,
           "duplicate observed cell " +
               tuple_str(decode_index(shape, cells[i])));
  }
  ObservationPattern p;
  p.shape_ = std::move(shape);
  p.cells_ = std::move(cells);
  return p;
}

ObservationPattern ObservationPattern::full(std::vector<int> shape) {
  require_shape(shape);
  std::vector<std::int64_t> cells(static_cast<std::size_t>(ambient_of(shape)));
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = std::int64_t(i);
  return from_linear(std::move(shape), std::move(cells));
}

ObservationPattern ObservationPattern::none(std::vector<int> shape) {
  return from_linear(std::move(shape), {});
}

std::int64_t ObservationPattern::ambient() const { return ambient_of(shape_); }

bool ObservationPattern::contains(std::int64_t cell) const {
  return std::binary_search(cells_.begin(), cells_.end(), cell);
}

std::vector<int> ObservationPattern::tuple_of(std::int64_t cell) const {
  return decode_index(shape_, cell);
}

ObservationPattern parse_mask_text(std::istream& in, std::vector<int> shape,
                                   std::string_view source_name) {
  require_shape(shape);
  std::vector<std::int64_t> cells;
  std::vector<int> first_line;  // line where each cell was first seen
  std::string line;
  int line_no = 0;
  auto where = [&](int at) {
    return std::string(source_name) + " line " + std::to_string(at);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::vector<int> tuple;
    long long value;
    while (fields >> value) tuple.push_back(static_cast<int>(value));
    if (!fields.eof())
      fail(ErrorKind::parse, where(line_no) + ": malformed index");
    if (tuple.empty()) continue;  // blank or comment-only line
    if (tuple.size() != shape.size())
      fail(ErrorKind::parse, where(line_no) + ": expected " +
                                 std::to_string(shape.size()) +
                                 " indices, got " + std::to_string(tuple.size()));
    for (std::size_t d = 0; d < shape.size(); ++d)
      if (tuple[d] < 0 || tuple[d] >= shape[d])
        fail(ErrorKind::parse, where(line_no) + ": index " +
                                   std::to_string(tuple[d]) +
                                   " out of range [0, " +
                                   std::to_string(shape[d]) + ") in dimension " +
                                   std::to_string(d));
    const std::int64_t cell = encode_index(shape, tuple);
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i] == cell)
        fail(ErrorKind::parse, where(line_no) + ": duplicate of " +
                                   where(first_line[i]));
    cells.push_back(cell);
    first_line.push_back(line_no);
  }
  return ObservationPattern::from_linear(std::move(shape), std::move(cells));
}

ObservationPattern load_mask_file(const std::filesystem::path& path,
                                  std::vector<int> shape) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::io, "cannot open mask file " + path.string());
  return parse_mask_text(in, std::move(shape), path.string());
}

void write_mask_text(std::ostream& out, const ObservationPattern& pattern) {
  for (std::int64_t cell : pattern.cells()) {
    const auto tuple = pattern.tuple_of(cell);
    for (std::size_t d = 0; d < tuple.size(); ++d) {
      if (d) out << ' ';
      out << tuple[d];
    }
    out << '\n';
  }
}

std::string mask_to_text(const ObservationPattern& pattern) {
  std::ostringstream out;
  write_mask_text(out, pattern);
  return out.str();
}

}  // namespace chrank
