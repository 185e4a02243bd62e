#include "chrank/error.hpp"

namespace chrank {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec: return "invalid_spec";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::numeric_input: return "numeric_input";
    case ErrorKind::config: return "config";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::backend_disagreement: return "backend_disagreement";
  }
  return "unknown";
}

}  // namespace chrank
