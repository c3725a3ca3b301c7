#include "qnr/error.hpp"

namespace qnr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_modulus: return "invalid modulus";
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::range: return "range error";
    case ErrorKind::resource: return "resource error";
    case ErrorKind::factorization: return "factorization error";
    case ErrorKind::perfect_square: return "perfect square";
    case ErrorKind::degenerate_set: return "degenerate set";
    case ErrorKind::internal: return "internal error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qnr
