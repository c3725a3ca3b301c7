#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnr {

enum class ErrorKind {
  invalid_modulus,
  parameter,
  range,
  resource,
  factorization,
  perfect_square,
  degenerate_set,
  internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this one exception type; the
// kind says which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace qnr
