#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kaczlab {

enum class ErrorCode {
  invalid_argument,
  zero_row_or_column,
  non_finite_entry,
  index_out_of_range,
  parse_error,
  unsupported_field,
  io_error,
  oracle_not_converged,
  trivial_null_space,
  degenerate_geometry,
  invalid_ratio,
  zero_residual,
  reference_unavailable,
  window_not_ready,
  oracle_unavailable,
  incomplete_run,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Thrown by matrix construction; `index` is 0-based.
class ZeroRowOrColumn : public Error {
 public:
  enum class Kind { row, column };

  ZeroRowOrColumn(Kind kind, std::size_t index);

  Kind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

/// Matrix Market / dense text parse failure; `line` is 1-based (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace kaczlab
