#include "kaczlab/error.hpp"

namespace kaczlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::zero_row_or_column: return "ZeroRowOrColumn";
    case ErrorCode::non_finite_entry: return "NonFiniteEntry";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::unsupported_field: return "UnsupportedField";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::oracle_not_converged: return "OracleNotConverged";
    case ErrorCode::trivial_null_space: return "TrivialNullSpace";
    case ErrorCode::degenerate_geometry: return "DegenerateGeometry";
    case ErrorCode::invalid_ratio: return "InvalidRatio";
    case ErrorCode::zero_residual: return "ZeroResidual";
    case ErrorCode::reference_unavailable: return "ReferenceUnavailable";
    case ErrorCode::window_not_ready: return "WindowNotReady";
    case ErrorCode::oracle_unavailable: return "OracleUnavailable";
    case ErrorCode::incomplete_run: return "IncompleteRun";
  }
  return "Unknown";
}

ZeroRowOrColumn::ZeroRowOrColumn(Kind kind, std::size_t index)
    : Error(ErrorCode::zero_row_or_column,
            std::string("zero ") + (kind == Kind::row ? "row " : "column ") +
                std::to_string(index + 1) + " (matrix must have no zero rows or columns)"),
      kind_(kind),
      index_(index) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorCode::parse_error,
            line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

}  // namespace kaczlab
