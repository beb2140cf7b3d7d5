#pragma once

#include <iosfwd>
#include <string>

#include "kaczlab/matrix.hpp"

namespace kaczlab {

/// Reads coordinate or array Matrix Market data with real, integer or
/// pattern fields and general, symmetric or skew-symmetric storage.
/// Symmetric storage is expanded. Complex fields raise UnsupportedField;
/// malformed input raises ParseError with the offending line.
RowColMatrix read_matrix_market(std::istream& in);
RowColMatrix read_matrix_market(const std::string& path);

/// Writes "coordinate real general" with round-trip precision.
void write_matrix_market(std::ostream& out, const RowColMatrix& a);
void write_matrix_market(const std::string& path, const RowColMatrix& a);

/// Whitespace separated dense rows, one matrix row per line; '#' starts a comment.
RowColMatrix read_dense_text(std::istream& in);
RowColMatrix read_dense_text(const std::string& path);

}  // namespace kaczlab
