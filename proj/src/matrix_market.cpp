#include "kaczlab/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "kaczlab/error.hpp"

namespace kaczlab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric, skew };

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  return in;
}

}  // namespace

RowColMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field_s, symmetry_s;
  header >> banner >> object >> format >> field_s >> symmetry_s;
  if (banner != "%%MatrixMarket") throw ParseError(lineno, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field_s = lower(field_s);
  symmetry_s = lower(symmetry_s);
  if (object != "matrix") throw ParseError(lineno, "unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array") throw ParseError(lineno, "unknown format '" + format + "'");

  Field field;
  if (field_s == "real" || field_s == "double") field = Field::real;
  else if (field_s == "integer") field = Field::integer;
  else if (field_s == "pattern") field = Field::pattern;
  else if (field_s == "complex") throw Error(ErrorCode::unsupported_field, "complex Matrix Market files are not supported");
  else throw ParseError(lineno, "unknown field '" + field_s + "'");
  if (field == Field::pattern && format == "array") throw ParseError(lineno, "pattern field requires coordinate format");

  Symmetry sym;
  if (symmetry_s == "general") sym = Symmetry::general;
  else if (symmetry_s == "symmetric") sym = Symmetry::symmetric;
  else if (symmetry_s == "skew-symmetric") sym = Symmetry::skew;
  else if (symmetry_s == "hermitian") throw Error(ErrorCode::unsupported_field, "hermitian storage is not supported");
  else throw ParseError(lineno, "unknown symmetry '" + symmetry_s + "'");

  do {
    if (!std::getline(in, line)) throw ParseError(lineno, "missing size line");
    ++lineno;
  } while (blank_or_comment(line));

  std::istringstream size_line(line);
  long long m = 0, n = 0, declared = 0;
  if (format == "coordinate") {
    if (!(size_line >> m >> n >> declared)) throw ParseError(lineno, "bad size line");
  } else {
    if (!(size_line >> m >> n)) throw ParseError(lineno, "bad size line");
  }
  if (m <= 0 || n <= 0 || declared < 0) throw ParseError(lineno, "dimensions must be positive");
  if (sym != Symmetry::general && m != n) throw ParseError(lineno, "symmetric storage requires a square matrix");

  const auto mm = static_cast<std::size_t>(m);
  const auto nn = static_cast<std::size_t>(n);
  std::vector<Triplet> entries;

  auto add = [&](std::size_t i, std::size_t j, double v) {
    entries.push_back({i, j, v});
    if (i != j && sym == Symmetry::symmetric) entries.push_back({j, i, v});
    if (i != j && sym == Symmetry::skew) entries.push_back({j, i, -v});
  };

  if (format == "coordinate") {
    entries.reserve(static_cast<std::size_t>(declared) * (sym == Symmetry::general ? 1 : 2));
    long long seen = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (blank_or_comment(line)) continue;
      if (seen == declared) throw ParseError(lineno, "more entries than the declared " + std::to_string(declared));
      std::istringstream ls(line);
      long long i = 0, j = 0;
      double v = 1.0;
      if (!(ls >> i >> j)) throw ParseError(lineno, "bad coordinate entry");
      if (field != Field::pattern && !(ls >> v)) throw ParseError(lineno, "missing value");
      if (i < 1 || j < 1 || i > m || j > n) throw ParseError(lineno, "index out of range");
      if (sym == Symmetry::skew && i == j) throw ParseError(lineno, "skew-symmetric diagonal entry");
      add(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v);
      ++seen;
    }
    if (seen != declared)
      throw ParseError(lineno, "header declares " + std::to_string(declared) + " entries, found " + std::to_string(seen));
  } else {
    // column-major; symmetric variants store the lower triangle only
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t j = 0; j < nn; ++j) {
      const std::size_t first = sym == Symmetry::general ? 0 : (sym == Symmetry::symmetric ? j : j + 1);
      for (std::size_t i = first; i < mm; ++i) order.emplace_back(i, j);
    }
    std::size_t k = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (blank_or_comment(line)) continue;
      std::istringstream ls(line);
      double v;
      if (!(ls >> v)) throw ParseError(lineno, "bad array value");
      if (k == order.size()) throw ParseError(lineno, "more values than the matrix holds");
      add(order[k].first, order[k].second, v);
      ++k;
    }
    if (k != order.size())
      throw ParseError(lineno, "expected " + std::to_string(order.size()) + " values, found " + std::to_string(k));
  }

  return RowColMatrix::from_triplets(mm, nn, entries);
}

RowColMatrix read_matrix_market(const std::string& path) {
  auto in = open_input(path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const RowColMatrix& a) {
  const auto t = a.to_triplets();
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << t.size() << '\n';
  out << std::setprecision(17);
  for (const auto& e : t) out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
}

void write_matrix_market(const std::string& path, const RowColMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  write_matrix_market(out, a);
}

RowColMatrix read_dense_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ParseError(lineno, "bad number '" + tok + "'");
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError(lineno, "ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(lineno, "no data rows");
  return RowColMatrix::from_dense(rows);
}

RowColMatrix read_dense_text(const std::string& path) {
  auto in = open_input(path);
  return read_dense_text(in);
}

}  // namespace kaczlab
