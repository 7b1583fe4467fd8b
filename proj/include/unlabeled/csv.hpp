#pragma once

// Matrix/vector CSV: one row per line, comma-separated decimal floats, no
// header. Vectors are single-column files. Values are written with 17
// significant digits, which round-trips every binary64 exactly.

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "unlabeled/densela.hpp"
#include "unlabeled/error.hpp"

namespace unlabeled::csv {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (t.empty() || ec != std::errc() || ptr != end)
    throw ParseError(where + ": non-numeric token '" + t + "'");
  if (!std::isfinite(v)) throw ParseError(where + ": non-finite value '" + t + "'");
  return v;
}

}  // namespace detail

/// `source` names the stream in error messages ("a.csv:3: ...").
inline Mat read_matrix(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t blank_run_start = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) {
      if (blank_run_start == 0) blank_run_start = line_no;
      continue;
    }
    if (blank_run_start != 0 && !rows.empty())
      throw ParseError(source + ":" + std::to_string(blank_run_start) + ": blank line inside data");
    blank_run_start = 0;
    const std::string where = source + ":" + std::to_string(line_no);
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) row.push_back(detail::parse_double(token, where));
    if (!line.empty() && detail::trim(line).back() == ',')
      throw ParseError(where + ": trailing comma");
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(where + ": ragged row with " + std::to_string(row.size()) +
                       " values, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source + ": no data");
  Mat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

inline Vec read_vector(std::istream& in, const std::string& source) {
  const Mat m = read_matrix(in, source);
  if (m.cols() != 1)
    throw ParseError(source + ": expected a single-column vector, found " +
                     std::to_string(m.cols()) + " columns");
  return m.col(0);
}

inline void write_matrix(std::ostream& out, const Mat& m) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

inline void write_vector(std::ostream& out, const Vec& v) { write_matrix(out, Mat(v)); }

inline Mat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_matrix(in, path);
}

inline Vec read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_vector(in, path);
}

inline void write_matrix_file(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  write_matrix(out, m);
  if (!out) throw ParseError(path + ": write failed");
}

inline void write_vector_file(const std::string& path, const Vec& v) {
  write_matrix_file(path, Mat(v));
}

}  // namespace unlabeled::csv
