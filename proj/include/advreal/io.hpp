#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "advreal/ratlinalg.hpp"
#include "advreal/rational.hpp"

// File formats. Matrix: "rows cols" then row-major rationals. Points:
// "N d" then N rows. Tuple: one rational per line. Function: "pwl" header
// then breakpoint pairs. Rationals are "p/q" or "p", canonical on output.

namespace advreal {

namespace detail {

inline Rational next_rat(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw std::invalid_argument(std::string(what) + ": unexpected end of input");
  auto q = try_parse_rat(tok);
  if (!q) throw std::invalid_argument(std::string(what) + ": bad rational '" + tok + "'");
  return *q;
}

inline long next_count(std::istream& in, const char* what) {
  long n;
  if (!(in >> n) || n < 0)
    throw std::invalid_argument(std::string(what) + ": expected a nonnegative count");
  return n;
}

inline void expect_end(std::istream& in, const char* what) {
  std::string tok;
  if (in >> tok)
    throw std::invalid_argument(std::string(what) + ": trailing content '" + tok + "'");
}

}  // namespace detail

inline RatMatrix read_matrix(std::istream& in) {
  long rows = detail::next_count(in, "matrix");
  long cols = detail::next_count(in, "matrix");
  if (rows < 1 || cols < 1 || rows > 64 || cols > 64)
    throw std::invalid_argument("matrix: dimensions out of range");
  RatMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m.at(i, j) = detail::next_rat(in, "matrix");
  detail::expect_end(in, "matrix");
  return m;
}

inline void write_matrix(std::ostream& out, const RatMatrix& m) {
  out << m.rows << " " << m.cols << "\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) out << (j ? " " : "") << print_rat(m.at(i, j));
    out << "\n";
  }
}

inline std::vector<RatVector> read_points(std::istream& in) {
  long n = detail::next_count(in, "points");
  long d = detail::next_count(in, "points");
  if (n < 1 || d < 1 || n > 4096 || d > 64)
    throw std::invalid_argument("points: dimensions out of range");
  std::vector<RatVector> pts(n, RatVector(d));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < d; ++j) pts[i][j] = detail::next_rat(in, "points");
  detail::expect_end(in, "points");
  return pts;
}

inline void write_points(std::ostream& out, const std::vector<RatVector>& pts) {
  out << pts.size() << " " << (pts.empty() ? 0 : pts.front().size()) << "\n";
  for (const auto& p : pts) {
    for (std::size_t j = 0; j < p.size(); ++j) out << (j ? " " : "") << print_rat(p[j]);
    out << "\n";
  }
}

inline RatVector read_tuple(std::istream& in) {
  RatVector out;
  std::string tok;
  while (in >> tok) {
    auto q = try_parse_rat(tok);
    if (!q) throw std::invalid_argument("tuple: bad rational '" + tok + "'");
    out.push_back(*q);
  }
  if (out.empty()) throw std::invalid_argument("tuple: empty input");
  return out;
}

inline void write_tuple(std::ostream& out, const RatVector& v) {
  for (const auto& q : v) out << print_rat(q) << "\n";
}

inline std::vector<std::pair<Rational, Rational>> read_pwl(std::istream& in) {
  std::string header;
  if (!(in >> header) || header != "pwl")
    throw std::invalid_argument("function: expected 'pwl' header");
  std::vector<std::pair<Rational, Rational>> pts;
  std::string tok;
  while (in >> tok) {
    auto x = try_parse_rat(tok);
    if (!x) throw std::invalid_argument("function: bad rational '" + tok + "'");
    Rational y = detail::next_rat(in, "function");
    pts.emplace_back(*x, y);
  }
  if (pts.size() < 2) throw std::invalid_argument("function: need at least two breakpoints");
  return pts;
}

inline void write_pwl(std::ostream& out, const std::vector<std::pair<Rational, Rational>>& pts) {
  out << "pwl\n";
  for (const auto& [x, y] : pts) out << print_rat(x) << " " << print_rat(y) << "\n";
}

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open input file: " + path);
  return f;
}

}  // namespace detail

inline RatMatrix read_matrix_file(const std::string& path) {
  auto f = detail::open_input(path);
  return read_matrix(f);
}

inline std::vector<RatVector> read_points_file(const std::string& path) {
  auto f = detail::open_input(path);
  return read_points(f);
}

inline RatVector read_tuple_file(const std::string& path) {
  auto f = detail::open_input(path);
  return read_tuple(f);
}

inline std::vector<std::pair<Rational, Rational>> read_pwl_file(const std::string& path) {
  auto f = detail::open_input(path);
  return read_pwl(f);
}

}  // namespace advreal
