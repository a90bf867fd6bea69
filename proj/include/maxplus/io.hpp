#pragma once

// Plain-text matrix and vector files.
//
//   tropical <n>        vec <n>
//   <i> <j> <w>         <i> <w>
//
// One line per finite entry, 0-based indices, '#' starts a comment and
// missing entries are the semiring zero. Weights are written with 17
// significant digits so that every double (in particular every integer)
// survives a write/read cycle bit-exactly.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "maxplus/matrix.hpp"

namespace maxplus::io {

inline std::string format_scalar(Scalar w) {
  if (w == zero) return "-inf";
  if (w == top) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline Scalar parse_scalar(const std::string& tok, std::size_t line_no) {
  if (tok == "inf" || tok == "+inf") return top;
  if (tok == "-inf") return zero;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || std::isnan(v))
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  return v;
}

inline std::size_t parse_index(const std::string& tok, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad index '" + tok + "'");
  return v;
}

// Reads the header line `<keyword> <n>`, skipping blanks and comments.
inline std::size_t read_header(std::istream& in, const std::string& keyword, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(strip_comment(line));
    std::string kw, count, extra;
    if (!(ss >> kw)) continue;
    if (kw != keyword || !(ss >> count) || (ss >> extra))
      throw ParseError("line " + std::to_string(line_no) + ": expected '" + keyword + " <n>'");
    return parse_index(count, line_no);
  }
  throw ParseError("missing '" + keyword + " <n>' header");
}

}  // namespace detail

template <bool E = false>
BasicMatrix<E> read_matrix(std::istream& in) {
  std::size_t line_no = 0;
  const std::size_t n = detail::read_header(in, "tropical", line_no);
  BasicMatrix<E> m(n);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(detail::strip_comment(line));
    std::string si, sj, sw, extra;
    if (!(ss >> si)) continue;
    if (!(ss >> sj >> sw) || (ss >> extra))
      throw ParseError("line " + std::to_string(line_no) + ": expected '<i> <j> <w>'");
    const auto i = detail::parse_index(si, line_no);
    const auto j = detail::parse_index(sj, line_no);
    if (i >= n || j >= n) throw ParseError("line " + std::to_string(line_no) + ": index out of range");
    const Scalar w = detail::parse_scalar(sw, line_no);
    if (!E && w == top) throw ParseError("line " + std::to_string(line_no) + ": +inf in a finite matrix");
    m.set(i, j, w);
  }
  return m;
}

template <bool E>
void write_matrix(std::ostream& out, const BasicMatrix<E>& m) {
  out << "tropical " << m.size() << '\n';
  for (NodeId i = 0; i < m.size(); ++i)
    for (NodeId j = 0; j < m.size(); ++j)
      if (m.has_arc(i, j)) out << i << ' ' << j << ' ' << format_scalar(m(i, j)) << '\n';
}

inline Vector read_vector(std::istream& in) {
  std::size_t line_no = 0;
  const std::size_t n = detail::read_header(in, "vec", line_no);
  Vector v(n, zero);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(detail::strip_comment(line));
    std::string si, sw, extra;
    if (!(ss >> si)) continue;
    if (!(ss >> sw) || (ss >> extra)) throw ParseError("line " + std::to_string(line_no) + ": expected '<i> <w>'");
    const auto i = detail::parse_index(si, line_no);
    if (i >= n) throw ParseError("line " + std::to_string(line_no) + ": index out of range");
    v[i] = detail::parse_scalar(sw, line_no);
  }
  return v;
}

inline void write_vector(std::ostream& out, const Vector& v) {
  out << "vec " << v.size() << '\n';
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != zero) out << i << ' ' << format_scalar(v[i]) << '\n';
}

template <bool E = false>
BasicMatrix<E> load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix<E>(in);
}

inline Vector load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_vector(in);
}

template <bool E>
void save_matrix(const std::string& path, const BasicMatrix<E>& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_matrix(out, m);
}

inline void save_vector(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_vector(out, v);
}

}  // namespace maxplus::io
