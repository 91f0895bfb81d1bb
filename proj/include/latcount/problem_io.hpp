#pragma once

// Line-oriented problem files:
//
//   # comment (also after data on a line)
//   canonical <d> <m>          A: d+m rows of d integers, b: d+m rationals
//   standard <d> <m>           A: m rows of d+m integers, b: m integers
//   parametric <d> <m> <p>     as canonical, then "B:" + d+m rows of p
//                              integers and "y0:" + p rationals
//   <A rows>
//   b: <entries>
//
// Rationals are written "p" or "p/q"; anything with a decimal point or
// exponent is rejected.

#include "latcount/parametric.hpp"

#include <fstream>
#include <sstream>

namespace latcount {

struct ParseError : Error {
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct ProblemFile {
  SourceForm form = SourceForm::canonical;
  std::size_t d = 0, m = 0, p = 0;
  IntMatrix a;
  RationalVector b;
  std::optional<IntMatrix> bparam;
  std::optional<RationalVector> y0;

  [[nodiscard]] std::string form_name() const {
    switch (form) {
    case SourceForm::canonical: return "canonical";
    case SourceForm::standard: return "standard";
    case SourceForm::parametric: return "parametric";
    }
    return "?";
  }
  [[nodiscard]] IntVector integer_b() const {
    IntVector v;
    for (const auto &x : b) v.push_back(x.get_num());
    return v;
  }
};

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::istream &in) {
  std::vector<Line> out;
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    Line l{n, {}};
    for (std::string tok; ss >> tok;) l.tokens.push_back(tok);
    if (!l.tokens.empty()) out.push_back(std::move(l));
  }
  return out;
}

inline std::size_t parse_count(const Line &l, std::size_t i, const char *what) {
  try {
    BigInt v = parse_integer(l.tokens.at(i));
    if (v < 0) throw Error("negative");
    return static_cast<std::size_t>(to_int64(v));
  } catch (const std::exception &) {
    throw ParseError(l.number, std::string("bad ") + what);
  }
}

template <class T, class F>
std::vector<T> parse_values(const Line &l, std::size_t from, std::size_t expect, F parse, const char *what) {
  if (l.tokens.size() - from != expect)
    throw ParseError(l.number, std::string(what) + ": expected " + std::to_string(expect) + " entries, got " +
                                   std::to_string(l.tokens.size() - from));
  std::vector<T> out;
  for (std::size_t i = from; i < l.tokens.size(); ++i) {
    try {
      out.push_back(parse(l.tokens[i]));
    } catch (const Error &e) {
      throw ParseError(l.number, std::string(what) + ": " + e.what());
    }
  }
  return out;
}

inline IntMatrix parse_int_block(const std::vector<Line> &lines, std::size_t &pos, std::size_t rows,
                                 std::size_t cols, const char *what) {
  IntMatrix m(rows, cols);
  if (cols == 0) return m; // zero-width rows are not written out
  for (std::size_t i = 0; i < rows; ++i) {
    if (pos >= lines.size())
      throw ParseError(lines.empty() ? 0 : lines.back().number, std::string(what) + ": missing rows");
    auto row = parse_values<BigInt>(lines[pos], 0, cols, parse_integer, what);
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
    ++pos;
  }
  return m;
}

inline const Line &expect_tag(const std::vector<Line> &lines, std::size_t pos, const std::string &tag) {
  if (pos >= lines.size())
    throw ParseError(lines.empty() ? 0 : lines.back().number + 1, "missing '" + tag + "' line");
  if (lines[pos].tokens[0] != tag)
    throw ParseError(lines[pos].number, "expected '" + tag + "', found '" + lines[pos].tokens[0] + "'");
  return lines[pos];
}

} // namespace detail

inline ProblemFile parse_problem(std::istream &in) {
  auto lines = detail::tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty problem file");
  const auto &head = lines[0];
  ProblemFile pf;
  const std::string &form = head.tokens[0];
  if (form == "canonical") pf.form = SourceForm::canonical;
  else if (form == "standard") pf.form = SourceForm::standard;
  else if (form == "parametric") pf.form = SourceForm::parametric;
  else throw ParseError(head.number, "unknown form '" + form + "'");
  const std::size_t want = pf.form == SourceForm::parametric ? 4 : 3;
  if (head.tokens.size() != want)
    throw ParseError(head.number, "header must be '" + form + (want == 4 ? " d m p'" : " d m'"));
  pf.d = detail::parse_count(head, 1, "d");
  pf.m = detail::parse_count(head, 2, "m");
  if (want == 4) pf.p = detail::parse_count(head, 3, "p");

  std::size_t pos = 1;
  const bool standard = pf.form == SourceForm::standard;
  const std::size_t rows = standard ? pf.m : pf.d + pf.m;
  const std::size_t cols = standard ? pf.d + pf.m : pf.d;
  if (cols == 0) throw ParseError(head.number, "A has no columns");
  pf.a = detail::parse_int_block(lines, pos, rows, cols, "A");
  const auto &bl = detail::expect_tag(lines, pos++, "b:");
  pf.b = detail::parse_values<Rational>(bl, 1, rows, parse_rational, "b");
  if (standard)
    for (const auto &v : pf.b)
      if (!is_integer(v)) throw ParseError(bl.number, "b: standard form needs integers");

  if (pf.form == SourceForm::parametric) {
    detail::expect_tag(lines, pos, "B:");
    if (lines[pos].tokens.size() != 1) throw ParseError(lines[pos].number, "'B:' must be on its own line");
    ++pos;
    pf.bparam = detail::parse_int_block(lines, pos, rows, pf.p, "B");
    const auto &yl = detail::expect_tag(lines, pos++, "y0:");
    pf.y0 = detail::parse_values<Rational>(yl, 1, pf.p, parse_rational, "y0");
  }
  if (pos != lines.size()) throw ParseError(lines[pos].number, "unexpected trailing content");
  return pf;
}

inline ProblemFile parse_problem_text(const std::string &text) {
  std::istringstream in(text);
  return parse_problem(in);
}

inline ProblemFile parse_problem_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return parse_problem(in);
}

/// Serializes a problem in the same grammar parse_problem reads.
inline std::string format_problem(const ProblemFile &pf) {
  std::ostringstream out;
  out << pf.form_name() << ' ' << pf.d << ' ' << pf.m;
  if (pf.form == SourceForm::parametric) out << ' ' << pf.p;
  out << '\n';
  auto write_rows = [&](const IntMatrix &m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j).get_str();
      out << '\n';
    }
  };
  write_rows(pf.a);
  out << "b:";
  for (const auto &v : pf.b) out << ' ' << to_string(v);
  out << '\n';
  if (pf.bparam) {
    out << "B:\n";
    write_rows(*pf.bparam);
    out << "y0:";
    for (const auto &v : *pf.y0) out << ' ' << to_string(v);
    out << '\n';
  }
  return out.str();
}

} // namespace latcount
