#pragma once

// Text format for custom channels and encodings.
//
//   channel-file  := { comment | blank } "dim" N { kraus-block }
//   kraus-block   := "kraus" INDEX  row{N}
//   row           := complex{N}                 (whitespace separated)
//   complex       := REAL | REAL "j" | REAL ("+"|"-") UREAL "j" | ["+"|"-"] "j"
//   comment       := "#" ... end of line
//
// REAL is anything std::strtod accepts in full (1, -0.5, 2e-3, ...). Kraus
// indices must run 0, 1, 2, ... in order. Examples of complex tokens:
// `1`, `-0.25`, `0.5+0.5j`, `1e-3-2j`, `3j`, `-j`.
//
// An encoding file holds exactly two non-comment rows of complex
// coefficients (c_n for |psi_0>, then d_n for |psi_1>). Rows shorter than the
// channel dimension are zero-padded.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"

namespace subchan {

namespace detail {

inline bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

inline Complex parse_complex(const std::string& token) {
  if (token.empty()) throw ParseError("empty complex token");
  if (token.back() != 'j') {
    double re = 0.0;
    if (!detail::parse_real(token, re)) throw ParseError("bad complex token '" + token + "'");
    return {re, 0.0};
  }
  const std::string body = token.substr(0, token.size() - 1);
  // Split at the last sign that is not the leading one and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    double v = 0.0;
    if (!detail::parse_real(s, v)) throw ParseError("bad complex token '" + token + "'");
    return v;
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  double re = 0.0;
  if (!detail::parse_real(body.substr(0, split), re)) throw ParseError("bad complex token '" + token + "'");
  return {re, imag_of(body.substr(split))};
}

inline std::string format_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

inline std::vector<Complex> parse_complex_row(const std::string& line) {
  std::istringstream in(line);
  std::vector<Complex> row;
  std::string tok;
  while (in >> tok) row.push_back(parse_complex(tok));
  return row;
}

inline KrausChannel read_channel(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::string>> lines;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string s = detail::strip_comment(raw);
    if (!detail::blank(s)) lines.emplace_back(line_no, std::move(s));
  }
  auto fail = [](std::size_t at, const std::string& msg) -> ParseError {
    return ParseError("channel file line " + std::to_string(at) + ": " + msg);
  };
  if (lines.empty()) throw ParseError("channel file is empty");

  std::size_t pos = 0;
  std::size_t dim = 0;
  {
    std::istringstream h(lines[pos].second);
    std::string kw;
    long long n = 0;
    std::string extra;
    if (!(h >> kw >> n) || kw != "dim" || n <= 0 || (h >> extra))
      throw fail(lines[pos].first, "expected 'dim N' with N > 0");
    dim = static_cast<std::size_t>(n);
    ++pos;
  }
  const auto nd = static_cast<Eigen::Index>(dim);
  std::vector<FockOperator> ops;
  while (pos < lines.size()) {
    std::istringstream h(lines[pos].second);
    std::string kw;
    long long idx = -1;
    std::string extra;
    if (!(h >> kw >> idx) || kw != "kraus" || (h >> extra))
      throw fail(lines[pos].first, "expected 'kraus i'");
    if (idx != static_cast<long long>(ops.size()))
      throw fail(lines[pos].first, "kraus index " + std::to_string(idx) + " out of order, expected " +
                                       std::to_string(ops.size()));
    ++pos;
    FockOperator e(nd, nd);
    for (std::size_t r = 0; r < dim; ++r, ++pos) {
      if (pos >= lines.size()) throw ParseError("channel file: truncated kraus " + std::to_string(idx));
      std::vector<Complex> row;
      try {
        row = parse_complex_row(lines[pos].second);
      } catch (const ParseError& err) {
        throw fail(lines[pos].first, err.what());
      }
      if (row.size() != dim)
        throw fail(lines[pos].first, "expected " + std::to_string(dim) + " entries, got " +
                                         std::to_string(row.size()));
      for (std::size_t c = 0; c < dim; ++c)
        e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    ops.push_back(std::move(e));
  }
  if (ops.empty()) throw ParseError("channel file declares no Kraus operators");
  return KrausChannel(std::move(ops));
}

inline KrausChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open channel file '" + path + "'");
  return read_channel(in);
}

inline void write_channel(std::ostream& out, const KrausChannel& ch) {
  out << "dim " << ch.dim() << '\n';
  const auto n = static_cast<Eigen::Index>(ch.dim());
  for (std::size_t i = 0; i < ch.kraus_ops().size(); ++i) {
    out << "kraus " << i << '\n';
    const auto& e = ch.kraus_ops()[i];
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) out << (c ? " " : "") << format_complex(e(r, c));
      out << '\n';
    }
  }
}

struct EncodingCoefficients {
  std::vector<Complex> c;  // |psi_0>
  std::vector<Complex> d;  // |psi_1>
};

inline EncodingCoefficients read_encoding(std::istream& in) {
  std::string raw;
  std::vector<std::vector<Complex>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string s = detail::strip_comment(raw);
    if (detail::blank(s)) continue;
    try {
      rows.push_back(parse_complex_row(s));
    } catch (const ParseError& err) {
      throw ParseError("encoding file line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  if (rows.size() != 2)
    throw ParseError("encoding file must have exactly two coefficient rows, found " + std::to_string(rows.size()));
  return {std::move(rows[0]), std::move(rows[1])};
}

inline EncodingCoefficients load_encoding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open encoding file '" + path + "'");
  return read_encoding(in);
}

}  // namespace subchan
