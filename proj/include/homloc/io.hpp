#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homloc/common.hpp"
#include "homloc/complex.hpp"
#include "homloc/metric.hpp"

// Plain-text complex files:
//
//   # comment
//   dim 2
//   s 0 1 2          simplex by vertex ids; faces are added automatically
//   len 0 1 1.5      edge length, positive and finite
//   chain 1 0 3 4    d-chain by simplex indices (see `homloc index`)
//
// Weight files hold `weight <d> <index> <value>` lines.
namespace homloc::io {

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct ParseOptions {
  // Edges without a `len` line get length 1.0; otherwise they are an error.
  bool default_lengths = true;
};

struct ComplexFile {
  SimplicialComplex complex;
  Metric metric;
  std::vector<Chain> chains;
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

template <typename T>
T parse_int(const Token& t, std::size_t line, const char* what) {
  T v{};
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError(line, t.column, std::string("expected ") + what + ", got '" + std::string(t.text) + "'");
  return v;
}

inline double parse_real(const Token& t, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError(line, t.column, "expected a number, got '" + std::string(t.text) + "'");
  return v;
}

struct Pending {
  std::size_t line, column;
};

}  // namespace detail

inline ComplexFile parse(std::istream& in, const ParseOptions& opts = {}) {
  using detail::parse_int;
  std::optional<int> declared;
  std::size_t dim_line = 0;
  std::vector<Simplex> simplices;
  struct Len {
    VertexId u, v;
    double value;
    detail::Pending at;
  };
  std::vector<Len> lens;
  struct RawChain {
    std::size_t dim;
    std::vector<std::pair<std::size_t, std::size_t>> idx;  // index, column
    detail::Pending at;
  };
  std::vector<RawChain> raw_chains;

  std::string buf;
  std::size_t lineno = 0;
  while (std::getline(in, buf)) {
    ++lineno;
    const auto toks = detail::tokenize(buf);
    if (toks.empty()) continue;
    const auto& head = toks[0];
    if (!declared && head.text != "dim") throw ParseError(lineno, head.column, "the first line must be 'dim <max_dim>'");
    if (head.text == "dim") {
      if (declared) throw ParseError(lineno, head.column, "duplicate 'dim' line");
      if (toks.size() != 2) throw ParseError(lineno, head.column, "'dim' takes exactly one value");
      const int d = parse_int<int>(toks[1], lineno, "a dimension");
      if (d < 0) throw ParseError(lineno, toks[1].column, "dimension must be nonnegative");
      declared = d;
      dim_line = lineno;
    } else if (head.text == "s") {
      if (toks.size() < 2) throw ParseError(lineno, head.column, "'s' needs at least one vertex");
      Simplex s;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto v = parse_int<VertexId>(toks[i], lineno, "a vertex id");
        if (v < 0) throw ParseError(lineno, toks[i].column, "vertex ids must be nonnegative");
        for (auto w : s.vertices)
          if (w == v) throw ParseError(lineno, toks[i].column, "repeated vertex " + std::to_string(v));
        s.vertices.push_back(v);
      }
      if (static_cast<int>(s.dim()) > *declared)
        throw ParseError(lineno, head.column,
                         "simplex of dimension " + std::to_string(s.dim()) + " exceeds dim " + std::to_string(*declared));
      simplices.push_back(std::move(s));
    } else if (head.text == "len") {
      if (toks.size() != 4) throw ParseError(lineno, head.column, "'len' takes two vertex ids and a length");
      Len l{parse_int<VertexId>(toks[1], lineno, "a vertex id"), parse_int<VertexId>(toks[2], lineno, "a vertex id"),
            detail::parse_real(toks[3], lineno), {lineno, head.column}};
      if (!(l.value > 0.0) || !std::isfinite(l.value))
        throw ParseError(lineno, toks[3].column, "edge length must be positive and finite");
      lens.push_back(l);
    } else if (head.text == "chain") {
      if (toks.size() < 2) throw ParseError(lineno, head.column, "'chain' needs a dimension");
      RawChain c{parse_int<std::size_t>(toks[1], lineno, "a dimension"), {}, {lineno, head.column}};
      for (std::size_t i = 2; i < toks.size(); ++i)
        c.idx.emplace_back(parse_int<std::size_t>(toks[i], lineno, "a simplex index"), toks[i].column);
      raw_chains.push_back(std::move(c));
    } else {
      throw ParseError(lineno, head.column, "unknown directive '" + std::string(head.text) + "'");
    }
  }
  if (!declared) throw ParseError(lineno + 1, 1, "empty file: missing 'dim' line");

  ComplexFile out;
  out.complex = SimplicialComplex::build(simplices);
  if (out.complex.max_dim() != *declared)
    throw ParseError(dim_line, 1,
                     "declared dim " + std::to_string(*declared) + " but the simplices reach " +
                         std::to_string(out.complex.max_dim()));

  std::vector<std::optional<double>> lengths(out.complex.count(1));
  for (const auto& l : lens) {
    auto e = out.complex.index_of_labels({l.u, l.v});
    if (l.u == l.v || !e)
      throw ParseError(l.at.line, l.at.column,
                       "'len " + std::to_string(l.u) + " " + std::to_string(l.v) + "' is not an edge of the complex");
    if (lengths[*e]) throw ParseError(l.at.line, l.at.column, "duplicate length for edge " + std::to_string(l.u) + "-" + std::to_string(l.v));
    lengths[*e] = l.value;
  }
  std::vector<double> values(lengths.size());
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    if (!lengths[e] && !opts.default_lengths) {
      const auto& s = out.complex.simplex(1, e);
      throw ParseError(lineno + 1, 1,
                       "edge " + std::to_string(out.complex.label(s[0])) + "-" + std::to_string(out.complex.label(s[1])) +
                           " has no length");
    }
    values[e] = lengths[e].value_or(1.0);
  }
  out.metric = Metric(std::move(values));

  for (const auto& c : raw_chains) {
    if (static_cast<int>(c.dim) > out.complex.max_dim())
      throw ParseError(c.at.line, c.at.column, "chain dimension " + std::to_string(c.dim) + " exceeds the complex");
    Chain z = zero_chain(out.complex, c.dim);
    for (auto [i, col] : c.idx) {
      if (i >= out.complex.count(c.dim))
        throw ParseError(c.at.line, col,
                         "simplex index " + std::to_string(i) + " out of range (n_" + std::to_string(c.dim) + "=" +
                             std::to_string(out.complex.count(c.dim)) + ")");
      z.support.flip(i);
    }
    out.chains.push_back(std::move(z));
  }
  return out;
}

inline ComplexFile parse_string(const std::string& text, const ParseOptions& opts = {}) {
  std::istringstream in(text);
  return parse(in, opts);
}

inline ComplexFile read_file(const std::string& path, const ParseOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse(in, opts);
}

inline std::string format_length(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Maximal simplices, every edge length, then the chains. Parsing the output
// rebuilds the same complex with the same indices and lengths.
inline void write(std::ostream& out, const SimplicialComplex& k, const Metric& m, const std::vector<Chain>& chains = {}) {
  m.check_against(k);
  out << "dim " << k.max_dim() << "\n";
  for (int d = 0; d <= k.max_dim(); ++d) {
    const auto& up = k.boundary_into(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < k.count(static_cast<std::size_t>(d)); ++i) {
      if (up.row(i).any()) continue;
      out << "s";
      for (auto v : k.simplex(static_cast<std::size_t>(d), i)) out << " " << k.label(v);
      out << "\n";
    }
  }
  for (std::size_t e = 0; e < k.count(1); ++e) {
    const auto& s = k.simplex(1, e);
    out << "len " << k.label(s[0]) << " " << k.label(s[1]) << " " << format_length(m.length(e)) << "\n";
  }
  for (const auto& c : chains) {
    check_chain(k, c);
    out << "chain " << c.dim;
    for (auto i : c.support.support()) out << " " << i;
    out << "\n";
  }
}

inline std::string to_string(const SimplicialComplex& k, const Metric& m, const std::vector<Chain>& chains = {}) {
  std::ostringstream out;
  write(out, k, m, chains);
  return out.str();
}

// `weight <d> <index> <value>`; simplices not listed weigh 1.
inline WeightFunction parse_weights(std::istream& in, const SimplicialComplex& k) {
  auto w = WeightFunction::uniform(k, 1.0);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  std::string buf;
  std::size_t lineno = 0;
  while (std::getline(in, buf)) {
    ++lineno;
    const auto toks = detail::tokenize(buf);
    if (toks.empty()) continue;
    if (toks[0].text != "weight") throw ParseError(lineno, toks[0].column, "expected 'weight <d> <index> <value>'");
    if (toks.size() != 4) throw ParseError(lineno, toks[0].column, "'weight' takes a dimension, an index and a value");
    const auto d = detail::parse_int<std::size_t>(toks[1], lineno, "a dimension");
    const auto i = detail::parse_int<std::size_t>(toks[2], lineno, "a simplex index");
    const double x = detail::parse_real(toks[3], lineno);
    if (static_cast<int>(d) > k.max_dim() || i >= k.count(d))
      throw ParseError(lineno, toks[2].column, "simplex (" + std::to_string(d) + ", " + std::to_string(i) + ") is not in the complex");
    if (!(x >= 0.0) || !std::isfinite(x)) throw ParseError(lineno, toks[3].column, "weight must be nonnegative and finite");
    if (!seen.emplace(std::pair{d, i}, lineno).second)
      throw ParseError(lineno, toks[0].column, "duplicate weight for simplex (" + std::to_string(d) + ", " + std::to_string(i) + ")");
    w.set(d, i, x);
  }
  return w;
}

inline WeightFunction read_weights(const std::string& path, const SimplicialComplex& k) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_weights(in, k);
}

}  // namespace homloc::io
