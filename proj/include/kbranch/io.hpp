#pragma once

// Text and JSON readers/writers for instances, function tables and opening costs.

#include <algorithm>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kbranch/digraph.hpp"
#include "kbranch/feasibility.hpp"
#include "kbranch/function_table.hpp"
#include "kbranch/rootloc.hpp"

namespace kbranch::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Digraph plus k and any number of root vectors (p = 0 is fine for commands
/// that ignore q).
struct Instance {
  Digraph digraph{1, {}};
  int k = 1;
  std::vector<RootVector> q;

  PackingInstance packing() const { return PackingInstance(digraph, k, q); }
  friend bool operator==(const Instance& a, const Instance& b) {
    if (a.k != b.k || a.q != b.q || a.digraph.num_vertices() != b.digraph.num_vertices() ||
        a.digraph.num_arcs() != b.digraph.num_arcs())
      return false;
    for (int i = 0; i < a.digraph.num_arcs(); ++i) {
      const Arc &x = a.digraph.arc(i), &y = b.digraph.arc(i);
      if (x.tail != y.tail || x.head != y.head || x.cost != y.cost) return false;
    }
    return true;
  }
};

namespace detail {

/// Integer tokens with line tracking. Blank lines and '#' comments are skipped.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  /// The next non-empty line split into tokens, or nullopt at EOF.
  std::optional<std::vector<std::string>> line() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_no_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    return std::nullopt;
  }

  std::vector<std::string> require_line(const std::string& what) {
    auto t = line();
    if (!t) throw ParseError(line_no_ + 1, "unexpected end of input, expected " + what);
    return *t;
  }

  long long integer(const std::string& token) const {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) throw ParseError(line_no_, "expected an integer, got '" + token + "'");
    return value;
  }

  std::vector<long long> integers(const std::string& what, std::size_t count) {
    auto tokens = require_line(what);
    if (tokens.size() != count)
      throw ParseError(line_no_, what + ": expected " + std::to_string(count) + " values, got " +
                                     std::to_string(tokens.size()));
    std::vector<long long> out;
    for (const auto& t : tokens) out.push_back(integer(t));
    return out;
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

inline Digraph build_digraph(int n, std::vector<Arc> arcs, int line) {
  try {
    return Digraph(n, std::move(arcs));
  } catch (const std::exception& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace detail

/// `n m k p`, then m lines `tail head cost`, then p lines of q_i (vertices 1-based).
inline Instance read_instance_text(std::istream& in) {
  detail::TokenReader r(in);
  const auto header = r.integers("header 'n m k p'", 4);
  const int header_line = r.line_no();
  const auto n = header[0], m = header[1], k = header[2], p = header[3];
  if (n < 1 || n > kMaxVertices) throw ParseError(header_line, "n must lie in [1, 64]");
  if (m < 0 || k < 1 || p < 0) throw ParseError(header_line, "need m >= 0, k >= 1, p >= 0");
  std::vector<Arc> arcs;
  for (long long i = 0; i < m; ++i) {
    const auto a = r.integers("arc 'tail head cost'", 3);
    if (a[0] < 1 || a[0] > n || a[1] < 1 || a[1] > n) throw ParseError(r.line_no(), "arc endpoint outside 1..n");
    if (a[0] == a[1]) throw ParseError(r.line_no(), "self-loop");
    arcs.push_back({static_cast<Vertex>(a[0] - 1), static_cast<Vertex>(a[1] - 1), a[2]});
  }
  Instance out;
  out.digraph = detail::build_digraph(static_cast<int>(n), std::move(arcs), header_line);
  out.k = static_cast<int>(k);
  for (long long i = 0; i < p; ++i) {
    const auto q = r.integers("root vector", static_cast<std::size_t>(n));
    std::vector<int> values(q.begin(), q.end());
    out.q.emplace_back(std::move(values));
  }
  if (r.line()) throw ParseError(r.line_no(), "trailing input");
  return out;
}

inline Instance read_instance_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // the parser reports a byte offset
    const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(e.byte, text.size()));
    const int line = 1 + static_cast<int>(std::count(text.begin(), end, '\n'));
    throw ParseError(line, std::string("invalid JSON: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    std::vector<Arc> arcs;
    for (const auto& a : j.at("arcs")) {
      const int tail = a.at("tail").get<int>(), head = a.at("head").get<int>();
      if (tail < 1 || tail > n || head < 1 || head > n) throw std::invalid_argument("arc endpoint outside 1..n");
      arcs.push_back({tail - 1, head - 1, a.at("cost").get<Cost>()});
    }
    Instance out;
    out.digraph = Digraph(n, std::move(arcs));
    out.k = j.at("k").get<int>();
    if (out.k < 1) throw std::invalid_argument("k must be positive");
    if (j.contains("q"))
      for (const auto& q : j.at("q")) {
        auto values = q.get<std::vector<int>>();
        if (static_cast<int>(values.size()) != n) throw std::invalid_argument("root vector has the wrong length");
        out.q.emplace_back(std::move(values));
      }
    return out;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("bad instance JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json arcs = nlohmann::json::array();
  for (const Arc& a : inst.digraph.arcs()) arcs.push_back({{"tail", a.tail + 1}, {"head", a.head + 1}, {"cost", a.cost}});
  nlohmann::json q = nlohmann::json::array();
  for (const RootVector& qi : inst.q) q.push_back(std::vector<int>(qi.values().begin(), qi.values().end()));
  return {{"n", inst.digraph.num_vertices()}, {"arcs", arcs}, {"k", inst.k}, {"q", q}};
}

inline std::string write_instance_text(const Instance& inst) {
  std::ostringstream out;
  out << inst.digraph.num_vertices() << ' ' << inst.digraph.num_arcs() << ' ' << inst.k << ' ' << inst.q.size() << '\n';
  for (const Arc& a : inst.digraph.arcs()) out << a.tail + 1 << ' ' << a.head + 1 << ' ' << a.cost << '\n';
  for (const RootVector& qi : inst.q) {
    for (int v = 0; v < qi.size(); ++v) out << (v ? " " : "") << qi[v];
    out << '\n';
  }
  return out.str();
}

/// One entry per line: `x_1 ... x_n value`. `inf` lines are skipped (the
/// table stores only finite entries).
inline DiscreteFunctionTable read_table(std::istream& in) {
  detail::TokenReader r(in);
  std::optional<DiscreteFunctionTable> table;
  while (auto tokens = r.line()) {
    if (tokens->size() < 2) throw ParseError(r.line_no(), "table line needs a point and a value");
    const int dim = static_cast<int>(tokens->size()) - 1;
    if (!table) table.emplace(dim);
    if (dim != table->dimension()) throw ParseError(r.line_no(), "inconsistent dimension");
    std::vector<int> x;
    for (int i = 0; i < dim; ++i) x.push_back(static_cast<int>(r.integer((*tokens)[static_cast<std::size_t>(i)])));
    if (tokens->back() == "inf") continue;
    if (table->at(x)) throw ParseError(r.line_no(), "duplicate point");
    table->set(std::move(x), r.integer(tokens->back()));
  }
  if (!table) throw ParseError(r.line_no(), "empty table");
  return *table;
}

inline std::string write_table(const DiscreteFunctionTable& table) {
  std::ostringstream out;
  for (const auto& [x, v] : table.entries()) {
    for (int c : x) out << c << ' ';
    out << v << '\n';
  }
  return out.str();
}

/// Separable opening costs: `v f(0) f(1) ... f(k)` per line, one line per vertex.
inline OpeningCost read_separable_opening(std::istream& in, int n) {
  detail::TokenReader r(in);
  OpeningCost::Separable f(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  while (auto tokens = r.line()) {
    if (tokens->size() < 2) throw ParseError(r.line_no(), "expected 'v f(0) ... f(k)'");
    const long long v = r.integer(tokens->front());
    if (v < 1 || v > n) throw ParseError(r.line_no(), "vertex outside 1..n");
    auto& slot = seen[static_cast<std::size_t>(v - 1)];
    if (slot) throw ParseError(r.line_no(), "vertex listed twice");
    slot = 1;
    for (std::size_t i = 1; i < tokens->size(); ++i)
      f[static_cast<std::size_t>(v - 1)].push_back(r.integer((*tokens)[i]));
  }
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)]) throw ParseError(r.line_no(), "no opening cost for vertex " + std::to_string(v + 1));
  return OpeningCost::separable(std::move(f));
}

}  // namespace kbranch::io
