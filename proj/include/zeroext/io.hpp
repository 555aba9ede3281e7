// Text formats, JSON reports, and DOT export.
//
// Line-oriented file formats, all UTF-8 with '#' comments:
//
//   graph <n>                   vertex count, then
//   edge <u> <v> [<num>[/<den>]]  one line per edge, weight defaults to 1
//
//   instance <k>                extra count, then
//   cost <a> <b> <num>[/<den>]  vertices 0..n-1 are terminals, n..n+k-1 extras
//
//   metric <k>                  point count, then
//   dist <i> <j> <num>[/<den>]  every unordered pair once, diagonal implicit
//
// Parse errors carry 1-based line numbers. Numbers are exact rationals
// everywhere, including in JSON output where they appear as "num/den"
// strings (or plain "num" when the denominator is 1).

#pragma once

#include <json.hpp>

#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/complex.hpp"
#include "zeroext/graph.hpp"
#include "zeroext/lp.hpp"
#include "zeroext/rational.hpp"
#include "zeroext/semilattice.hpp"
#include "zeroext/solver.hpp"

namespace zeroext {

// ---------------------------------------------------------------------------
// Line scanning

namespace detail {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<Line> significant_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] inline void fail_at(int line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

inline long parse_int(const Line& l, const std::string& tok) {
  try {
    size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) fail_at(l.number, "malformed line");
    return v;
  } catch (const std::invalid_argument&) {
    fail_at(l.number, "malformed line");
  } catch (const std::out_of_range&) {
    fail_at(l.number, "malformed line");
  }
}

inline Rat parse_rat_at(const Line& l, const std::string& tok) {
  try {
    return parse_rat(tok);
  } catch (const std::invalid_argument&) {
    fail_at(l.number, "bad rational");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graphs

inline Graph parse_graph(std::istream& in) {
  auto lines = detail::significant_lines(in);
  if (lines.empty()) throw std::runtime_error("line 1: expected graph header");
  const auto& head = lines.front();
  if (head.tokens[0] != "graph" || head.tokens.size() != 2)
    detail::fail_at(head.number, "expected graph header");
  long n = detail::parse_int(head, head.tokens[1]);
  if (n < 1) detail::fail_at(head.number, "graph needs at least one vertex");

  std::vector<std::pair<int, int>> edges;
  std::vector<Rat> weights;
  std::set<std::pair<int, int>> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] != "edge") detail::fail_at(l.number, "unknown directive");
    if (l.tokens.size() != 3 && l.tokens.size() != 4)
      detail::fail_at(l.number, "malformed line");
    long u = detail::parse_int(l, l.tokens[1]);
    long v = detail::parse_int(l, l.tokens[2]);
    if (u < 0 || u >= n || v < 0 || v >= n)
      detail::fail_at(l.number, "vertex out of range");
    if (u == v) detail::fail_at(l.number, "loop");
    Rat w(1);
    if (l.tokens.size() == 4) w = detail::parse_rat_at(l, l.tokens[3]);
    if (w <= 0) detail::fail_at(l.number, "nonpositive weight");
    std::pair<int, int> key(static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v)));
    if (!seen.insert(key).second) detail::fail_at(l.number, "duplicate edge");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    weights.push_back(std::move(w));
  }
  return Graph(static_cast<int>(n), edges, weights);
}

inline std::string dump_graph(const Graph& g) {
  std::ostringstream out;
  out << "graph " << g.n << "\n";
  for (size_t e = 0; e < g.edges.size(); ++e) {
    out << "edge " << g.edges[e].first << " " << g.edges[e].second;
    if (g.weight[e] != 1) out << " " << rat_str(g.weight[e]);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Instances

// File payload of a location instance; pair keys are stored with a < b.
struct InstanceData {
  int extra_count = 0;
  std::map<std::pair<int, int>, Rat> costs;
};

inline InstanceData parse_instance(std::istream& in, int terminals) {
  auto lines = detail::significant_lines(in);
  if (lines.empty()) throw std::runtime_error("line 1: expected instance header");
  const auto& head = lines.front();
  if (head.tokens[0] != "instance" || head.tokens.size() != 2)
    detail::fail_at(head.number, "expected instance header");
  long k = detail::parse_int(head, head.tokens[1]);
  if (k < 0) detail::fail_at(head.number, "negative extra count");

  InstanceData data;
  data.extra_count = static_cast<int>(k);
  long total = terminals + k;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] != "cost") detail::fail_at(l.number, "unknown directive");
    if (l.tokens.size() != 4) detail::fail_at(l.number, "malformed line");
    long a = detail::parse_int(l, l.tokens[1]);
    long b = detail::parse_int(l, l.tokens[2]);
    if (a < 0 || a >= total || b < 0 || b >= total)
      detail::fail_at(l.number, "vertex out of range");
    if (a == b) detail::fail_at(l.number, "cost on a single vertex");
    Rat c = detail::parse_rat_at(l, l.tokens[3]);
    if (c < 0) detail::fail_at(l.number, "negative cost");
    if (a > b) std::swap(a, b);
    auto key = std::make_pair(static_cast<int>(a), static_cast<int>(b));
    if (data.costs.count(key)) detail::fail_at(l.number, "duplicate cost");
    data.costs[key] = std::move(c);
  }
  return data;
}

inline std::string dump_instance(const InstanceData& data) {
  std::ostringstream out;
  out << "instance " << data.extra_count << "\n";
  for (const auto& [key, c] : data.costs)
    out << "cost " << key.first << " " << key.second << " " << rat_str(c) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Metrics

inline DistanceMatrix parse_metric(std::istream& in) {
  auto lines = detail::significant_lines(in);
  if (lines.empty()) throw std::runtime_error("line 1: expected metric header");
  const auto& head = lines.front();
  if (head.tokens[0] != "metric" || head.tokens.size() != 2)
    detail::fail_at(head.number, "expected metric header");
  long n = detail::parse_int(head, head.tokens[1]);
  if (n < 1) detail::fail_at(head.number, "metric needs at least one point");

  DistanceMatrix dm;
  dm.n = static_cast<int>(n);
  dm.d.assign(static_cast<size_t>(n) * n, Rat(0));
  std::set<std::pair<int, int>> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] != "dist") detail::fail_at(l.number, "unknown directive");
    if (l.tokens.size() != 4) detail::fail_at(l.number, "malformed line");
    long a = detail::parse_int(l, l.tokens[1]);
    long b = detail::parse_int(l, l.tokens[2]);
    if (a < 0 || a >= n || b < 0 || b >= n)
      detail::fail_at(l.number, "vertex out of range");
    if (a == b) detail::fail_at(l.number, "loop");
    Rat v = detail::parse_rat_at(l, l.tokens[3]);
    std::pair<int, int> key(static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b)));
    if (!seen.insert(key).second) detail::fail_at(l.number, "duplicate distance");
    dm.at(key.first, key.second) = v;
    dm.at(key.second, key.first) = std::move(v);
  }
  for (int a = 0; a < dm.n; ++a)
    for (int b = a + 1; b < dm.n; ++b)
      if (!seen.count({a, b}))
        throw std::runtime_error("missing distance " + std::to_string(a) + " " +
                                 std::to_string(b));
  return dm;
}

inline std::string dump_metric(const DistanceMatrix& dm) {
  std::ostringstream out;
  out << "metric " << dm.n << "\n";
  for (int a = 0; a < dm.n; ++a)
    for (int b = a + 1; b < dm.n; ++b)
      out << "dist " << a << " " << b << " " << rat_str(dm.at(a, b)) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Semilattice dump (debugging aid)

inline std::string dump_semilattice(const Semilattice& S) {
  std::ostringstream out;
  out << "semilattice " << S.k << "\n";
  out << "bottom " << S.bottom << "\n";
  for (int i = 0; i < S.k; ++i) out << "element " << i << " " << rat_str(S.val[i]) << "\n";
  for (const auto& [low, high] : S.covers_) out << "cover " << low << " " << high << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// DOT export

inline std::string graph_to_dot(const Graph& g, const Orientation* o = nullptr,
                                const std::vector<std::string>* labels = nullptr) {
  std::ostringstream out;
  out << (o ? "digraph" : "graph") << " zeroext {\n";
  if (labels) {
    if (static_cast<int>(labels->size()) != g.n)
      throw std::invalid_argument("label count mismatch");
    for (int v = 0; v < g.n; ++v) out << "  " << v << " [label=\"" << (*labels)[v] << "\"];\n";
  }
  for (size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = o ? o->arc[e] : g.edges[e];
    out << "  " << u << (o ? " -> " : " -- ") << v;
    if (g.weight[e] != 1) out << " [label=\"" << rat_str(g.weight[e]) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Subdivision text

// Vertex q/p stands for the pair p below q; the diagonal vertex of an
// original vertex p prints as p/p.
inline std::string subdivision_name(const BooleanPair& pq) {
  return std::to_string(pq.high) + "/" + std::to_string(pq.low);
}

inline std::string dump_subdivision(const Subdivision& sub) {
  std::ostringstream out;
  out << dump_graph(sub.complex.graph);
  for (size_t i = 0; i < sub.names.size(); ++i)
    out << "name " << i << " " << subdivision_name(sub.names[i]) << "\n";
  return out.str();
}

inline std::string subdivision_to_dot(const Subdivision& sub) {
  std::vector<std::string> labels;
  for (const auto& pq : sub.names) labels.push_back(subdivision_name(pq));
  return graph_to_dot(sub.complex.graph, &sub.complex.orientation, &labels);
}

// ---------------------------------------------------------------------------
// JSON reports

inline std::string classification_string(const ClassifyResult& r) {
  if (r.tractable) return "tractable";
  if (!r.modular) return "np-hard: not modular";
  return "np-hard: not orientable";
}

inline nlohmann::json classify_json(const ClassifyResult& r) {
  nlohmann::json j;
  j["classification"] = classification_string(r);
  if (r.tractable) {
    auto arcs = nlohmann::json::array();
    for (auto [t, h] : r.orientation.arc) arcs.push_back({t, h});
    j["orientation"] = std::move(arcs);
  } else if (!r.modular) {
    j["median_witness"] = r.median_witness;
  } else {
    j["conflict_edge"] = r.conflict_edge;
    auto chain = nlohmann::json::array();
    for (const auto& cyc : r.conflict_chain) chain.push_back(cyc);
    j["conflict_chain"] = std::move(chain);
  }
  return j;
}

inline nlohmann::json report_json(const SolveReport& rep, const std::string& classification) {
  nlohmann::json j;
  j["value"] = rat_str(rep.value);
  j["location"] = rep.location.placement;
  j["descent_steps"] = rep.descent_steps;
  j["scaling_phases"] = rep.scaling_phases;
  j["blp_calls"] = rep.blp_calls;
  j["classification"] = classification;
  j["terminal_constant"] = rat_str(rep.terminal_constant);
  return j;
}

// ---------------------------------------------------------------------------
// LP text dump

// lp_solve-style layout: objective, one line per row, nonnegativity tail.
inline std::string lp_text(const LinearProgram& lp, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != lp.num_vars)
    throw std::invalid_argument("name count mismatch");
  std::ostringstream out;
  auto terms = [&](const std::vector<Rat>& coef) {
    std::string s;
    for (int v = 0; v < lp.num_vars; ++v) {
      if (coef[v] == 0) continue;
      Rat c = coef[v];
      if (s.empty()) {
        if (c < 0) { s += "- "; c = -c; }
      } else {
        s += c < 0 ? " - " : " + ";
        if (c < 0) c = -c;
      }
      if (c != 1) s += rat_str(c) + " ";
      s += names[v];
    }
    return s.empty() ? std::string("0") : s;
  };
  out << "min: " << terms(lp.objective) << ";\n";
  for (size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    const char* op = row.type == RowType::EQ ? "=" : row.type == RowType::LE ? "<=" : ">=";
    out << "r" << r << ": " << terms(row.a) << " " << op << " " << rat_str(row.rhs) << ";\n";
  }
  for (const auto& name : names) out << name << " >= 0;\n";
  return out.str();
}

}  // namespace zeroext
