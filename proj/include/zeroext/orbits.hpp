#pragma once

// Edge orbits (parallel classes generated by opposite edges of 4-cycles),
// admissible orientations, orbit-invariant edge weights, quotient graphs,
// and the frame test. Orientation convention: an arc runs tail -> head and
// the induced order puts the tail below the head, so sources are minima.

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "zeroext/graph.hpp"

namespace zeroext {

// Canonical 4-cycles a-b-c-d (a the smallest vertex, b < d), each listed once.
inline std::vector<std::array<int, 4>> list_four_cycles(const Graph& g) {
  std::vector<std::array<int, 4>> out;
  for (int a = 0; a < g.n; ++a)
    for (auto [b, e1] : g.adj[a]) {
      if (b <= a) continue;
      for (auto [d, e2] : g.adj[a]) {
        if (d <= b) continue;
        for (auto [c, e3] : g.adj[b]) {
          if (c <= a || c == d) continue;
          if (g.has_edge(c, d)) out.push_back({a, b, c, d});
        }
      }
    }
  return out;
}

struct OrbitPartition {
  int count = 0;
  std::vector<int> orbit_of;               // edge id -> orbit id
  std::vector<std::vector<int>> members;   // orbit id -> ascending edge ids
};

namespace detail {

struct UnionFind {
  std::vector<int> par;
  explicit UnionFind(int n) : par(n) { std::iota(par.begin(), par.end(), 0); }
  int find(int x) {
    while (par[x] != x) x = par[x] = par[par[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    par[b] = a;  // keep the smaller root for deterministic representatives
    return true;
  }
};

}  // namespace detail

// Orbits: transitive closure of "opposite edges in a common 4-cycle".
// Orbit ids are assigned by ascending smallest member edge id.
inline OrbitPartition compute_orbits(const Graph& g) {
  require_connected(g);
  int m = g.edge_count();
  detail::UnionFind uf(m);
  for (const auto& [a, b, c, d] : list_four_cycles(g)) {
    uf.unite(g.edge_id(a, b), g.edge_id(c, d));
    uf.unite(g.edge_id(b, c), g.edge_id(d, a));
  }
  OrbitPartition op;
  op.orbit_of.assign(m, -1);
  std::vector<int> root_to_orbit(m, -1);
  for (int e = 0; e < m; ++e) {
    int r = uf.find(e);
    if (root_to_orbit[r] < 0) {
      root_to_orbit[r] = op.count++;
      op.members.emplace_back();
    }
    op.orbit_of[e] = root_to_orbit[r];
    op.members[op.orbit_of[e]].push_back(e);
  }
  return op;
}

// Per-edge positive weights constant on each orbit.
struct OrbitInvariantWeights {
  std::vector<Rat> per_edge;

  // Value on orbit Q (first member edge, all members agree by construction).
  Rat orbit_value(const OrbitPartition& op, int orbit) const {
    return per_edge[op.members[orbit].front()];
  }
};

inline bool weights_are_orbit_invariant(const Graph& g, const OrbitPartition& op,
                                        const std::vector<Rat>& per_edge) {
  if (static_cast<int>(per_edge.size()) != g.edge_count()) return false;
  for (const Rat& w : per_edge)
    if (w <= 0) return false;
  for (const auto& mem : op.members)
    for (int e : mem)
      if (per_edge[e] != per_edge[mem.front()]) return false;
  return true;
}

inline OrbitInvariantWeights make_orbit_weights(const Graph& g, const OrbitPartition& op,
                                                const std::vector<Rat>& per_edge) {
  if (!weights_are_orbit_invariant(g, op, per_edge))
    throw std::invalid_argument("weights not positive orbit-invariant");
  return OrbitInvariantWeights{per_edge};
}

inline OrbitInvariantWeights unit_weights(const Graph& g) {
  return OrbitInvariantWeights{std::vector<Rat>(g.edge_count(), Rat(1))};
}

// One direction per edge; arc[e] = (tail, head).
struct Orientation {
  std::vector<std::pair<int, int>> arc;
};

// The alignment constraint of a 4-cycle a-b-c-d: edge {a,b} and its opposite
// {d,c} must point the same way under the side translation a<->d, b<->c, and
// likewise {b,c} with {a,d}.
inline bool is_admissible(const Graph& g, const Orientation& o) {
  if (static_cast<int>(o.arc.size()) != g.edge_count())
    throw std::invalid_argument("orientation size mismatch");
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [t, h] = o.arc[e];
    if (g.edge_id(t, h) != e) throw std::invalid_argument("orientation arc not an edge");
  }
  auto arc_is = [&](int u, int v) {  // true when edge {u,v} is oriented u->v
    return o.arc[g.edge_id(u, v)] == std::make_pair(u, v);
  };
  for (const auto& [a, b, c, d] : list_four_cycles(g)) {
    if (arc_is(a, b) != arc_is(d, c)) return false;
    if (arc_is(b, c) != arc_is(a, d)) return false;
  }
  return true;
}

struct OrientResult {
  bool ok = false;
  Orientation orientation;                        // valid when ok
  std::vector<std::array<int, 4>> conflict_chain; // 4-cycles forcing an edge
  int conflict_edge = -1;                         // against itself, when !ok
};

// Searches for an admissible orientation by propagating the 4-cycle alignment
// constraints over arcs (two arc nodes per edge). The constraint components
// are exactly the orbits; per orbit the arc of the lowest edge id with the
// lower vertex as tail is fixed and everything else follows. A conflict means
// some chain of 4-cycles forces an edge against itself; the chain is returned.
inline OrientResult find_admissible_orientation(const Graph& g) {
  require_connected(g);
  OrientResult res;
  if (!bipartition(g)) return res;  // not orientable by fiat: see classify
  int m = g.edge_count();
  auto cycles = list_four_cycles(g);

  // arc node 2e = canonical direction (u->v, u<v), 2e+1 = reversed
  auto arc_node = [&](int u, int v) {
    int e = g.edge_id(u, v);
    return 2 * e + (g.edges[e].first == u ? 0 : 1);
  };
  std::vector<std::vector<std::pair<int, int>>> link(2 * m);  // (arc, cycle idx)
  detail::UnionFind uf(2 * m);
  auto tie = [&](int x, int y, int cyc) {
    link[x].emplace_back(y, cyc);
    link[y].emplace_back(x, cyc);
    uf.unite(x, y);
  };
  for (size_t i = 0; i < cycles.size(); ++i) {
    auto [a, b, c, d] = cycles[i];
    int ci = static_cast<int>(i);
    tie(arc_node(a, b), arc_node(d, c), ci);
    tie(arc_node(b, a), arc_node(c, d), ci);
    tie(arc_node(b, c), arc_node(a, d), ci);
    tie(arc_node(c, b), arc_node(d, a), ci);
  }

  for (int e = 0; e < m; ++e) {
    if (uf.find(2 * e) != uf.find(2 * e + 1)) continue;
    // Conflict: recover the forcing chain by BFS over constraint links.
    res.conflict_edge = e;
    std::vector<int> prev(2 * m, -1), via(2 * m, -1);
    std::queue<int> q;
    q.push(2 * e);
    prev[2 * e] = 2 * e;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      if (x == 2 * e + 1) break;
      for (auto [y, cyc] : link[x])
        if (prev[y] < 0) {
          prev[y] = x;
          via[y] = cyc;
          q.push(y);
        }
    }
    for (int x = 2 * e + 1; x != 2 * e; x = prev[x])
      res.conflict_chain.push_back(cycles[via[x]]);
    std::reverse(res.conflict_chain.begin(), res.conflict_chain.end());
    return res;
  }

  // Conflict-free: orient each constraint component off its orbit's
  // representative arc.
  res.ok = true;
  res.orientation.arc.assign(m, {-1, -1});
  for (int e = 0; e < m; ++e) {
    if (res.orientation.arc[e].first >= 0) continue;
    int rep = uf.find(2 * e);  // component of the canonical arc of the lowest
                               // unoriented edge id; its root is minimal, so
                               // this is the canonical representative choice
    for (int x = 0; x < 2 * m; ++x) {
      if (uf.find(x) != rep) continue;
      int edge = x / 2;
      auto [u, v] = g.edges[edge];
      if (x % 2) std::swap(u, v);
      if (res.orientation.arc[edge].first >= 0)
        throw std::logic_error("orientation component hit an edge twice");
      res.orientation.arc[edge] = {u, v};
    }
  }
  if (!is_admissible(g, res.orientation))
    throw std::logic_error("constructed orientation failed admissibility");
  return res;
}

// Directed acyclicity of an orientation (Kahn).
inline bool orientation_is_acyclic(const Graph& g, const Orientation& o) {
  std::vector<int> indeg(g.n, 0);
  for (auto [t, h] : o.arc) ++indeg[h];
  std::queue<int> q;
  for (int v = 0; v < g.n; ++v)
    if (indeg[v] == 0) q.push(v);
  int seen = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    ++seen;
    for (auto [v, e] : g.adj[u])
      if (o.arc[e] == std::make_pair(u, v) && --indeg[v] == 0) q.push(v);
  }
  return seen == g.n;
}

struct QuotientResult {
  Graph graph;            // unit weights; reweight per use
  std::vector<int> vmap;  // original vertex -> quotient vertex
};

// Contracts every edge outside U and simplifies parallel images. U must be a
// union of orbits. Quotient vertex ids follow ascending smallest original
// member.
inline QuotientResult quotient_graph(const Graph& g, const OrbitPartition& op,
                                     const std::vector<int>& U) {
  std::vector<char> keep(g.edge_count(), 0);
  for (int e : U) {
    if (e < 0 || e >= g.edge_count()) throw std::invalid_argument("edge id out of range");
    keep[e] = 1;
  }
  for (const auto& mem : op.members) {
    int k = keep[mem.front()];
    for (int e : mem)
      if (keep[e] != k) throw std::invalid_argument("U not orbit-closed");
  }
  detail::UnionFind uf(g.n);
  for (int e = 0; e < g.edge_count(); ++e)
    if (!keep[e]) uf.unite(g.edges[e].first, g.edges[e].second);
  std::vector<int> vmap(g.n, -1);
  int k = 0;
  for (int v = 0; v < g.n; ++v)
    if (uf.find(v) == v) vmap[v] = k++;
  for (int v = 0; v < g.n; ++v) vmap[v] = vmap[uf.find(v)];
  std::set<std::pair<int, int>> qedges;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!keep[e]) continue;
    int a = vmap[g.edges[e].first], b = vmap[g.edges[e].second];
    if (a == b) throw std::invalid_argument("quotient produced a loop");
    if (a > b) std::swap(a, b);
    qedges.insert({a, b});
  }
  QuotientResult qr;
  qr.graph = Graph(k, std::vector<std::pair<int, int>>(qedges.begin(), qedges.end()));
  qr.vmap = std::move(vmap);
  return qr;
}

struct DecompositionCheck {
  bool ok = true;
  int p = -1, q = -1;  // first failing pair otherwise
};

// d_{g,h}(p,q) must equal the sum over orbits Q of h_Q * d_{g/Q,1}(p/Q, q/Q).
inline DecompositionCheck verify_orbit_decomposition(const Graph& g,
                                                     const OrbitInvariantWeights& h) {
  auto op = compute_orbits(g);
  if (!weights_are_orbit_invariant(g, op, h.per_edge))
    throw std::invalid_argument("weights not positive orbit-invariant");
  DistanceMatrix dh;
  {
    Graph gw(g.n, g.edges, h.per_edge);
    dh = shortest_path_metric(gw);
  }
  std::vector<QuotientResult> quots;
  std::vector<DistanceMatrix> qdist;
  for (int Q = 0; Q < op.count; ++Q) {
    quots.push_back(quotient_graph(g, op, op.members[Q]));
    qdist.push_back(unit_metric(quots.back().graph));
  }
  for (int p = 0; p < g.n; ++p)
    for (int q = p + 1; q < g.n; ++q) {
      Rat sum = 0;
      for (int Q = 0; Q < op.count; ++Q)
        sum += h.orbit_value(op, Q) * qdist[Q].at(quots[Q].vmap[p], quots[Q].vmap[q]);
      if (sum != dh.at(p, q)) return {false, p, q};
    }
  return {};
}

enum class FrameObstruction { None, NotBipartite, LongIsometricCycle, NotOrientable };

struct FrameCheck {
  bool frame = false;
  FrameObstruction obstruction = FrameObstruction::None;
  std::optional<std::vector<int>> cycle;  // for LongIsometricCycle
};

// Frame: bipartite, no isometric cycle longer than 4, admissibly orientable.
inline FrameCheck frame_check(const Graph& g) {
  require_connected(g);
  FrameCheck fc;
  if (!bipartition(g)) {
    fc.obstruction = FrameObstruction::NotBipartite;
    return fc;
  }
  if (auto cyc = find_isometric_cycle_gt4(g)) {
    fc.obstruction = FrameObstruction::LongIsometricCycle;
    fc.cycle = cyc;
    return fc;
  }
  if (!find_admissible_orientation(g).ok) {
    fc.obstruction = FrameObstruction::NotOrientable;
    return fc;
  }
  fc.frame = true;
  return fc;
}

inline bool is_frame(const Graph& g) { return frame_check(g).frame; }

}  // namespace zeroext
