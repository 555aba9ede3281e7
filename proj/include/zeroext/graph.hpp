#pragma once

// Undirected simple graphs with positive rational edge weights, their exact
// shortest-path metrics, and the metric predicates the rest of the library
// leans on: intervals, medians, modularity, convexity, gates, isometric
// cycles. Vertices are 0..n-1; edges carry stable ids in insertion order.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zeroext/rational.hpp"

namespace zeroext {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // endpoints stored with u < v
  std::vector<Rat> weight;                 // parallel to edges, all > 0
  std::vector<std::vector<std::pair<int, int>>> adj;  // vertex -> (neighbor, edge id)

  Graph() = default;

  Graph(int n_, const std::vector<std::pair<int, int>>& es,
        const std::vector<Rat>& ws = {})
      : n(n_) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    if (!ws.empty() && ws.size() != es.size())
      throw std::invalid_argument("edge/weight count mismatch");
    adj.resize(n);
    std::map<std::pair<int, int>, int> seen;
    for (size_t i = 0; i < es.size(); ++i) {
      auto [u, v] = es[i];
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("loop edge");
      if (u > v) std::swap(u, v);
      if (seen.count({u, v})) throw std::invalid_argument("parallel edge");
      Rat w = ws.empty() ? Rat(1) : ws[i];
      if (w <= 0) throw std::invalid_argument("nonpositive edge weight");
      int id = static_cast<int>(edges.size());
      seen[{u, v}] = id;
      edges.emplace_back(u, v);
      weight.push_back(w);
      adj[u].emplace_back(v, id);
      adj[v].emplace_back(u, id);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
  }

  int edge_count() const { return static_cast<int>(edges.size()); }

  // -1 when absent.
  int edge_id(int u, int v) const {
    if (u == v) return -1;
    for (auto [w, id] : adj[u])
      if (w == v) return id;
    return -1;
  }

  bool has_edge(int u, int v) const { return edge_id(u, v) >= 0; }
};

inline bool is_connected(const Graph& g) {
  if (g.n == 0) return true;
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto [v, id] : g.adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++cnt;
        stack.push_back(v);
      }
  }
  return cnt == g.n;
}

inline void require_connected(const Graph& g) {
  if (!is_connected(g)) throw std::invalid_argument("graph not connected");
}

// Returns the parity classes when g is bipartite (vertex -> 0/1), or nullopt.
inline std::optional<std::vector<int>> bipartition(const Graph& g) {
  std::vector<int> side(g.n, -1);
  for (int s = 0; s < g.n; ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [v, id] : g.adj[u]) {
        if (side[v] < 0) {
          side[v] = 1 - side[u];
          stack.push_back(v);
        } else if (side[v] == side[u]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

struct DistanceMatrix {
  int n = 0;
  std::vector<Rat> d;  // row-major n*n

  const Rat& at(int i, int j) const { return d[static_cast<size_t>(i) * n + j]; }
  Rat& at(int i, int j) { return d[static_cast<size_t>(i) * n + j]; }
};

// All-pairs shortest paths by Dijkstra from each source, with exact rational
// comparisons (linear-scan extraction; the graphs here are desk sized).
inline DistanceMatrix shortest_path_metric(const Graph& g) {
  require_connected(g);
  DistanceMatrix dm;
  dm.n = g.n;
  dm.d.assign(static_cast<size_t>(g.n) * g.n, Rat(0));
  for (int s = 0; s < g.n; ++s) {
    std::vector<char> done(g.n, 0);
    std::vector<char> reached(g.n, 0);
    std::vector<Rat> dist(g.n, Rat(0));
    reached[s] = 1;
    for (int round = 0; round < g.n; ++round) {
      int u = -1;
      for (int v = 0; v < g.n; ++v) {
        if (!reached[v] || done[v]) continue;
        if (u < 0 || dist[v] < dist[u]) u = v;
      }
      if (u < 0) break;
      done[u] = 1;
      for (auto [v, id] : g.adj[u]) {
        Rat cand = dist[u] + g.weight[id];
        if (!reached[v] || cand < dist[v]) {
          reached[v] = 1;
          dist[v] = cand;
        }
      }
    }
    for (int v = 0; v < g.n; ++v) dm.at(s, v) = dist[v];
  }
  return dm;
}

// Shortest-path metric of g with every weight replaced by 1 (BFS).
inline DistanceMatrix unit_metric(const Graph& g) {
  require_connected(g);
  DistanceMatrix dm;
  dm.n = g.n;
  dm.d.assign(static_cast<size_t>(g.n) * g.n, Rat(0));
  for (int s = 0; s < g.n; ++s) {
    std::vector<int> dist(g.n, -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, id] : g.adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    for (int v = 0; v < g.n; ++v) dm.at(s, v) = dist[v];
  }
  return dm;
}

// Metric interval I(p,q): vertices on some shortest p-q path, ascending ids.
inline std::vector<int> metric_interval(const DistanceMatrix& dm, int p, int q) {
  std::vector<int> out;
  for (int x = 0; x < dm.n; ++x)
    if (dm.at(p, x) + dm.at(x, q) == dm.at(p, q)) out.push_back(x);
  return out;
}

// Vertices lying in all three pairwise intervals of the triple.
inline std::vector<int> medians(const DistanceMatrix& dm, int x1, int x2, int x3) {
  std::vector<int> out;
  for (int m = 0; m < dm.n; ++m) {
    if (dm.at(x1, m) + dm.at(m, x2) != dm.at(x1, x2)) continue;
    if (dm.at(x2, m) + dm.at(m, x3) != dm.at(x2, x3)) continue;
    if (dm.at(x3, m) + dm.at(m, x1) != dm.at(x3, x1)) continue;
    out.push_back(m);
  }
  return out;
}

struct ModularityResult {
  bool modular = false;
  std::array<int, 3> witness{-1, -1, -1};  // median-free triple when !modular
};

// A connected graph is modular when every vertex triple admits a median
// (unit metric). Checked by triple enumeration over precomputed interval
// bitsets; the witness is the first median-free triple in lexicographic order.
inline ModularityResult is_modular(const Graph& g) {
  require_connected(g);
  DistanceMatrix dm = unit_metric(g);
  int n = g.n;
  int words = (n + 63) / 64;
  // interval_bits[p*n+q] = bitset of I(p,q)
  std::vector<std::vector<uint64_t>> bits(static_cast<size_t>(n) * n,
                                          std::vector<uint64_t>(words, 0));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      auto& b = bits[static_cast<size_t>(p) * n + q];
      for (int x = 0; x < n; ++x)
        if (dm.at(p, x) + dm.at(x, q) == dm.at(p, q)) b[x / 64] |= 1ull << (x % 64);
    }
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c) {
        const auto& i1 = bits[static_cast<size_t>(a) * n + b];
        const auto& i2 = bits[static_cast<size_t>(b) * n + c];
        const auto& i3 = bits[static_cast<size_t>(c) * n + a];
        bool any = false;
        for (int w = 0; w < words && !any; ++w)
          if (i1[w] & i2[w] & i3[w]) any = true;
        if (!any) return {false, {a, b, c}};
      }
  return {true, {-1, -1, -1}};
}

namespace detail {

// Convexity via the distance-2 characterization, valid in modular graphs.
// Assumes dm is the unit metric and Y is a sorted vertex list.
inline bool convex_in_modular(const Graph& g, const DistanceMatrix& dm,
                              const std::vector<int>& Y) {
  if (Y.empty()) return false;
  std::vector<char> in(g.n, 0);
  for (int y : Y) {
    if (y < 0 || y >= g.n) throw std::invalid_argument("convexity: vertex out of range");
    in[y] = 1;
  }
  // induced connectivity
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{Y[0]};
  seen[Y[0]] = 1;
  size_t cnt = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto [v, id] : g.adj[u])
      if (in[v] && !seen[v]) {
        seen[v] = 1;
        ++cnt;
        stack.push_back(v);
      }
  }
  if (cnt != Y.size()) return false;
  // distance-2 intervals stay inside
  for (int p : Y)
    for (int q : Y) {
      if (dm.at(p, q) != 2) continue;
      for (int x = 0; x < g.n; ++x)
        if (dm.at(p, x) + dm.at(x, q) == 2 && !in[x]) return false;
    }
  return true;
}

// Gate of p at a set known to be convex: the distance minimizer, verified
// to split distances to every member.
inline int gate_in_convex(const DistanceMatrix& dm, const std::vector<int>& Y, int p) {
  int best = -1;
  for (int y : Y)
    if (best < 0 || dm.at(p, y) < dm.at(p, best)) best = y;
  for (int q : Y)
    if (dm.at(p, best) + dm.at(best, q) != dm.at(p, q))
      throw std::logic_error("gate identity failed on a convex set");
  return best;
}

}  // namespace detail

inline bool is_convex(const Graph& g, const std::vector<int>& Y) {
  auto mod = is_modular(g);
  if (!mod.modular) throw std::invalid_argument("convexity test requires modular graph");
  std::vector<int> ys = Y;
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return detail::convex_in_modular(g, unit_metric(g), ys);
}

// Unique nearest point of Y seen from p, splitting distances to all of Y.
inline int gate(const Graph& g, const std::vector<int>& Y, int p) {
  if (!is_convex(g, Y)) throw std::invalid_argument("gate: Y not convex");
  return detail::gate_in_convex(unit_metric(g), Y, p);
}

// Searches for an isometric cycle of length at least 5 (length at most
// 2*diam+1, which bounds any isometric cycle). Returns the vertex sequence of
// the first such cycle in canonical DFS order, or nullopt.
inline std::optional<std::vector<int>> find_isometric_cycle_gt4(const Graph& g) {
  require_connected(g);
  DistanceMatrix dm = unit_metric(g);
  int diam = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      int dij = static_cast<int>(dm.at(i, j).get_num().get_si());
      diam = std::max(diam, dij);
    }
  int maxlen = 2 * diam + 1;
  if (maxlen < 5) return std::nullopt;

  auto isometric = [&](const std::vector<int>& cyc) {
    int L = static_cast<int>(cyc.size());
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) {
        int along = std::min(j - i, L - (j - i));
        if (dm.at(cyc[i], cyc[j]) != along) return false;
      }
    return true;
  };

  std::vector<int> path;
  std::vector<char> used(g.n, 0);
  std::optional<std::vector<int>> found;

  // Canonical form: the cycle starts at its smallest vertex s, all other
  // vertices exceed s, and the second vertex is smaller than the last.
  auto dfs = [&](auto&& self, int s, int u) -> void {
    if (found) return;
    if (static_cast<int>(path.size()) >= 3) {
      if (g.has_edge(u, s) && path[1] < u && static_cast<int>(path.size()) >= 5) {
        if (isometric(path)) {
          found = path;
          return;
        }
      }
    }
    if (static_cast<int>(path.size()) == maxlen) return;
    for (auto [v, id] : g.adj[u]) {
      if (v <= s || used[v]) continue;
      // Stay within plausible isometric range: positions on the cycle are
      // at distance <= floor(maxlen/2) from the start.
      if (dm.at(s, v) > maxlen / 2) continue;
      used[v] = 1;
      path.push_back(v);
      self(self, s, v);
      path.pop_back();
      used[v] = 0;
      if (found) return;
    }
  };

  for (int s = 0; s < g.n && !found; ++s) {
    path = {s};
    std::fill(used.begin(), used.end(), 0);
    used[s] = 1;
    dfs(dfs, s, s);
  }
  return found;
}

}  // namespace zeroext
