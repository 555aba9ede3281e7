#pragma once

// Modular complexes: a modular graph with an admissible orientation and
// positive orbit-invariant edge weights. Provides the induced partial order,
// Boolean pairs (interval complement search), local semilattices above and
// below a vertex, the 2-subdivision, neighborhood semilattices, halved
// vertex-pair averages of vertex functions, L-convexity testing, restriction
// to an orbit with gates, and products.
//
// Complexes built directly are fully validated (modularity, admissibility,
// orbit invariance) and keep dense order/distance matrices. Complexes built
// by product_complex keep the factor list instead and answer order, distance
// and Boolean-pair queries coordinatewise; the factorization is exercised
// against the dense route in the test suite. Everything is single-threaded;
// the mutable members are lazily filled caches on otherwise immutable data.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zeroext/graph.hpp"
#include "zeroext/orbits.hpp"
#include "zeroext/semilattice.hpp"

namespace zeroext {

struct Subdivision;

// Ascending-order pair low <= high in the induced order; low == high allowed.
struct BooleanPair {
  int low = -1;
  int high = -1;
  friend bool operator==(const BooleanPair&, const BooleanPair&) = default;
  friend auto operator<=>(const BooleanPair&, const BooleanPair&) = default;
};

struct PartialOrder {
  int n = 0;
  std::vector<char> mat;  // row-major reachability closure

  bool leq(int a, int b) const { return mat[static_cast<size_t>(a) * n + b] != 0; }
};

// Reachability order of the oriented graph: a <= b iff b is reachable from a
// along arcs. Rejects cyclic orientations.
inline PartialOrder order_from_arcs(const Graph& g, const Orientation& o) {
  if (static_cast<int>(o.arc.size()) != g.edge_count())
    throw std::invalid_argument("orientation size mismatch");
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [t, h] = o.arc[e];
    if (g.edge_id(t, h) != e) throw std::invalid_argument("orientation arc not an edge");
  }
  if (!orientation_is_acyclic(g, o)) throw std::invalid_argument("cyclic orientation");
  int n = g.n;
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (auto [t, h] : o.arc) {
    out[t].push_back(h);
    ++indeg[h];
  }
  std::vector<int> topo;
  topo.reserve(n);
  std::queue<int> q;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) q.push(v);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    topo.push_back(u);
    for (int h : out[u])
      if (--indeg[h] == 0) q.push(h);
  }
  int words = (n + 63) / 64;
  std::vector<std::vector<uint64_t>> reach(n, std::vector<uint64_t>(words, 0));
  for (int i = n - 1; i >= 0; --i) {
    int u = topo[i];
    reach[u][u / 64] |= 1ull << (u % 64);
    for (int h : out[u])
      for (int w = 0; w < words; ++w) reach[u][w] |= reach[h][w];
  }
  PartialOrder po;
  po.n = n;
  po.mat.assign(static_cast<size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      po.mat[static_cast<size_t>(a) * n + b] =
          static_cast<char>((reach[a][b / 64] >> (b % 64)) & 1);
  return po;
}

// A local semilattice carried by a complex: the Boolean cone above or below a
// base vertex (order reversed for the lower side), or a neighborhood cone in
// a 2-subdivision. Elements are ambient vertex ids; the valuation is the
// weighted distance to the base. Enough of the ambient structure (induced
// edges with their orbits) is kept for restriction to an orbit.
struct LocalSemilattice {
  int base = -1;
  char side = '+';         // '+', '-', or '*' for neighborhood cones
  std::vector<int> verts;  // ambient ids, ascending
  std::vector<std::vector<char>> leq;
  std::vector<Rat> val;
  std::vector<BooleanPair> names;  // '*' only: base-graph pair behind each element

  struct Edge {
    int a = -1, b = -1;     // local indices, a < b
    int ambient_edge = -1;  // edge id in the ambient graph
    int orbit = -1;         // ambient orbit id
    Rat w;
  };
  std::vector<Edge> edges;
  // Full ambient membership of every orbit touching the induced edges, so
  // restriction can verify orbit-closedness without the ambient graph.
  std::vector<std::pair<int, std::vector<int>>> incident_orbits;

  int index_of(int ambient_vertex) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), ambient_vertex);
    if (it == verts.end() || *it != ambient_vertex) return -1;
    return static_cast<int>(it - verts.begin());
  }

  Semilattice to_semilattice() const { return Semilattice(leq, val); }
};

struct NeighborhoodEntry {
  LocalSemilattice local;
  Semilattice sem;
};

struct ModularComplex {
  Graph graph;  // carries the weights of `weights`
  Orientation orientation;
  OrbitInvariantWeights weights;
  OrbitPartition orbits;

  // Product provenance: nonempty iff built by product_complex. stride[i] is
  // the id stride of factor i, so vertex v has coordinates (v/stride[i]) mod
  // factor size.
  std::vector<std::shared_ptr<const ModularComplex>> factors;
  std::vector<int> stride;

  // dense-mode data, unused when factors are present
  PartialOrder order_;
  DistanceMatrix dist_;

  mutable std::vector<int8_t> bmemo_;  // Boolean-pair memo, -1 unknown
  mutable std::shared_ptr<const Subdivision> sub_;
  mutable std::map<int, NeighborhoodEntry> star_;

  ModularComplex() = default;

  ModularComplex(const Graph& g, Orientation o, OrbitInvariantWeights h) {
    require_connected(g);
    if (h.per_edge.size() != g.edges.size())
      throw std::invalid_argument("edge weight count mismatch");
    graph = Graph(g.n, g.edges, h.per_edge);
    if (!is_modular(graph).modular) throw std::invalid_argument("graph not modular");
    if (!is_admissible(graph, o)) throw std::invalid_argument("orientation not admissible");
    orbits = compute_orbits(graph);
    if (!weights_are_orbit_invariant(graph, orbits, h.per_edge))
      throw std::invalid_argument("weights not positive orbit-invariant");
    orientation = std::move(o);
    weights = std::move(h);
    order_ = order_from_arcs(graph, orientation);
    dist_ = shortest_path_metric(graph);
    bmemo_.assign(static_cast<size_t>(graph.n) * graph.n, -1);
  }

  int n() const { return graph.n; }
  bool dense() const { return factors.empty(); }

  std::vector<int> coords(int v) const {
    std::vector<int> c(factors.size());
    for (size_t i = 0; i < factors.size(); ++i)
      c[i] = (v / stride[i]) % factors[i]->graph.n;
    return c;
  }

  int encode(const std::vector<int>& c) const {
    if (c.size() != factors.size()) throw std::invalid_argument("coordinate arity mismatch");
    int v = 0;
    for (size_t i = 0; i < factors.size(); ++i) {
      if (c[i] < 0 || c[i] >= factors[i]->graph.n)
        throw std::invalid_argument("coordinate out of range");
      v += c[i] * stride[i];
    }
    return v;
  }

  bool leq(int a, int b) const {
    if (dense()) return order_.leq(a, b);
    auto ca = coords(a), cb = coords(b);
    for (size_t i = 0; i < factors.size(); ++i)
      if (!factors[i]->leq(ca[i], cb[i])) return false;
    return true;
  }

  Rat distance(int a, int b) const {
    if (dense()) return dist_.at(a, b);
    auto ca = coords(a), cb = coords(b);
    Rat d = 0;
    for (size_t i = 0; i < factors.size(); ++i) d += factors[i]->distance(ca[i], cb[i]);
    return d;
  }
};

inline void check_vertex(const ModularComplex& c, int v) {
  if (v < 0 || v >= c.graph.n) throw std::invalid_argument("vertex out of range");
}

// Elements u with p <= u <= q, ascending.
inline std::vector<int> order_interval(const ModularComplex& c, int p, int q) {
  check_vertex(c, p);
  check_vertex(c, q);
  std::vector<int> out;
  for (int u = 0; u < c.graph.n; ++u)
    if (c.leq(p, u) && c.leq(u, q)) out.push_back(u);
  return out;
}

namespace detail {

// Complement search on the interval [p,q]: every element must have a partner
// meeting it exactly at p and joining it exactly at q. Meets and joins are
// read off as "the only common lower (upper) bound inside the interval".
inline bool boolean_by_complements(const ModularComplex& c, int p, int q) {
  std::vector<int> I = order_interval(c, p, q);
  for (int u : I) {
    bool found = false;
    for (int v : I) {
      bool meet_p = true, join_q = true;
      for (int w : I) {
        if (w != p && c.leq(w, u) && c.leq(w, v)) meet_p = false;
        if (w != q && c.leq(u, w) && c.leq(v, w)) join_q = false;
        if (!meet_p || !join_q) break;
      }
      if (meet_p && join_q) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

// (p,q) is Boolean when p <= q and the interval [p,q] is a complemented
// lattice; (p,p) counts by convention. Memoized per dense complex; products
// answer coordinatewise.
inline bool is_boolean_pair(const ModularComplex& c, int p, int q) {
  check_vertex(c, p);
  check_vertex(c, q);
  if (p == q) return true;
  if (!c.dense()) {
    auto cp = c.coords(p), cq = c.coords(q);
    for (size_t i = 0; i < c.factors.size(); ++i)
      if (!is_boolean_pair(*c.factors[i], cp[i], cq[i])) return false;
    return true;
  }
  int8_t& memo = c.bmemo_[static_cast<size_t>(p) * c.graph.n + q];
  if (memo >= 0) return memo != 0;
  bool ans = c.leq(p, q) && detail::boolean_by_complements(c, p, q);
  memo = ans ? 1 : 0;
  return ans;
}

inline PartialOrder order_from_orientation(const ModularComplex& c) {
  if (c.dense()) return c.order_;
  PartialOrder po;
  po.n = c.graph.n;
  po.mat.assign(static_cast<size_t>(po.n) * po.n, 0);
  for (int a = 0; a < po.n; ++a)
    for (int b = 0; b < po.n; ++b)
      po.mat[static_cast<size_t>(a) * po.n + b] = c.leq(a, b) ? 1 : 0;
  return po;
}

// The Boolean cone at p: elements q with (p,q) Boolean for side '+', (q,p)
// Boolean for side '-'. The order is the induced one ('+') or its reverse
// ('-'), the valuation is the weighted distance to p. Validated to be a
// modular semilattice with minimum p on construction.
inline LocalSemilattice local_semilattice(const ModularComplex& c, int p, char side) {
  check_vertex(c, p);
  if (side != '+' && side != '-') throw std::invalid_argument("side must be + or -");
  LocalSemilattice L;
  L.base = p;
  L.side = side;
  for (int q = 0; q < c.graph.n; ++q) {
    bool in = side == '+' ? is_boolean_pair(c, p, q) : is_boolean_pair(c, q, p);
    if (in) L.verts.push_back(q);
  }
  int k = static_cast<int>(L.verts.size());
  L.leq.assign(k, std::vector<char>(k, 0));
  L.val.resize(k);
  for (int i = 0; i < k; ++i) {
    L.val[i] = c.distance(L.verts[i], p);
    for (int j = 0; j < k; ++j)
      L.leq[i][j] = side == '+' ? c.leq(L.verts[i], L.verts[j]) : c.leq(L.verts[j], L.verts[i]);
  }
  std::vector<char> orbit_seen;
  for (int e = 0; e < c.graph.edge_count(); ++e) {
    int a = L.index_of(c.graph.edges[e].first);
    int b = L.index_of(c.graph.edges[e].second);
    if (a < 0 || b < 0) continue;
    L.edges.push_back({a, b, e, c.orbits.orbit_of[e], c.graph.weight[e]});
    if (orbit_seen.empty()) orbit_seen.assign(c.orbits.count, 0);
    orbit_seen[c.orbits.orbit_of[e]] = 1;
  }
  for (int o = 0; o < static_cast<int>(orbit_seen.size()); ++o)
    if (orbit_seen[o]) L.incident_orbits.emplace_back(o, c.orbits.members[o]);
  Semilattice S = L.to_semilattice();  // eager validation
  if (L.verts[S.bottom] != p)
    throw std::logic_error("local semilattice base is not the minimum");
  return L;
}

// 2-subdivision: one vertex per Boolean pair q/p, edges between pairs sharing
// the low end across a graph edge on the high ends or vice versa, weights
// halved. Arcs follow the high-end arc and oppose the low-end arc. The result
// is rebuilt as a fully validated complex.
struct Subdivision {
  ModularComplex complex;
  std::vector<BooleanPair> names;  // subdivision vertex -> pair, low-major order
  std::vector<int> diag;           // base vertex p -> subdivision id of p/p

  int id_of(int low, int high) const {
    BooleanPair key{low, high};
    auto it = std::lower_bound(names.begin(), names.end(), key);
    if (it == names.end() || !(*it == key)) return -1;
    return static_cast<int>(it - names.begin());
  }
};

inline const Subdivision& two_subdivision(const ModularComplex& c) {
  if (c.sub_) return *c.sub_;
  auto sd = std::make_shared<Subdivision>();
  sd->diag.assign(c.graph.n, -1);
  for (int low = 0; low < c.graph.n; ++low)
    for (int high = 0; high < c.graph.n; ++high)
      if (is_boolean_pair(c, low, high)) {
        if (low == high) sd->diag[low] = static_cast<int>(sd->names.size());
        sd->names.push_back({low, high});
      }
  int B = static_cast<int>(sd->names.size());
  std::vector<std::pair<int, int>> es;
  std::vector<Rat> ws;
  std::vector<std::pair<int, int>> arcs;
  auto arc_is = [&](int t, int h) {
    return c.orientation.arc[c.graph.edge_id(t, h)] == std::make_pair(t, h);
  };
  for (int i = 0; i < B; ++i)
    for (int j = i + 1; j < B; ++j) {
      auto [p, qa] = sd->names[i];
      auto [pb, qb] = sd->names[j];
      if (p == pb && c.graph.has_edge(qa, qb)) {
        es.emplace_back(i, j);
        ws.push_back(c.graph.weight[c.graph.edge_id(qa, qb)] / 2);
        arcs.push_back(arc_is(qa, qb) ? std::make_pair(i, j) : std::make_pair(j, i));
      } else if (qa == qb && c.graph.has_edge(p, pb)) {
        es.emplace_back(i, j);
        ws.push_back(c.graph.weight[c.graph.edge_id(p, pb)] / 2);
        arcs.push_back(arc_is(pb, p) ? std::make_pair(i, j) : std::make_pair(j, i));
      }
    }
  sd->complex = ModularComplex(Graph(B, es, ws), Orientation{arcs},
                               OrbitInvariantWeights{ws});
  c.sub_ = std::move(sd);
  return *c.sub_;
}

// Neighborhood semilattice of p: the '+' cone of p/p in the 2-subdivision,
// with the pair names attached. Cached per complex.
inline const NeighborhoodEntry& neighborhood_entry(const ModularComplex& c, int p) {
  check_vertex(c, p);
  auto it = c.star_.find(p);
  if (it != c.star_.end()) return it->second;
  const Subdivision& sd = two_subdivision(c);
  NeighborhoodEntry ent;
  ent.local = local_semilattice(sd.complex, sd.diag[p], '+');
  ent.local.side = '*';
  ent.local.names.resize(ent.local.verts.size());
  for (size_t i = 0; i < ent.local.verts.size(); ++i)
    ent.local.names[i] = sd.names[ent.local.verts[i]];
  ent.sem = ent.local.to_semilattice();
  return c.star_.emplace(p, std::move(ent)).first->second;
}

inline const LocalSemilattice& neighborhood_semilattice(const ModularComplex& c, int p) {
  return neighborhood_entry(c, p).local;
}

// Halved endpoint sums of a vertex function, one value per Boolean pair,
// indexed like two_subdivision(c).names.
inline std::vector<Rat> lovasz_restriction(const ModularComplex& c,
                                           const std::vector<Rat>& g) {
  if (static_cast<int>(g.size()) != c.graph.n)
    throw std::invalid_argument("vertex function size mismatch");
  const Subdivision& sd = two_subdivision(c);
  std::vector<Rat> out(sd.names.size());
  for (size_t i = 0; i < sd.names.size(); ++i)
    out[i] = (g[sd.names[i].low] + g[sd.names[i].high]) / 2;
  return out;
}

struct LConvexity {
  bool ok = true;
  int vertex = -1;       // base vertex whose neighborhood cone fails
  BooleanPair a, b;      // violating pair of cone elements
};

// g is L-convex when its halved pair average is submodular on every
// neighborhood semilattice. Dense complexes check each cone directly; product
// complexes check the product of factor cones through the factored
// submodularity criterion (the two agree, see the test suite).
inline LConvexity is_L_convex(const ModularComplex& c, const std::vector<Rat>& g) {
  if (static_cast<int>(g.size()) != c.graph.n)
    throw std::invalid_argument("vertex function size mismatch");
  LConvexity res;
  if (c.dense()) {
    for (int p = 0; p < c.graph.n; ++p) {
      const NeighborhoodEntry& ent = neighborhood_entry(c, p);
      std::vector<ExtRat> f(ent.sem.k);
      for (int i = 0; i < ent.sem.k; ++i) {
        const BooleanPair& nm = ent.local.names[i];
        f[i] = ExtRat((g[nm.low] + g[nm.high]) / 2);
      }
      auto r = is_submodular(ent.sem, f);
      if (!r.ok) {
        res.ok = false;
        res.vertex = p;
        res.a = ent.local.names[r.witness.first];
        res.b = ent.local.names[r.witness.second];
        return res;
      }
    }
    return res;
  }

  size_t nf = c.factors.size();
  for (int p = 0; p < c.graph.n; ++p) {
    auto cs = c.coords(p);
    std::vector<const NeighborhoodEntry*> ents(nf);
    std::vector<const Semilattice*> Ls(nf);
    for (size_t i = 0; i < nf; ++i) {
      ents[i] = &neighborhood_entry(*c.factors[i], cs[i]);
      Ls[i] = &ents[i]->sem;
    }
    size_t total = 1;
    for (size_t i = 0; i < nf; ++i) total *= Ls[i]->k;
    // flat table of the pair averages over the product cone, last coordinate
    // fastest
    std::vector<Rat> table(total);
    std::vector<int> t(nf, 0);
    for (size_t idx = 0; idx < total; ++idx) {
      std::vector<int> lows(nf), highs(nf);
      for (size_t i = 0; i < nf; ++i) {
        lows[i] = ents[i]->local.names[t[i]].low;
        highs[i] = ents[i]->local.names[t[i]].high;
      }
      table[idx] = (g[c.encode(lows)] + g[c.encode(highs)]) / 2;
      for (size_t i = nf; i-- > 0;) {
        if (++t[i] < Ls[i]->k) break;
        t[i] = 0;
      }
    }
    auto flat = [&](const std::vector<int>& tup) -> size_t {
      size_t idx = 0;
      for (size_t i = 0; i < nf; ++i) idx = idx * Ls[i]->k + tup[i];
      return idx;
    };
    auto r = product_submodular_check(
        Ls, [&](const std::vector<int>& tup) -> Rat { return table[flat(tup)]; });
    if (!r.ok) {
      res.ok = false;
      res.vertex = p;
      std::vector<int> la(nf), ha(nf), lb(nf), hb(nf);
      for (size_t i = 0; i < nf; ++i) {
        la[i] = ents[i]->local.names[r.witness_p[i]].low;
        ha[i] = ents[i]->local.names[r.witness_p[i]].high;
        lb[i] = ents[i]->local.names[r.witness_q[i]].low;
        hb[i] = ents[i]->local.names[r.witness_q[i]].high;
      }
      res.a = {c.encode(la), c.encode(ha)};
      res.b = {c.encode(lb), c.encode(hb)};
      return res;
    }
  }
  return res;
}

// Restriction of a local semilattice to the edges of an orbit (given as the
// ambient edge ids): the elements all of whose shortest paths from the base
// use only those edges, plus the gate of every element at the restriction.
struct OrbitRestriction {
  LocalSemilattice sub;
  std::vector<int> gate;  // original element index -> ambient id of its gate
};

inline OrbitRestriction restrict_to_orbit(const LocalSemilattice& L,
                                          const std::vector<int>& Q) {
  int k = static_cast<int>(L.verts.size());
  std::vector<char> inq_edge;  // per L edge, below

  // Orbit-closedness relative to the incident orbits: an orbit is either
  // fully inside Q or disjoint from it.
  std::vector<char> orbit_on;
  {
    int max_orbit = -1;
    for (const auto& [orbit, members] : L.incident_orbits) max_orbit = std::max(max_orbit, orbit);
    orbit_on.assign(max_orbit + 1, 0);
    std::vector<int> qs = Q;
    std::sort(qs.begin(), qs.end());
    auto in_q = [&](int e) { return std::binary_search(qs.begin(), qs.end(), e); };
    for (const auto& [orbit, members] : L.incident_orbits) {
      size_t cnt = 0;
      for (int e : members)
        if (in_q(e)) ++cnt;
      if (cnt != 0 && cnt != members.size())
        throw std::invalid_argument("orbit restriction not orbit-closed");
      if (cnt != 0) orbit_on[orbit] = 1;
    }
    inq_edge.assign(L.edges.size(), 0);
    for (size_t i = 0; i < L.edges.size(); ++i) inq_edge[i] = orbit_on[L.edges[i].orbit];
  }

  // local covering-graph metric; must reproduce the valuation from the base
  std::vector<std::pair<int, int>> es;
  std::vector<Rat> ws;
  for (const auto& e : L.edges) {
    es.emplace_back(e.a, e.b);
    ws.push_back(e.w);
  }
  DistanceMatrix dm = shortest_path_metric(Graph(k, es, ws));
  int b0 = -1;
  for (int i = 0; i < k && b0 < 0; ++i)
    if (L.verts[i] == L.base) b0 = i;
  if (b0 < 0) throw std::logic_error("local semilattice lost its base");
  for (int i = 0; i < k; ++i)
    if (dm.at(b0, i) != L.val[i])
      throw std::logic_error("local metric disagrees with valuation");

  std::vector<char> in(k, 1);
  for (int t = 0; t < k; ++t)
    for (size_t ei = 0; ei < L.edges.size() && in[t]; ++ei) {
      if (inq_edge[ei]) continue;
      const auto& e = L.edges[ei];
      bool onpath = dm.at(b0, e.a) + e.w + dm.at(e.b, t) == dm.at(b0, t) ||
                    dm.at(b0, e.b) + e.w + dm.at(e.a, t) == dm.at(b0, t);
      if (onpath) in[t] = 0;
    }

  OrbitRestriction res;
  std::vector<int> local_of(k, -1);
  for (int i = 0; i < k; ++i)
    if (in[i]) {
      local_of[i] = static_cast<int>(res.sub.verts.size());
      res.sub.verts.push_back(L.verts[i]);
    }
  int ks = static_cast<int>(res.sub.verts.size());
  res.sub.base = L.base;
  res.sub.side = L.side;
  res.sub.leq.assign(ks, std::vector<char>(ks, 0));
  res.sub.val.resize(ks);
  if (!L.names.empty()) res.sub.names.resize(ks);
  for (int i = 0; i < k; ++i) {
    if (!in[i]) continue;
    res.sub.val[local_of[i]] = L.val[i];
    if (!L.names.empty()) res.sub.names[local_of[i]] = L.names[i];
    for (int j = 0; j < k; ++j)
      if (in[j]) res.sub.leq[local_of[i]][local_of[j]] = L.leq[i][j];
  }
  std::vector<char> sub_orbit_seen;
  for (size_t ei = 0; ei < L.edges.size(); ++ei) {
    const auto& e = L.edges[ei];
    if (!in[e.a] || !in[e.b]) continue;
    if (!inq_edge[ei]) throw std::logic_error("restriction kept an excluded edge");
    res.sub.edges.push_back({local_of[e.a], local_of[e.b], e.ambient_edge, e.orbit, e.w});
    if (sub_orbit_seen.empty()) sub_orbit_seen.assign(orbit_on.size(), 0);
    sub_orbit_seen[e.orbit] = 1;
  }
  for (const auto& [orbit, members] : L.incident_orbits)
    if (!sub_orbit_seen.empty() && sub_orbit_seen[orbit])
      res.sub.incident_orbits.emplace_back(orbit, members);
  {
    Semilattice S = res.sub.to_semilattice();  // eager validation
    if (res.sub.verts[S.bottom] != L.base)
      throw std::logic_error("local semilattice base is not the minimum");
  }

  res.gate.resize(k);
  for (int i = 0; i < k; ++i) {
    int g = -1;
    for (int j = 0; j < k; ++j)
      if (in[j] && (g < 0 || dm.at(i, j) < dm.at(i, g))) g = j;
    for (int y = 0; y < k; ++y)
      if (in[y] && dm.at(i, g) + dm.at(g, y) != dm.at(i, y))
        throw std::logic_error("gate identity failed on a convex set");
    if (!L.leq[g][i]) throw std::logic_error("gate not below its element");
    for (size_t ei = 0; ei < L.edges.size(); ++ei) {
      if (!inq_edge[ei]) continue;
      const auto& e = L.edges[ei];
      bool onpath = dm.at(i, e.a) + e.w + dm.at(e.b, g) == dm.at(i, g) ||
                    dm.at(i, e.b) + e.w + dm.at(e.a, g) == dm.at(i, g);
      if (onpath) throw std::logic_error("gate path meets the restricted orbit");
    }
    res.gate[i] = L.verts[g];
  }
  return res;
}

// Cartesian product with coordinatewise arcs and weights. The factor list is
// kept (flattened) so order, distance, and Boolean-pair queries decompose;
// the cubic whole-graph validation is skipped, but admissibility and orbit
// invariance are still verified on the assembled graph.
inline ModularComplex product_complex(const ModularComplex& A, const ModularComplex& B) {
  int na = A.graph.n, nb = B.graph.n;
  std::vector<std::pair<int, int>> es;
  std::vector<Rat> ws;
  std::vector<std::pair<int, int>> arcs;
  for (int u = 0; u < na; ++u)
    for (int e = 0; e < B.graph.edge_count(); ++e) {
      auto [x, y] = B.graph.edges[e];
      es.emplace_back(u * nb + x, u * nb + y);
      ws.push_back(B.graph.weight[e]);
      auto [t, h] = B.orientation.arc[e];
      arcs.emplace_back(u * nb + t, u * nb + h);
    }
  for (int e = 0; e < A.graph.edge_count(); ++e) {
    auto [x, y] = A.graph.edges[e];
    for (int v = 0; v < nb; ++v) {
      es.emplace_back(x * nb + v, y * nb + v);
      ws.push_back(A.graph.weight[e]);
      auto [t, h] = A.orientation.arc[e];
      arcs.emplace_back(t * nb + v, h * nb + v);
    }
  }
  ModularComplex P;
  P.graph = Graph(na * nb, es, ws);
  P.orientation = Orientation{arcs};
  P.weights = OrbitInvariantWeights{ws};
  if (!is_admissible(P.graph, P.orientation))
    throw std::logic_error("product orientation not admissible");
  P.orbits = compute_orbits(P.graph);
  if (!weights_are_orbit_invariant(P.graph, P.orbits, ws))
    throw std::logic_error("product weights not orbit-invariant");
  auto append = [&](const ModularComplex& c, int scale) {
    if (c.factors.empty()) {
      P.factors.push_back(std::make_shared<const ModularComplex>(c));
      P.stride.push_back(scale);
    } else {
      for (size_t i = 0; i < c.factors.size(); ++i) {
        P.factors.push_back(c.factors[i]);
        P.stride.push_back(c.stride[i] * scale);
      }
    }
  };
  append(A, nb);
  append(B, 1);
  return P;
}

}  // namespace zeroext
