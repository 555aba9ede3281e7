#include "zeroext/complex.hpp"

#include <bit>
#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "fixtures.hpp"

using namespace zeroext;

namespace {

ModularComplex make_complex(const Graph& g) {
  auto r = find_admissible_orientation(g);
  REQUIRE(r.ok);
  return ModularComplex(g, r.orientation, OrbitInvariantWeights{g.weight});
}

Orientation arcs(const Graph& g, std::vector<std::pair<int, int>> a) {
  REQUIRE(static_cast<int>(a.size()) == g.edge_count());
  return Orientation{std::move(a)};
}

std::vector<Rat> rat_vec(std::initializer_list<int> xs) {
  std::vector<Rat> out;
  for (int x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("complex construction validates the full triple") {
  Graph c4 = zxt::cycle(4);
  auto good = find_admissible_orientation(c4);
  REQUIRE(good.ok);

  CHECK_THROWS_WITH(ModularComplex(zxt::cycle(6), Orientation{}, unit_weights(zxt::cycle(6))),
                    "graph not modular");
  CHECK_THROWS_WITH(ModularComplex(zxt::cycle(5), Orientation{}, unit_weights(zxt::cycle(5))),
                    "graph not modular");
  CHECK_THROWS_WITH(ModularComplex(zxt::complete(4), Orientation{}, unit_weights(zxt::complete(4))),
                    "graph not modular");

  CHECK_THROWS_WITH(
      ModularComplex(c4, arcs(c4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), unit_weights(c4)),
      "orientation not admissible");

  CHECK_THROWS_WITH(ModularComplex(c4, good.orientation, OrbitInvariantWeights{{Rat(1)}}),
                    "edge weight count mismatch");
  CHECK_THROWS_WITH(
      ModularComplex(c4, good.orientation,
                     OrbitInvariantWeights{{Rat(1), Rat(1), Rat(1), Rat(2)}}),
      "weights not positive orbit-invariant");

  Graph two(2, {});
  CHECK_THROWS_WITH(ModularComplex(two, Orientation{}, OrbitInvariantWeights{{}}),
                    "graph not connected");
}

TEST_CASE("orientation reachability order on small fixtures") {
  ModularComplex k2 = make_complex(zxt::path(2));
  CHECK(k2.leq(0, 1));
  CHECK_FALSE(k2.leq(1, 0));
  CHECK(k2.leq(0, 0));

  ModularComplex c4 = make_complex(zxt::cycle(4));
  REQUIRE(c4.orientation.arc ==
          std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {3, 2}, {0, 3}});
  for (int v = 0; v < 4; ++v) {
    CHECK(c4.leq(0, v));
    CHECK(c4.leq(v, 2));
  }
  CHECK_FALSE(c4.leq(1, 3));
  CHECK_FALSE(c4.leq(3, 1));
  CHECK_FALSE(c4.leq(2, 0));

  // cube vertices are bitmasks; the induced order is containment
  ModularComplex q3 = make_complex(zxt::cube());
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) CHECK(q3.leq(a, b) == ((a & b) == a));

  PartialOrder po = order_from_orientation(c4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(po.leq(a, b) == c4.leq(a, b));
}

TEST_CASE("cyclic orientations are rejected") {
  Graph c4 = zxt::cycle(4);
  CHECK_THROWS_WITH(order_from_arcs(c4, arcs(c4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})),
                    "cyclic orientation");
  CHECK_THROWS_WITH(order_from_arcs(c4, Orientation{{{0, 1}}}), "orientation size mismatch");
  CHECK_THROWS_WITH(order_from_arcs(c4, arcs(c4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}})),
                    "orientation arc not an edge");
}

TEST_CASE("boolean pairs on paths, cycles and the cube") {
  ModularComplex p5 = make_complex(zxt::path(5));
  ModularComplex c4 = make_complex(zxt::cycle(4));
  ModularComplex q3 = make_complex(zxt::cube());

  for (int v = 0; v < 5; ++v) CHECK(is_boolean_pair(p5, v, v));
  CHECK(is_boolean_pair(p5, 0, 1));
  CHECK(is_boolean_pair(p5, 3, 4));
  CHECK_FALSE(is_boolean_pair(p5, 0, 2));  // three-chain interval has no complement
  CHECK_FALSE(is_boolean_pair(p5, 1, 0));  // wrong way around
  CHECK_FALSE(is_boolean_pair(p5, 0, 4));

  CHECK(is_boolean_pair(c4, 0, 2));  // the full diamond
  CHECK(is_boolean_pair(c4, 0, 1));
  CHECK_FALSE(is_boolean_pair(c4, 1, 3));  // incomparable

  CHECK(is_boolean_pair(q3, 0, 7));
  CHECK(is_boolean_pair(q3, 0, 3));
  CHECK(is_boolean_pair(q3, 1, 7));
  CHECK_FALSE(is_boolean_pair(q3, 1, 2));

  CHECK_THROWS_WITH(is_boolean_pair(c4, 0, 9), "vertex out of range");
}

TEST_CASE("boolean relation refines the order and is not transitive") {
  ModularComplex p5 = make_complex(zxt::path(5));
  CHECK(is_boolean_pair(p5, 0, 1));
  CHECK(is_boolean_pair(p5, 1, 2));
  CHECK_FALSE(is_boolean_pair(p5, 0, 2));

  for (const Graph& g : {zxt::path(5), zxt::cycle(4), zxt::cube(), zxt::grid(2, 3)}) {
    ModularComplex c = make_complex(g);
    for (int p = 0; p < c.n(); ++p)
      for (int q = 0; q < c.n(); ++q)
        if (is_boolean_pair(c, p, q)) CHECK(c.leq(p, q));
  }
}

TEST_CASE("boolean pairs are hereditary inside their interval") {
  for (const Graph& g : {zxt::cycle(4), zxt::cube(), zxt::grid(2, 3)}) {
    ModularComplex c = make_complex(g);
    for (int p = 0; p < c.n(); ++p)
      for (int q = 0; q < c.n(); ++q) {
        if (!is_boolean_pair(c, p, q)) continue;
        for (int u : order_interval(c, p, q))
          for (int v : order_interval(c, u, q)) CHECK(is_boolean_pair(c, u, v));
      }
  }
}

TEST_CASE("order intervals are metric intervals and convex") {
  for (const Graph& g : {zxt::path(3), zxt::cycle(4), zxt::cube(), zxt::grid(2, 3)}) {
    ModularComplex c = make_complex(g);
    DistanceMatrix dm = unit_metric(g);
    for (int p = 0; p < c.n(); ++p)
      for (int q = 0; q < c.n(); ++q) {
        if (!c.leq(p, q)) continue;
        std::vector<int> iv = order_interval(c, p, q);
        CHECK(iv == metric_interval(dm, p, q));
        CHECK(is_convex(g, iv));
      }
  }
}

TEST_CASE("local semilattice of a sink is a singleton") {
  ModularComplex p3 = make_complex(zxt::path(3));
  LocalSemilattice L = local_semilattice(p3, 2, '+');
  CHECK(L.verts == std::vector<int>{2});
  CHECK(L.base == 2);
  CHECK(L.side == '+');
  CHECK(L.val == std::vector<Rat>{Rat(0)});
  CHECK(L.edges.empty());
}

TEST_CASE("local semilattices of a four-cycle") {
  ModularComplex c4 = make_complex(zxt::cycle(4));

  LocalSemilattice up = local_semilattice(c4, 0, '+');
  CHECK(up.verts == std::vector<int>{0, 1, 2, 3});
  CHECK(up.val == std::vector<Rat>{Rat(0), Rat(1), Rat(2), Rat(1)});
  CHECK(up.leq[0][2]);
  CHECK(up.leq[1][2]);
  CHECK(up.leq[3][2]);
  CHECK_FALSE(up.leq[1][3]);
  CHECK(up.edges.size() == 4);
  CHECK(up.incident_orbits.size() == 2);
  Semilattice S = up.to_semilattice();
  CHECK(up.verts[S.bottom] == 0);
  CHECK(S.join_if_bounded(1, 3).value() == 2);

  LocalSemilattice down = local_semilattice(c4, 2, '-');
  CHECK(down.verts == std::vector<int>{0, 1, 2, 3});
  CHECK(down.val == std::vector<Rat>{Rat(2), Rat(1), Rat(0), Rat(1)});
  CHECK(down.leq[2][0]);  // reversed order: the base is the minimum
  CHECK(down.leq[1][0]);
  Semilattice T = down.to_semilattice();
  CHECK(down.verts[T.bottom] == 2);

  CHECK_THROWS_WITH(local_semilattice(c4, 0, '?'), "side must be + or -");
  CHECK_THROWS_WITH(local_semilattice(c4, 9, '+'), "vertex out of range");
}

TEST_CASE("local semilattice of the cube bottom is the full cube") {
  ModularComplex q3 = make_complex(zxt::cube());
  LocalSemilattice L = local_semilattice(q3, 0, '+');
  REQUIRE(L.verts.size() == 8);
  for (int v = 0; v < 8; ++v) CHECK(L.val[v] == Rat(std::popcount(unsigned(v))));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) CHECK(bool(L.leq[a][b]) == ((a & b) == a));
}

TEST_CASE("grid cones cover the fifteen ascending pairs") {
  ModularComplex g23 = make_complex(zxt::grid(2, 3));
  size_t up_total = 0, down_total = 0;
  for (int v = 0; v < 6; ++v) {
    LocalSemilattice up = local_semilattice(g23, v, '+');
    LocalSemilattice dn = local_semilattice(g23, v, '-');
    CHECK(up.verts[up.to_semilattice().bottom] == v);
    CHECK(dn.verts[dn.to_semilattice().bottom] == v);
    up_total += up.verts.size();
    down_total += dn.verts.size();
  }
  CHECK(up_total == 15);
  CHECK(down_total == 15);
}

TEST_CASE("valuations and cover weights round trip on local semilattices") {
  ModularComplex c4 = make_complex(zxt::cycle(4));
  Semilattice S = local_semilattice(c4, 0, '+').to_semilattice();
  CoveringWeights cw = weights_from_valuation(S);
  CHECK(cw.covering.edge_count() == 4);
  for (const Rat& w : cw.weight) CHECK(w == 1);
  CHECK(valuation_from_weights(S, cw.weight) == S.val);

  ModularComplex wc4 = make_complex(zxt::weighted_c4());
  Semilattice W = local_semilattice(wc4, 0, '+').to_semilattice();
  CoveringWeights cww = weights_from_valuation(W);
  CHECK(valuation_from_weights(W, cww.weight) == W.val);
}

TEST_CASE("two-subdivision of an edge is a halved three-path") {
  ModularComplex k2 = make_complex(zxt::path(2));
  const Subdivision& sd = two_subdivision(k2);
  REQUIRE(sd.names == std::vector<BooleanPair>{{0, 0}, {0, 1}, {1, 1}});
  CHECK(sd.diag == std::vector<int>{0, 2});
  CHECK(sd.id_of(0, 1) == 1);
  CHECK(sd.id_of(1, 0) == -1);

  const Graph& g = sd.complex.graph;
  REQUIRE(g.n == 3);
  REQUIRE((g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
  CHECK(g.weight[0] == Rat(1, 2));
  CHECK(g.weight[1] == Rat(1, 2));
  // both endpoints point at the middle pair vertex
  CHECK(sd.complex.orientation.arc[0] == std::make_pair(0, 1));
  CHECK(sd.complex.orientation.arc[1] == std::make_pair(2, 1));
  CHECK(sd.complex.leq(0, 1));
  CHECK(sd.complex.leq(2, 1));
  CHECK_FALSE(sd.complex.leq(0, 2));
  CHECK(&two_subdivision(k2) == &sd);  // cached
}

TEST_CASE("two-subdivision of a four-cycle is a three-by-three grid") {
  ModularComplex c4 = make_complex(zxt::cycle(4));
  const Subdivision& sd = two_subdivision(c4);
  REQUIRE(sd.names.size() == 9);
  REQUIRE(sd.complex.graph.edge_count() == 12);
  for (const Rat& w : sd.complex.graph.weight) CHECK(w == Rat(1, 2));

  int center = sd.id_of(0, 2);
  REQUIRE(center >= 0);
  CHECK(sd.complex.graph.adj[center].size() == 4);
  int corners = 0;
  for (int v = 0; v < 9; ++v)
    if (sd.complex.graph.adj[v].size() == 2) ++corners;
  CHECK(corners == 4);

  CHECK(is_modular(sd.complex.graph).modular);
  CHECK(is_admissible(sd.complex.graph, sd.complex.orientation));
  CHECK(weights_are_orbit_invariant(sd.complex.graph, sd.complex.orbits,
                                    sd.complex.weights.per_edge));
}

TEST_CASE("subdivision distances halve endpoint sums") {
  for (const Graph& g :
       {zxt::path(2), zxt::path(3), zxt::path(5), zxt::cycle(4), zxt::star(3),
        zxt::grid(2, 3), zxt::cube(), zxt::weighted_c4()}) {
    ModularComplex c = make_complex(g);
    const Subdivision& sd = two_subdivision(c);
    int B = static_cast<int>(sd.names.size());
    for (int i = 0; i < B; ++i)
      for (int j = 0; j < B; ++j) {
        auto [p, q] = sd.names[i];
        auto [p2, q2] = sd.names[j];
        CHECK(sd.complex.distance(i, j) ==
              (c.distance(p, p2) + c.distance(q, q2)) / 2);
      }
    for (int p = 0; p < c.n(); ++p)
      for (int q = 0; q < c.n(); ++q)
        CHECK(sd.complex.distance(sd.diag[p], sd.diag[q]) == c.distance(p, q));
  }
}

TEST_CASE("subdivision order matches the coordinatewise rule") {
  for (const Graph& g : {zxt::path(3), zxt::cycle(4), zxt::cube()}) {
    ModularComplex c = make_complex(g);
    const Subdivision& sd = two_subdivision(c);
    int B = static_cast<int>(sd.names.size());
    for (int i = 0; i < B; ++i)
      for (int j = 0; j < B; ++j) {
        bool rule = c.leq(sd.names[j].low, sd.names[i].low) &&
                    c.leq(sd.names[i].high, sd.names[j].high);
        CHECK(sd.complex.leq(i, j) == rule);
      }
  }
}

TEST_CASE("neighborhood of a tree leaf is a two-chain") {
  ModularComplex star = make_complex(zxt::star(3));
  const LocalSemilattice& L = neighborhood_semilattice(star, 1);
  REQUIRE(L.names.size() == 2);
  CHECK(L.names[0] == BooleanPair{0, 1});
  CHECK(L.names[1] == BooleanPair{1, 1});
  CHECK(L.side == '*');
  std::multiset<Rat> vals(L.val.begin(), L.val.end());
  CHECK(vals == std::multiset<Rat>{Rat(0), Rat(1, 2)});
}

TEST_CASE("neighborhood of a path midpoint is a joinless fan") {
  Graph p3 = zxt::path(3);
  ModularComplex c(p3, arcs(p3, {{0, 1}, {2, 1}}), unit_weights(p3));
  const NeighborhoodEntry& ent = neighborhood_entry(c, 1);
  REQUIRE(ent.local.names.size() == 3);
  CHECK(ent.local.names == std::vector<BooleanPair>{{0, 1}, {1, 1}, {2, 1}});
  int bot = ent.sem.bottom;
  CHECK(ent.local.names[bot] == BooleanPair{1, 1});
  CHECK(ent.sem.val[bot] == 0);
  CHECK_FALSE(ent.sem.bounded(0, 2));  // the two half-edges have no join

  // same picture under the chain orientation, with the far tip renamed
  ModularComplex chain = make_complex(zxt::path(3));
  const LocalSemilattice& L = neighborhood_semilattice(chain, 1);
  REQUIRE(L.names.size() == 3);
  CHECK(L.names == std::vector<BooleanPair>{{0, 1}, {1, 1}, {1, 2}});
}

TEST_CASE("neighborhood of a four-cycle sink is a diamond") {
  ModularComplex c4 = make_complex(zxt::cycle(4));
  const NeighborhoodEntry& ent = neighborhood_entry(c4, 2);
  REQUIRE(ent.local.names.size() == 4);
  CHECK(ent.local.names ==
        std::vector<BooleanPair>{{0, 2}, {1, 2}, {2, 2}, {3, 2}});
  CHECK(ent.local.names[ent.sem.bottom] == BooleanPair{2, 2});
  CHECK(ent.sem.join_if_bounded(1, 3).value() == 0);
  CHECK(ent.sem.val[0] == Rat(1));
  CHECK(ent.sem.val[1] == Rat(1, 2));
  CHECK(ent.sem.val[3] == Rat(1, 2));
}

TEST_CASE("halved pair averages of a vertex function") {
  ModularComplex k2 = make_complex(zxt::path(2));
  std::vector<Rat> hg = lovasz_restriction(k2, rat_vec({0, 1}));
  CHECK(hg == std::vector<Rat>{Rat(0), Rat(1, 2), Rat(1)});

  ModularComplex c4 = make_complex(zxt::cycle(4));
  std::vector<Rat> cst = lovasz_restriction(c4, std::vector<Rat>(4, Rat(7)));
  for (const Rat& v : cst) CHECK(v == 7);

  const Subdivision& sd = two_subdivision(c4);
  std::vector<Rat> g = rat_vec({3, 1, 4, 1});
  std::vector<Rat> hg2 = lovasz_restriction(c4, g);
  for (int p = 0; p < 4; ++p) CHECK(hg2[sd.diag[p]] == g[p]);

  CHECK_THROWS_WITH(lovasz_restriction(c4, rat_vec({1, 2})),
                    "vertex function size mismatch");
}

TEST_CASE("convexity of vertex functions on a path") {
  ModularComplex p3 = make_complex(zxt::path(3));

  CHECK(is_L_convex(p3, rat_vec({1, 0, 1})).ok);
  CHECK(is_L_convex(p3, rat_vec({0, 1, 2})).ok);
  CHECK(is_L_convex(p3, rat_vec({5, 5, 5})).ok);

  LConvexity bad = is_L_convex(p3, rat_vec({0, 1, 0}));
  REQUIRE_FALSE(bad.ok);
  CHECK(bad.vertex == 1);
  CHECK(bad.a == BooleanPair{0, 1});
  CHECK(bad.b == BooleanPair{1, 2});

  CHECK_THROWS_WITH(is_L_convex(p3, rat_vec({1})), "vertex function size mismatch");
}

TEST_CASE("convexity of vertex functions on cycles and cubes") {
  ModularComplex c4 = make_complex(zxt::cycle(4));
  LConvexity bad = is_L_convex(c4, rat_vec({1, 0, 1, 0}));
  REQUIRE_FALSE(bad.ok);
  CHECK(bad.vertex == 0);
  CHECK(bad.a == BooleanPair{0, 1});
  CHECK(bad.b == BooleanPair{0, 3});

  for (int v = 0; v < 4; ++v) {
    std::vector<Rat> dist(4);
    for (int u = 0; u < 4; ++u) dist[u] = c4.distance(v, u);
    CHECK(is_L_convex(c4, dist).ok);
  }

  ModularComplex q3 = make_complex(zxt::cube());
  std::vector<Rat> pc(8);
  for (int v = 0; v < 8; ++v) pc[v] = Rat(std::popcount(unsigned(v)));
  CHECK(is_L_convex(q3, pc).ok);
}

TEST_CASE("distance is convex on the square of a complex") {
  for (const Graph& g : {zxt::path(2), zxt::path(3), zxt::cycle(4), zxt::weighted_c4()}) {
    ModularComplex c = make_complex(g);
    ModularComplex P = product_complex(c, c);
    int n = c.n();
    std::vector<Rat> d(static_cast<size_t>(n) * n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) d[static_cast<size_t>(u) * n + v] = c.distance(u, v);
    CHECK(is_L_convex(P, d).ok);

    ModularComplex D(P.graph, P.orientation, P.weights);
    CHECK(is_L_convex(D, d).ok);
  }
}

TEST_CASE("factored and dense convexity checks agree on random functions") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> num(0, 6), den(1, 3);

  ModularComplex P = product_complex(make_complex(zxt::path(2)), make_complex(zxt::path(3)));
  ModularComplex D(P.graph, P.orientation, P.weights);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rat> g(6);
    for (Rat& x : g) x = Rat(num(rng)) / den(rng);
    LConvexity a = is_L_convex(P, g);
    LConvexity b = is_L_convex(D, g);
    CHECK(a.ok == b.ok);
    if (!a.ok) CHECK(a.vertex == b.vertex);
  }

  ModularComplex C2 = product_complex(make_complex(zxt::cycle(4)), make_complex(zxt::cycle(4)));
  ModularComplex D2(C2.graph, C2.orientation, C2.weights);
  for (int t = 0; t < 8; ++t) {
    std::vector<Rat> g(16);
    for (Rat& x : g) x = Rat(num(rng)) / den(rng);
    LConvexity a = is_L_convex(C2, g);
    LConvexity b = is_L_convex(D2, g);
    CHECK(a.ok == b.ok);
    if (!a.ok) CHECK(a.vertex == b.vertex);
  }
}

TEST_CASE("restricting a chain cone to its own orbit is the identity") {
  ModularComplex p5 = make_complex(zxt::path(5));
  LocalSemilattice L = local_semilattice(p5, 0, '+');
  REQUIRE(L.verts == std::vector<int>{0, 1});
  REQUIRE(L.incident_orbits.size() == 1);

  OrbitRestriction r = restrict_to_orbit(L, L.incident_orbits[0].second);
  CHECK(r.sub.verts == L.verts);
  CHECK(r.sub.val == L.val);
  CHECK(r.gate == std::vector<int>{0, 1});

  OrbitRestriction empty = restrict_to_orbit(L, {});
  CHECK(empty.sub.verts == std::vector<int>{0});
  CHECK(empty.gate == std::vector<int>{0, 0});
}

TEST_CASE("restricting the four-cycle cone to one orbit yields a chain with gates") {
  ModularComplex c4 = make_complex(zxt::cycle(4));
  LocalSemilattice L = local_semilattice(c4, 0, '+');
  int e01 = c4.graph.edge_id(0, 1);
  std::vector<int> Q = c4.orbits.members[c4.orbits.orbit_of[e01]];
  REQUIRE(Q.size() == 2);

  OrbitRestriction r = restrict_to_orbit(L, Q);
  CHECK(r.sub.verts == std::vector<int>{0, 1});
  CHECK(r.sub.val == std::vector<Rat>{Rat(0), Rat(1)});
  REQUIRE(r.gate.size() == 4);
  CHECK(r.gate[L.index_of(0)] == 0);
  CHECK(r.gate[L.index_of(1)] == 1);
  CHECK(r.gate[L.index_of(2)] == 1);
  CHECK(r.gate[L.index_of(3)] == 0);

  CHECK_THROWS_WITH(restrict_to_orbit(L, {e01}), "orbit restriction not orbit-closed");
}

TEST_CASE("restricting the cube cone to a parallel class") {
  ModularComplex q3 = make_complex(zxt::cube());
  LocalSemilattice L = local_semilattice(q3, 0, '+');
  int e01 = q3.graph.edge_id(0, 1);
  std::vector<int> Q = q3.orbits.members[q3.orbits.orbit_of[e01]];
  REQUIRE(Q.size() == 4);

  OrbitRestriction r = restrict_to_orbit(L, Q);
  CHECK(r.sub.verts == std::vector<int>{0, 1});
  for (int v = 0; v < 8; ++v) CHECK(r.gate[L.index_of(v)] == (v & 1));
}

TEST_CASE("product of two edges is a four-cycle with factor provenance") {
  ModularComplex a = make_complex(zxt::path(2));
  ModularComplex P = product_complex(a, a);

  REQUIRE(P.graph.n == 4);
  REQUIRE((P.graph.edges ==
           std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {0, 2}, {1, 3}}));
  for (auto [t, h] : P.orientation.arc) CHECK(t < h);
  CHECK(P.orbits.count == 2);
  REQUIRE(P.factors.size() == 2);
  CHECK(P.stride == std::vector<int>{2, 1});

  CHECK(P.leq(0, 3));
  CHECK_FALSE(P.leq(1, 2));
  CHECK(P.distance(0, 3) == 2);
  CHECK(is_boolean_pair(P, 0, 3));
  CHECK(P.coords(3) == std::vector<int>{1, 1});
  CHECK(P.encode({1, 0}) == 2);

  ModularComplex D(P.graph, P.orientation, P.weights);
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) {
      CHECK(P.leq(u, v) == D.leq(u, v));
      CHECK(P.distance(u, v) == D.distance(u, v));
      CHECK(is_boolean_pair(P, u, v) == is_boolean_pair(D, u, v));
    }
}

TEST_CASE("product of an edge and a path is a grid") {
  ModularComplex P = product_complex(make_complex(zxt::path(2)), make_complex(zxt::path(3)));
  REQUIRE(P.graph.n == 6);
  REQUIRE(P.graph.edge_count() == 7);

  ModularComplex D(P.graph, P.orientation, P.weights);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v) {
      CHECK(P.leq(u, v) == D.leq(u, v));
      CHECK(P.distance(u, v) == D.distance(u, v));
      CHECK(is_boolean_pair(P, u, v) == is_boolean_pair(D, u, v));
    }
  PartialOrder po = order_from_orientation(P);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v) CHECK(po.leq(u, v) == D.leq(u, v));
}

TEST_CASE("nested products flatten their factors") {
  ModularComplex k2 = make_complex(zxt::path(2));
  ModularComplex p3 = make_complex(zxt::path(3));
  ModularComplex P = product_complex(product_complex(k2, k2), p3);
  REQUIRE(P.factors.size() == 3);
  CHECK(P.stride == std::vector<int>{6, 3, 1});
  REQUIRE(P.graph.n == 12);

  ModularComplex D(P.graph, P.orientation, P.weights);
  for (int u = 0; u < 12; ++u)
    for (int v = 0; v < 12; ++v) {
      CHECK(P.leq(u, v) == D.leq(u, v));
      CHECK(P.distance(u, v) == D.distance(u, v));
      CHECK(is_boolean_pair(P, u, v) == is_boolean_pair(D, u, v));
    }
}

TEST_CASE("boolean pairs and neighborhoods multiply across products") {
  ModularComplex k2 = make_complex(zxt::path(2));
  ModularComplex p3 = make_complex(zxt::path(3));
  ModularComplex P = product_complex(k2, p3);

  const Subdivision& sp = two_subdivision(P);
  CHECK(sp.names.size() == two_subdivision(k2).names.size() *
                               two_subdivision(p3).names.size());

  for (int v = 0; v < 6; ++v) {
    size_t lhs = neighborhood_semilattice(P, v).verts.size();
    size_t rhs = neighborhood_semilattice(k2, v / 3).verts.size() *
                 neighborhood_semilattice(p3, v % 3).verts.size();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("products carry non-unit weights through") {
  ModularComplex w = make_complex(zxt::weighted_c4());
  ModularComplex k2 = make_complex(zxt::path(2));
  ModularComplex P = product_complex(w, k2);
  REQUIRE(P.graph.n == 8);
  CHECK(P.distance(0, 5) == w.distance(0, 2) + 1);
  ModularComplex D(P.graph, P.orientation, P.weights);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) CHECK(P.distance(u, v) == D.distance(u, v));
}
